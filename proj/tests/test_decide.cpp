#include "vcd/decide.hpp"
#include "vcd/error.hpp"
#include "vcd/sympl.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace vcd;
using namespace vcd::decide;
using profiles::Cap;
using profiles::Codisc;
using profiles::Profile;

namespace {

constexpr double pi = std::numbers::pi;

auto cotangent_report(cotangent::BaseKind base, double lp, double lm, double err = 1e-13) -> InvariantReport {
  InvariantReport r;
  r.geometry = GeometryKind::cotangent;
  r.base = cotangent::Geometry{base, 2};
  r.L_plus = Entry{lp, err};
  r.L_minus = Entry{lm, err};
  r.Sigma = Entry{lp + lm, 2.0 * err};
  return r;
}

auto sympl_report(double ap, double am, double err = 1e-13) -> InvariantReport {
  InvariantReport r;
  r.geometry = GeometryKind::sympl;
  r.A_plus = Entry{ap, err};
  r.A_minus = Entry{am, err};
  r.T = Entry{ap + am, 2.0 * err};
  return r;
}

auto euclid_report(double hp, double hm, double err = 0.0) -> InvariantReport {
  InvariantReport r;
  r.mean_curv_plus = Entry{hp, err};
  r.mean_curv_minus = Entry{hm, err};
  return r;
}

auto class_of(Verdict v) -> int { return v == Verdict::contactomorphic_up_to ? 0 : static_cast<int>(v); }

}  // namespace

TEST_CASE("residue") {
  CHECK(residue(2.0 * pi, pi).k == 2);
  CHECK(residue(2.0 * pi, pi).residual < 1e-15);
  CHECK(residue(-0.4 * pi, pi).k == 0);
  CHECK(residue(0.3, 0.0).k == 0);
  CHECK(residue(0.3, 0.0).residual == 0.3);
  CHECK(residue(-3.4 * pi, 2.0 * pi).k == -2);
}

TEST_CASE("compute_invariants on the reference shapes") {
  const auto e = compute_invariants(
      profiles::make_radial_shape(profiles::Ball{1.0, 1}, Profile(Cap{1.0}), Profile(Cap{1.0}, -1.0)));
  CHECK(e.geometry == GeometryKind::euclid);
  CHECK(std::abs(e.mean_curv_plus->value + 1.0) < 1e-15);
  CHECK(std::abs(e.mean_curv_minus->value - 1.0) < 1e-15);
  CHECK_FALSE(e.Sigma.has_value());

  const auto c = compute_invariants(profiles::make_radial_shape(Codisc{cotangent::BaseKind::sphere, 2, 1.0},
                                                                Profile(Cap{1.0}), Profile(Cap{1.0}, -1.0)));
  CHECK(std::abs(c.L_plus->value + pi / 2) < 1e-9);
  CHECK(std::abs(c.Sigma->value + pi) < 1e-9);
  CHECK(std::abs(c.Sigma->value - c.L_plus->value - c.L_minus->value) <= c.Sigma->error + 1e-15);

  const profiles::RProfile sb(profiles::SinBridge{1.0, 0.0, 1.0});
  const auto s = compute_invariants(profiles::make_interval_shape(profiles::Interval{0.0, 1.0}, sb, sb.scaled(-1.0)));
  CHECK(std::abs(s.T->value - 2.0 * pi * (1.0 + std::exp(-1.0)) / (1.0 + pi * pi)) < 1e-9);
  CHECK_FALSE(s.L_plus.has_value());
}

TEST_CASE("euclid decisions") {
  CHECK(decide_euclid(euclid_report(-1, 1), euclid_report(-1, 1)).verdict == Verdict::contactomorphic);
  CHECK(decide_euclid(euclid_report(-1, 1), euclid_report(-2, 1)).verdict == Verdict::not_contactomorphic);
  CHECK(decide_euclid(euclid_report(-1, 1), euclid_report(-1 + 5e-8, 1)).verdict == Verdict::contactomorphic);
  CHECK(decide_euclid(euclid_report(-1, 1, 1e-6), euclid_report(-1 + 5e-7, 1)).verdict == Verdict::inconclusive);
}

TEST_CASE("cotangent decisions") {
  using cotangent::BaseKind;
  const auto s0 = cotangent_report(BaseKind::sphere, -pi / 2, -pi / 2);

  const auto d = decide_cotangent(cotangent_report(BaseKind::sphere, pi / 2, pi / 2), s0, CotangentMode::sigma_only);
  CHECK(d.verdict == Verdict::contactomorphic_up_to);
  CHECK(d.k == 2);

  const auto t = decide_cotangent(cotangent_report(BaseKind::flat_torus, 0.2, 0.1),
                                  cotangent_report(BaseKind::flat_torus, 0.0, 0.0), CotangentMode::sigma_only);
  CHECK(t.verdict == Verdict::not_contactomorphic);
  CHECK_FALSE(t.k.has_value());

  const auto h = decide_cotangent(cotangent_report(BaseKind::sphere, pi / 2, -3 * pi / 2), s0,
                                  CotangentMode::half_lengths);
  CHECK(h.verdict == Verdict::contactomorphic_up_to);
  CHECK(h.k_plus == 1);
  CHECK(h.k_minus == -1);
  CHECK(h.k == 0);
  CHECK(decide_cotangent(cotangent_report(BaseKind::sphere, pi / 2, -3 * pi / 2), s0, CotangentMode::sigma_only).k ==
        0);

  // odd multiples are not allowed in the even mode
  CHECK(decide_cotangent(cotangent_report(BaseKind::sphere, pi / 2, -3 * pi / 2), s0,
                         CotangentMode::half_lengths_even)
            .verdict == Verdict::not_contactomorphic);
  const auto ev = decide_cotangent(cotangent_report(BaseKind::sphere, 3 * pi / 2, -pi / 2), s0,
                                   CotangentMode::half_lengths_even);
  CHECK(ev.k_plus == 1);
  CHECK(ev.k_minus == 0);
  CHECK(ev.k == 2);

  CHECK_THROWS_AS(decide_cotangent(s0, cotangent_report(BaseKind::flat_torus, 0, 0), CotangentMode::sigma_only),
                  Error);
  CHECK_THROWS_AS(decide_cotangent(s0, sympl_report(0, 0), CotangentMode::sigma_only), Error);
}

TEST_CASE("sympl decisions") {
  const auto base = sympl_report(0.3, 0.4);
  const auto d = decide_sympl(sympl_report(0.3 + 2 * pi, 0.4), base, SymplMode::total);
  CHECK(d.verdict == Verdict::contactomorphic_up_to);
  CHECK(d.k == 1);
  const auto z = decide_sympl(base, base, SymplMode::total);
  CHECK(z.verdict == Verdict::contactomorphic);
  CHECK(z.k == 0);
  const auto ps = decide_sympl(sympl_report(0.3 + 2 * pi, 0.4 - 2 * pi), base, SymplMode::per_sheet);
  CHECK(ps.k_plus == 1);
  CHECK(ps.k_minus == -1);
  CHECK(ps.k == 0);
  CHECK(decide_sympl(sympl_report(0.3 + 0.05, 0.4), base, SymplMode::total).verdict ==
        Verdict::not_contactomorphic);
  CHECK(decide_sympl(sympl_report(0.3 + 5e-8, 0.4), base, SymplMode::total).verdict == Verdict::contactomorphic);
}

TEST_CASE("swapping the arguments negates k") {
  using cotangent::BaseKind;
  moser::Uniform u(3);
  for (int i = 0; i < 50; ++i) {
    const int kp = static_cast<int>(u.in(-4, 4));
    const int km = static_cast<int>(u.in(-4, 4));
    const double jitter = u.in(-1e-3, 1e-3) * (i % 3 == 0 ? 1.0 : 0.0);
    const auto a = cotangent_report(BaseKind::sphere, 0.2 + kp * pi + jitter, -0.7 + km * pi);
    const auto b = cotangent_report(BaseKind::sphere, 0.2, -0.7);
    for (auto mode : {CotangentMode::sigma_only, CotangentMode::half_lengths, CotangentMode::half_lengths_even}) {
      const auto ab = decide_cotangent(a, b, mode);
      const auto ba = decide_cotangent(b, a, mode);
      CHECK(class_of(ab.verdict) == class_of(ba.verdict));
      if (ab.k) CHECK(*ab.k == -*ba.k);
      if (ab.k_plus) CHECK(*ab.k_plus == -*ba.k_plus);
    }
    const auto sa = sympl_report(0.1 + 2 * kp * pi + jitter, 0.5 + 2 * km * pi);
    const auto sb = sympl_report(0.1, 0.5);
    for (auto mode : {SymplMode::total, SymplMode::per_sheet}) {
      const auto ab = decide_sympl(sa, sb, mode);
      const auto ba = decide_sympl(sb, sa, mode);
      CHECK(class_of(ab.verdict) == class_of(ba.verdict));
      if (ab.k) CHECK(*ab.k == -*ba.k);
    }
  }
}

TEST_CASE("enlarging the tolerance never turns a match into a mismatch") {
  moser::Uniform u(19);
  for (int i = 0; i < 200; ++i) {
    const auto a = sympl_report(u.in(-10, 10), 0.0, u.in(0.0, 1e-6));
    const auto b = sympl_report(u.in(-10, 10), 0.0, u.in(0.0, 1e-6));
    double tol = 1e-9;
    bool matched = false;
    for (int j = 0; j < 12; ++j, tol *= 10.0) {
      const auto v = decide_sympl(a, b, SymplMode::total, tol).verdict;
      if (matched) CHECK(v != Verdict::not_contactomorphic);
      if (v == Verdict::contactomorphic || v == Verdict::contactomorphic_up_to) matched = true;
    }
  }
}

TEST_CASE("constructed twist pairs decide as predicted") {
  const auto s = profiles::make_radial_shape(Codisc{cotangent::BaseKind::sphere, 2, 1.0}, Profile(Cap{1.0}),
                                             Profile(Cap{1.0}, -1.0));
  const auto ds = cotangent::cogeodesic_twist(s, profiles::Ramp{0.0, pi, 0.3, 0.7});
  const auto src = compute_invariants(s);
  const auto dst = compute_invariants(ds.target);
  const auto h = decide_cotangent(src, dst, CotangentMode::half_lengths);
  CHECK(h.k_plus == 1);
  CHECK(h.k_minus == -1);
  CHECK(h.k == 0);
  CHECK(decide_cotangent(src, dst, CotangentMode::sigma_only).verdict == Verdict::contactomorphic);

  const profiles::RProfile sb(profiles::SinBridge{1.0, 0.0, 1.0});
  const auto circle = profiles::make_interval_shape(profiles::Interval{0.0, 1.0}, sb, sb.scaled(-1.0));
  const auto rt = sympl::reeb_twist(circle, 0.0, 2.0 * pi);
  const auto p = decide_sympl(compute_invariants(circle), compute_invariants(rt.target), SymplMode::per_sheet);
  CHECK(p.verdict == Verdict::contactomorphic_up_to);
  CHECK(p.k_plus == 1);
  CHECK(p.k_minus == -1);
  CHECK(p.k == 0);
}

TEST_CASE("decision JSON") {
  const auto d = decide_sympl(sympl_report(0.3 + 2 * pi, 0.4), sympl_report(0.3, 0.4), SymplMode::total);
  const auto j = to_json(d);
  CHECK(j["verdict"] == "ContactomorphicUpTo");
  CHECK(j["k"] == 1);
  CHECK(j["k_plus"].is_null());
  CHECK(j["tolerances"]["tol"] == default_tolerance);
  CHECK_FALSE(j["rationale"].get<std::string>().empty());
  CHECK(to_string(Verdict::not_contactomorphic) == "NotContactomorphic");
  CHECK(to_json(sympl_report(0.1, 0.2))["geometry"] == "sympl");
}

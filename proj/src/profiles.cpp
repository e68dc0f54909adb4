#include "vcd/profiles.hpp"

#include "vcd/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace vcd::profiles {
namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

const numerics::Quadrature potential_quad{1e-14, 1e-13, 40};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

auto cap_in_s(const Cap& c, double s) -> Jet {
  double d = c.r0 * c.r0 - s;
  if (d < 0.0) {
    if (d < -1e-13 * c.r0 * c.r0) {
      throw Error(ErrorCode::OutOfDomain, "cap evaluated beyond its radius");
    }
    d = 0.0;
  }
  if (d == 0.0) return {0.0, -inf, -inf};
  const double q = std::sqrt(d);
  return {q, -0.5 / q, -0.25 / (q * d)};
}

auto poly_in_s(const PolyEven& p, double s) -> Jet {
  Jet j{};
  const auto& c = p.coefficients;
  for (std::size_t k = c.size(); k-- > 0;) {
    j.d2 = j.d2 * s + 2.0 * j.d1;
    j.d1 = j.d1 * s + j.v;
    j.v = j.v * s + c[k];
  }
  return j;
}

auto bump_in_s(const BumpEven& b, double s) -> Jet {
  const Jet u = smooth::bump((s - b.center) / b.halfwidth);
  const double w = b.halfwidth;
  return {b.amplitude * u.v, b.amplitude * u.d1 / w, b.amplitude * u.d2 / (w * w)};
}

auto twist_in_s(const TwistPotential& t, double s) -> Jet {
  const double r = std::sqrt(std::max(s, 0.0));
  const double lo = std::max(r, t.theta.lo);
  double value = 0.0;
  if (t.tail) {
    value = -(*t.tail)(lo);
  } else if (lo < t.theta.hi) {
    auto integrand = [&](double tau) { return tau * t.theta.at(tau).d1; };
    value = -numerics::integrate_1d(integrand, lo, t.theta.hi, potential_quad).value;
  }
  if (r <= t.theta.lo || r >= t.theta.hi) return {value, 0.0, 0.0};
  const Jet th = t.theta.at(r);
  return {value, 0.5 * th.d1, 0.25 * th.d2 / r};
}

}  // namespace

auto make_twist_potential(const Ramp& theta, double r0) -> TwistPotential {
  TwistPotential t{theta, r0, nullptr};
  if (theta.hi > theta.lo) {
    t.tail = std::make_shared<const numerics::TailIntegral>(
        [theta](double tau) { return tau * theta.at(tau).d1; }, theta.lo, theta.hi);
  }
  return t;
}

auto Ramp::at(double x) const -> Jet {
  const double w = hi - lo;
  const Jet s = smooth::step((x - lo) / w);
  const double d = end - start;
  return {start + d * s.v, d * s.d1 / w, d * s.d2 / (w * w)};
}

auto Profile::in_s(double s) const -> Jet {
  const Jet j = std::visit(
      overloaded{
          [&](const Cap& c) { return cap_in_s(c, s); },
          [&](const PolyEven& p) { return poly_in_s(p, s); },
          [&](const BumpEven& b) { return bump_in_s(b, s); },
          [&](const TwistPotential& t) { return twist_in_s(t, s); },
          [&](const Sum& sum) {
            Jet acc{};
            for (const auto& term : sum.terms) acc = acc + term.in_s(s);
            return acc;
          },
      },
      kind_);
  return scale_ * j;
}

auto Profile::eval(double r, int order) const -> double {
  if (order < 0 || order > 2) throw Error(ErrorCode::InvalidArgument, "order must be 0, 1 or 2");
  const double rmax = domain_radius();
  if (std::abs(r) > rmax * (1.0 + 1e-14)) {
    throw Error(ErrorCode::OutOfDomain, "radius " + std::to_string(r) + " outside the profile");
  }
  if (order > 0 && boundary_singular() && std::abs(r) >= rmax) {
    throw Error(ErrorCode::SingularEndpoint, "derivative requested at the boundary radius");
  }
  const Jet j = in_s(r * r);
  switch (order) {
    case 0: return j.v;
    case 1: return 2.0 * r * j.d1;
    default: return 2.0 * j.d1 + 4.0 * r * r * j.d2;
  }
}

auto Profile::boundary_singular() const -> bool {
  return std::visit(overloaded{
                        [](const Cap&) { return true; },
                        [](const Sum& sum) {
                          return std::any_of(sum.terms.begin(), sum.terms.end(),
                                             [](const Profile& p) { return p.boundary_singular(); });
                        },
                        [](const auto&) { return false; },
                    },
                    kind_);
}

auto Profile::domain_radius() const -> double {
  return std::visit(overloaded{
                        [](const Cap& c) { return c.r0; },
                        [](const Sum& sum) {
                          double r = inf;
                          for (const auto& p : sum.terms) r = std::min(r, p.domain_radius());
                          return r;
                        },
                        [](const auto&) { return inf; },
                    },
                    kind_);
}

auto even_factor(const Profile& p) -> numerics::ScalarFn {
  return [p](double s) { return p.in_s(s).v; };
}

auto eval(const Profile& p, double r, int order) -> double { return p.eval(r, order); }

// ---------------------------------------------------------------------------

auto make_tabulated(std::vector<double> a, std::vector<double> f) -> Tabulated {
  const std::size_t n = a.size();
  if (n < 2 || f.size() != n) throw Error(ErrorCode::InvalidArgument, "tabulated profile needs >= 2 knots");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(a[i] > a[i - 1])) throw Error(ErrorCode::InvalidArgument, "knots must increase");
  }
  // natural spline: tridiagonal solve for the second derivatives
  std::vector<double> m(n, 0.0);
  std::vector<double> c(n, 0.0);
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = a[i] - a[i - 1];
    const double h1 = a[i + 1] - a[i];
    const double diag = 2.0 * (h0 + h1);
    const double rhs = 6.0 * ((f[i + 1] - f[i]) / h1 - (f[i] - f[i - 1]) / h0);
    const double denom = diag - h0 * c[i - 1];
    c[i] = h1 / denom;
    d[i] = (rhs - h0 * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 1;) m[i] = d[i] - c[i] * m[i + 1];
  return {std::move(a), std::move(f), std::move(m)};
}

auto ReebRamp::window(int i) const -> Ramp {
  const double len = a0 - a1;
  return i == 1 ? Ramp{0.0, 1.0, a1 + 0.1 * len, a1 + 0.4 * len}
                : Ramp{0.0, 1.0, a1 + 0.6 * len, a1 + 0.9 * len};
}

auto ReebRamp::at(double a) const -> Jet {
  return Jet{theta1, 0.0, 0.0} + w1 * window(1).at(a) + w2 * window(2).at(a);
}

auto make_reeb_ramp(double theta1, double theta0, double a1, double a0) -> ReebRamp {
  if (!(a0 > a1)) throw Error(ErrorCode::InvalidArgument, "interval must have a0 > a1");
  ReebRamp r{theta1, theta0, a1, a0, 0.0, 0.0};
  auto moment = [&](int i) {
    const Ramp w = r.window(i);
    auto g = [&](double t) { return std::exp(t) * w.at(t).d1; };
    return numerics::integrate_1d(g, w.lo, w.hi, potential_quad).value;
  };
  const double m1 = moment(1);
  const double m2 = moment(2);
  const double delta = theta0 - theta1;
  r.w1 = delta * m2 / (m2 - m1);
  r.w2 = -delta * m1 / (m2 - m1);
  auto tail = [&](int i) {
    const Ramp w = r.window(i);
    return std::make_shared<const numerics::TailIntegral>([w](double t) { return std::exp(t) * w.at(t).d1; }, w.lo,
                                                          w.hi);
  };
  r.tail1 = tail(1);
  r.tail2 = tail(2);
  return r;
}

namespace {

auto tabulated_at(const Tabulated& t, double x) -> Jet {
  const auto& a = t.a;
  if (x < a.front() - 1e-12 || x > a.back() + 1e-12) {
    throw Error(ErrorCode::OutOfDomain, "tabulated profile evaluated outside its knots");
  }
  std::size_t i = static_cast<std::size_t>(std::upper_bound(a.begin(), a.end(), x) - a.begin());
  i = std::clamp<std::size_t>(i, 1, a.size() - 1);
  const double h = a[i] - a[i - 1];
  const double p = (a[i] - x) / h;
  const double q = (x - a[i - 1]) / h;
  const double m0 = t.second[i - 1];
  const double m1 = t.second[i];
  const double v = p * t.f[i - 1] + q * t.f[i] + ((p * p * p - p) * m0 + (q * q * q - q) * m1) * h * h / 6.0;
  const double d1 = (t.f[i] - t.f[i - 1]) / h + ((1.0 - 3.0 * p * p) * m0 + (3.0 * q * q - 1.0) * m1) * h / 6.0;
  const double d2 = p * m0 + q * m1;
  return {v, d1, d2};
}

auto reeb_potential_at(const ReebPotential& rp, double a) -> Jet {
  const ReebRamp& th = rp.theta;
  double value = 0.0;
  for (int i : {1, 2}) {
    const Ramp w = th.window(i);
    const double lo = std::max(a, w.lo);
    if (lo >= w.hi) continue;
    const auto& tail = i == 1 ? th.tail1 : th.tail2;
    double part;
    if (tail) {
      part = (*tail)(lo);
    } else {
      auto g = [&](double t) { return std::exp(t) * w.at(t).d1; };
      part = numerics::integrate_1d(g, lo, w.hi, potential_quad).value;
    }
    value -= (i == 1 ? th.w1 : th.w2) * part;
  }
  const Jet t = th.at(a);
  const double e = std::exp(a);
  return {value, e * t.d1, e * (t.d1 + t.d2)};
}

}  // namespace

auto RProfile::at(double a) const -> Jet {
  const Jet j = std::visit(
      overloaded{
          [&](const Linear& l) { return Jet{l.slope * a + l.offset, l.slope, 0.0}; },
          [&](const SinBridge& s) {
            const double k = std::numbers::pi / (s.a0 - s.a1);
            const double x = k * (a - s.a1);
            return Jet{s.amplitude * std::sin(x), s.amplitude * k * std::cos(x),
                       -s.amplitude * k * k * std::sin(x)};
          },
          [&](const Bump& b) {
            const Jet u = smooth::bump((a - b.center) / b.halfwidth);
            const double w = b.halfwidth;
            return Jet{b.amplitude * u.v, b.amplitude * u.d1 / w, b.amplitude * u.d2 / (w * w)};
          },
          [&](const Tabulated& t) { return tabulated_at(t, a); },
          [&](const ReebPotential& rp) { return reeb_potential_at(rp, a); },
          [&](const RSum& sum) {
            Jet acc{};
            for (const auto& term : sum.terms) acc = acc + term.at(a);
            return acc;
          },
      },
      kind_);
  return scale_ * j;
}

auto RProfile::eval(double a, int order) const -> double {
  const Jet j = at(a);
  switch (order) {
    case 0: return j.v;
    case 1: return j.d1;
    case 2: return j.d2;
    default: throw Error(ErrorCode::InvalidArgument, "order must be 0, 1 or 2");
  }
}

// ---------------------------------------------------------------------------

auto Shape::radial_plus() const -> const Profile& {
  if (const auto* p = std::get_if<Profile>(&f_plus)) return *p;
  throw Error(ErrorCode::GeometryMismatch, "shape has interval profiles");
}
auto Shape::radial_minus() const -> const Profile& {
  if (const auto* p = std::get_if<Profile>(&f_minus)) return *p;
  throw Error(ErrorCode::GeometryMismatch, "shape has interval profiles");
}
auto Shape::interval_plus() const -> const RProfile& {
  if (const auto* p = std::get_if<RProfile>(&f_plus)) return *p;
  throw Error(ErrorCode::GeometryMismatch, "shape has radial profiles");
}
auto Shape::interval_minus() const -> const RProfile& {
  if (const auto* p = std::get_if<RProfile>(&f_minus)) return *p;
  throw Error(ErrorCode::GeometryMismatch, "shape has radial profiles");
}

auto Shape::radius() const -> double {
  if (const auto* b = std::get_if<Ball>(&shadow)) return b->r0;
  if (const auto* c = std::get_if<Codisc>(&shadow)) return c->r0;
  throw Error(ErrorCode::GeometryMismatch, "interval shadow has no radius");
}

auto Shape::interval_shadow() const -> const Interval& {
  if (const auto* i = std::get_if<Interval>(&shadow)) return *i;
  throw Error(ErrorCode::GeometryMismatch, "shadow is not an interval");
}

auto make_radial_shape(Shadow shadow, Profile plus, Profile minus) -> Shape {
  if (std::holds_alternative<Interval>(shadow)) {
    throw Error(ErrorCode::GeometryMismatch, "radial profiles need a ball or codisc shadow");
  }
  return Shape{std::move(shadow), std::move(plus), std::move(minus)};
}

auto make_interval_shape(Interval shadow, RProfile plus, RProfile minus) -> Shape {
  return Shape{shadow, std::move(plus), std::move(minus)};
}

auto validate_shape(const Shape& s, int samples) -> ValidationReport {
  ValidationReport rep;
  rep.min_gap = inf;
  constexpr double boundary_tol = 1e-12;
  if (std::holds_alternative<Interval>(s.shadow)) {
    const Interval iv = s.interval_shadow();
    const RProfile& fp = s.interval_plus();
    const RProfile& fm = s.interval_minus();
    for (int k = 1; k < samples; ++k) {
      const double a = iv.a1 + (iv.a0 - iv.a1) * k / samples;
      rep.min_gap = std::min(rep.min_gap, fp.eval(a, 0) - fm.eval(a, 0));
    }
    rep.boundary_gap = std::max(std::abs(fp.eval(iv.a1, 0) - fm.eval(iv.a1, 0)),
                                std::abs(fp.eval(iv.a0, 0) - fm.eval(iv.a0, 0)));
  } else {
    const double r0 = s.radius();
    const Profile& fp = s.radial_plus();
    const Profile& fm = s.radial_minus();
    if (fp.domain_radius() < r0 || fm.domain_radius() < r0) {
      throw Error(ErrorCode::OutOfDomain, "profile is not defined on the whole shadow");
    }
    for (int k = 0; k < samples; ++k) {
      const double r = r0 * k / samples;
      rep.min_gap = std::min(rep.min_gap, fp.eval(r, 0) - fm.eval(r, 0));
    }
    rep.boundary_gap = std::abs(fp.eval(r0, 0) - fm.eval(r0, 0));
  }
  if (!(rep.min_gap > 0.0)) {
    rep.ok = false;
    rep.problem = "violated-ordering";
  } else if (rep.boundary_gap > boundary_tol) {
    rep.ok = false;
    rep.problem = "boundary-mismatch";
  }
  return rep;
}

void require_valid(const Shape& s) {
  const ValidationReport rep = validate_shape(s);
  if (rep.ok) return;
  if (rep.problem == "violated-ordering") {
    throw Error(ErrorCode::ViolatedOrdering, "f_- < f_+ fails, min gap " + std::to_string(rep.min_gap));
  }
  throw Error(ErrorCode::BoundaryMismatch, "sheets differ on the boundary by " + std::to_string(rep.boundary_gap));
}

namespace {

auto same_shadow(const Shadow& a, const Shadow& b) -> bool {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<Ball>(&a)) {
    const auto& y = std::get<Ball>(b);
    return x->r0 == y.r0 && x->n == y.n;
  }
  if (const auto* x = std::get_if<Codisc>(&a)) {
    const auto& y = std::get<Codisc>(b);
    return x->r0 == y.r0 && x->n == y.n && x->base == y.base;
  }
  const auto& x = std::get<Interval>(a);
  const auto& y = std::get<Interval>(b);
  return x.a1 == y.a1 && x.a0 == y.a0;
}

}  // namespace

auto equivalence_check(const Shape& s, const Shape& t, double delta) -> EquivalenceReport {
  if (!same_shadow(s.shadow, t.shadow)) throw Error(ErrorCode::ShadowMismatch, "shadows differ");
  constexpr int samples = 200;
  double worst = 0.0;
  if (std::holds_alternative<Interval>(s.shadow)) {
    const Interval iv = s.interval_shadow();
    if (delta <= 0.0) delta = 0.05 * (iv.a0 - iv.a1);
    for (int sheet : {1, -1}) {
      const RProfile& f = s.interval(sheet);
      const RProfile& g = t.interval(sheet);
      for (int k = 0; k <= samples; ++k) {
        for (double a : {iv.a1 + delta * k / samples, iv.a0 - delta * k / samples}) {
          const Jet d = f.at(a) - g.at(a);
          worst = std::max({worst, std::abs(d.v), std::abs(d.d1), std::abs(d.d2)});
        }
      }
    }
  } else {
    const double r0 = s.radius();
    if (delta <= 0.0) delta = 0.05 * r0;
    for (int sheet : {1, -1}) {
      const Profile& f = s.radial(sheet);
      const Profile& g = t.radial(sheet);
      worst = std::max(worst, std::abs(f.eval(r0, 0) - g.eval(r0, 0)));
      for (int k = 1; k <= samples; ++k) {
        const double r = r0 - delta * k / samples;
        for (int order = 0; order <= 2; ++order) {
          worst = std::max(worst, std::abs(f.eval(r, order) - g.eval(r, order)));
        }
      }
    }
  }
  return {worst <= 1e-12, worst};
}

}  // namespace vcd::profiles

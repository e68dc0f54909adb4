#include "vcd/error.hpp"
#include "vcd/moser.hpp"
#include "vcd/numerics.hpp"
#include "vcd/profiles.hpp"
#include "vcd/shape_json.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace vcd;
using namespace vcd::profiles;

namespace {

auto named_profiles() -> std::vector<Profile> {
  return {
      Profile(Cap{1.0}),
      Profile(Cap{1.0}, -1.0),
      Profile(PolyEven{{1.0, -1.0, 1.0}}),
      Profile(BumpEven{0.1, 0.3, 0.7}),
      Profile(make_twist_potential(Ramp{0.0, 2.0, 0.3, 0.7}, 1.0)),
      Profile(Cap{1.0}) + Profile(BumpEven{0.05, 0.2, -0.4}),
  };
}

auto cap_shape() -> Shape { return make_radial_shape(Ball{1.0, 1}, Profile(Cap{1.0}), Profile(Cap{1.0}, -1.0)); }

}  // namespace

TEST_CASE("eval closed forms") {
  CHECK(Profile(Cap{1.0}).eval(0.0, 0) == 1.0);
  CHECK(std::abs(Profile(PolyEven{{1.0, -1.0, 1.0}}).eval(std::sqrt(2.0), 0) - 3.0) < 1e-14);
  CHECK(std::abs(Profile(Cap{1.0}).eval(0.0, 2) + 1.0) < 1e-15);
  CHECK(std::abs(Profile(Cap{2.0}).eval(1.2, 0) - std::sqrt(4.0 - 1.44)) < 1e-15);
  CHECK(std::abs(Profile(Cap{1.0}).eval(0.6, 1) + 0.75) < 1e-15);
}

TEST_CASE("cap derivatives at the boundary are errors") {
  CHECK_NOTHROW(Profile(Cap{1.0}).eval(1.0, 0));
  CHECK_THROWS_AS(Profile(Cap{1.0}).eval(1.0, 1), Error);
  CHECK_THROWS_AS(Profile(Cap{1.0}).eval(1.5, 0), Error);
  CHECK(Profile(Cap{1.0}).boundary_singular());
  CHECK_FALSE(Profile(PolyEven{{1.0}}).boundary_singular());
}

TEST_CASE("even factor and representation identity") {
  const auto poly = even_factor(Profile(PolyEven{{0.5, 2.0, -1.0}}));
  CHECK(std::abs(poly(0.3) - (0.5 + 0.6 - 0.09)) < 1e-15);
  CHECK(std::abs(even_factor(Profile(Cap{1.0}))(0.36) - 0.8) < 1e-15);
  const Profile sum = Profile(Cap{1.0}) + Profile(PolyEven{{0.5, 2.0, -1.0}});
  CHECK(std::abs(even_factor(sum)(0.25) - (std::sqrt(0.75) + 0.5 + 0.5 - 0.0625)) < 1e-15);

  moser::Uniform u(3);
  for (const Profile& p : named_profiles()) {
    const auto ef = even_factor(p);
    for (int k = 0; k < 256; ++k) {
      const double r = u.in(0.0, 0.999);
      CHECK(eval(p, r, 0) == ef(r * r));
    }
    CHECK(std::abs(eval(p, 0.0, 1)) == 0.0);
  }
}

TEST_CASE("hessian at the origin is f''(0) times the identity") {
  for (const Profile& p : named_profiles()) {
    for (int dim : {2, 4}) {
      const auto h = numerics::hessian_fd([&p](const Eigen::VectorXd& x) { return p.eval(x.norm(), 0); },
                                          Eigen::VectorXd::Zero(dim));
      const Eigen::MatrixXd expect = p.eval(0.0, 2) * Eigen::MatrixXd::Identity(dim, dim);
      CHECK((h - expect).cwiseAbs().maxCoeff() < 1e-4);
    }
  }
}

TEST_CASE("first divided difference at 0 matches f'(0)") {
  for (const Profile& p : named_profiles()) {
    auto deriv = [&p](double t, int j) { return p.eval(std::abs(t), j) * (j == 1 && t < 0.0 ? -1.0 : 1.0); };
    CHECK(std::abs(numerics::divided_difference(deriv, 1)(0.0) - p.eval(0.0, 1)) < 1e-10);
    // f_1(t) t = f(t) - f(0) away from 0
    const double t = 0.4;
    CHECK(std::abs(numerics::divided_difference(deriv, 1)(t) * t - (p.eval(t, 0) - p.eval(0.0, 0))) < 1e-9);
  }
}

TEST_CASE("interval profiles") {
  const RProfile sb(SinBridge{1.0, 0.0, 1.0});
  CHECK(std::abs(sb.eval(0.5, 0) - 1.0) < 1e-15);
  CHECK(std::abs(sb.eval(0.0, 1) - std::numbers::pi) < 1e-14);
  const RProfile lin(Linear{2.0, -1.0});
  CHECK(lin.eval(0.25, 0) == -0.5);
  CHECK(lin.eval(0.25, 1) == 2.0);
  const RProfile tab(make_tabulated({0.0, 0.5, 1.0, 1.5}, {0.0, 1.0, 0.0, -1.0}));
  CHECK(std::abs(tab.eval(0.5, 0) - 1.0) < 1e-15);
  CHECK(std::abs(tab.eval(0.0, 2)) < 1e-12);  // natural spline
}

TEST_CASE("reeb ramp hits its end values with zero weighted moment") {
  const ReebRamp r = make_reeb_ramp(0.3, 2.0, -0.5, 1.0);
  CHECK(std::abs(r.at(-0.5).v - 0.3) < 1e-14);
  CHECK(std::abs(r.at(1.0).v - 2.0) < 1e-14);
  const auto m = numerics::integrate_1d([&r](double a) { return std::exp(a) * r.at(a).d1; }, -0.5, 1.0,
                                        {1e-13, 1e-13, 60});
  CHECK(std::abs(m.value) < 1e-10);
}

TEST_CASE("validate_shape") {
  CHECK(validate_shape(cap_shape()).ok);
  const Shape flipped = make_radial_shape(Ball{1.0, 1}, Profile(Cap{1.0}, -1.0), Profile(Cap{1.0}));
  const auto bad = validate_shape(flipped);
  CHECK_FALSE(bad.ok);
  CHECK(bad.problem == "violated-ordering");
  CHECK_THROWS_AS(require_valid(flipped), Error);

  const Shape bumped = make_radial_shape(Ball{1.0, 1}, Profile(Cap{1.0}) + Profile(BumpEven{0.5, 0.2, 10.0}),
                                         Profile(Cap{1.0}, -1.0));
  CHECK(validate_shape(bumped, 10000).ok);

  const Shape offset = make_radial_shape(Ball{1.0, 1}, Profile(PolyEven{{1.0, -0.5}}), Profile(PolyEven{{-1.0, 1.0}}));
  CHECK(validate_shape(offset).problem == "boundary-mismatch");

  const RProfile sb(SinBridge{1.0, 0.0, 1.0});
  CHECK(validate_shape(make_interval_shape(Interval{0.0, 1.0}, sb, sb.scaled(-1.0))).ok);
}

TEST_CASE("equivalence_check on collars") {
  const Shape s = cap_shape();
  CHECK(equivalence_check(s, s).equivalent);
  CHECK(equivalence_check(s, s).discrepancy == 0.0);

  // bump supported in s ∈ [0.2, 0.4], i.e. r < 0.633, disjoint from the collar [0.9, 1]
  const Shape t = make_radial_shape(Ball{1.0, 1}, Profile(Cap{1.0}) + Profile(BumpEven{0.3, 0.1, 0.05}),
                                    Profile(Cap{1.0}, -1.0));
  const auto e = equivalence_check(s, t, 0.1);
  CHECK(e.equivalent);
  CHECK(e.discrepancy == 0.0);

  const Shape wide = make_radial_shape(Ball{1.0, 1}, Profile(Cap{1.0}) + Profile(BumpEven{0.6, 0.5, 0.05}),
                                       Profile(Cap{1.0}, -1.0));
  const auto w = equivalence_check(s, wide, 0.1);
  CHECK_FALSE(w.equivalent);
  CHECK(w.discrepancy > 0.0);

  const Shape other = make_radial_shape(Ball{2.0, 1}, Profile(Cap{2.0}), Profile(Cap{2.0}, -1.0));
  CHECK_THROWS_AS(equivalence_check(s, other), Error);
}

TEST_CASE("shape JSON round trip") {
  const Shape s = make_radial_shape(
      Codisc{BaseKind::sphere, 2, 1.0},
      Profile(Cap{1.0}) + Profile(make_twist_potential(Ramp{0.0, 0.3, 0.3, 0.7}, 1.0)).scaled(-1.0),
      Profile(Cap{1.0}, -1.0));
  const Json j = to_json(s);
  const Shape back = shape_from_json(Json::parse(j.dump()));
  CHECK(to_json(back) == j);
  for (double r : {0.0, 0.2, 0.5, 0.9}) {
    CHECK(back.radial_plus().eval(r, 0) == s.radial_plus().eval(r, 0));
    CHECK(back.radial_plus().eval(r, 2) == s.radial_plus().eval(r, 2));
  }

  const RProfile sb(SinBridge{1.0, 0.0, 1.0});
  const Shape iv = make_interval_shape(Interval{0.0, 1.0}, sb + RProfile(ReebPotential{make_reeb_ramp(0.0, 1.0, 0.0, 1.0)}),
                                       sb.scaled(-1.0));
  const Json ji = to_json(iv);
  CHECK(to_json(shape_from_json(Json::parse(ji.dump()))) == ji);

  CHECK_THROWS_AS(shape_from_json(Json::parse(R"({"shadow": {"kind": "ball", "r0": 1}, "f_plus": {"kind": "nope"}})")),
                  Error);
}

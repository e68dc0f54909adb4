#pragma once

#include "vcd/numerics.hpp"
#include "vcd/smooth.hpp"

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace vcd::profiles {

// Radial sheet functions f(r) = F(r^2) are stored through their even factor F(s).

struct Cap {
  double r0 = 1.0;
};

/// F(s) = sum_k c_k s^k
struct PolyEven {
  std::vector<double> coefficients;
};

/// F(s) = A exp(-1/(1-u^2)), u = (s - center) / halfwidth
struct BumpEven {
  double center = 0.0;
  double halfwidth = 1.0;
  double amplitude = 1.0;
};

/// theta(x) = start + (end - start) * step((x - lo) / (hi - lo))
struct Ramp {
  double start = 0.0;
  double end = 0.0;
  double lo = 0.0;
  double hi = 1.0;

  [[nodiscard]] auto at(double x) const -> Jet;
};

/// Vertical shift -int_r^{r0} tau theta'(tau) dtau of a cogeodesic twist.
struct TwistPotential {
  Ramp theta;
  double r0 = 1.0;
  std::shared_ptr<const numerics::TailIntegral> tail;  // filled by make_twist_potential
};
auto make_twist_potential(const Ramp& theta, double r0) -> TwistPotential;

class Profile;

struct Sum {
  std::vector<Profile> terms;
};

class Profile {
public:
  using Kind = std::variant<Cap, PolyEven, BumpEven, TwistPotential, Sum>;

  Profile() : kind_(PolyEven{{0.0}}) {}
  Profile(Kind kind, double scale = 1.0) : kind_(std::move(kind)), scale_(scale) {}  // NOLINT

  /// Even factor F and its s-derivatives.
  [[nodiscard]] auto in_s(double s) const -> Jet;
  /// f(r) and its r-derivatives up to `order` (0, 1 or 2).
  [[nodiscard]] auto eval(double r, int order) const -> double;
  /// True when some derivative blows up at the boundary radius.
  [[nodiscard]] auto boundary_singular() const -> bool;
  /// Largest radius on which the profile is defined.
  [[nodiscard]] auto domain_radius() const -> double;

  [[nodiscard]] auto kind() const -> const Kind& { return kind_; }
  [[nodiscard]] auto scale() const -> double { return scale_; }
  [[nodiscard]] auto scaled(double c) const -> Profile { return Profile(kind_, scale_ * c); }

  friend auto operator+(const Profile& a, const Profile& b) -> Profile {
    return Profile(Sum{{a, b}});
  }
  friend auto operator-(const Profile& a, const Profile& b) -> Profile {
    return Profile(Sum{{a, b.scaled(-1.0)}});
  }

private:
  Kind kind_;
  double scale_ = 1.0;
};

auto even_factor(const Profile& p) -> numerics::ScalarFn;
auto eval(const Profile& p, double r, int order) -> double;

// Profiles in the Liouville coordinate a of an interval shadow.

struct Linear {
  double slope = 0.0;
  double offset = 0.0;
};

/// amplitude * sin(pi (a - a1) / (a0 - a1))
struct SinBridge {
  double amplitude = 1.0;
  double a1 = 0.0;
  double a0 = 1.0;
};

struct Bump {
  double center = 0.0;
  double halfwidth = 1.0;
  double amplitude = 1.0;
};

/// Natural cubic spline through (a_i, f_i).
struct Tabulated {
  std::vector<double> a;
  std::vector<double> f;
  std::vector<double> second;  // spline second derivatives, filled by make_tabulated
};
auto make_tabulated(std::vector<double> a, std::vector<double> f) -> Tabulated;

/// Angle profile of a Reeb twist: theta1 at a1, theta0 at a0, built from two ramps whose
/// weights make int e^tau theta'(tau) dtau vanish.
struct ReebRamp {
  double theta1 = 0.0;
  double theta0 = 0.0;
  double a1 = 0.0;
  double a0 = 1.0;
  double w1 = 0.0;  // filled by make_reeb_ramp
  double w2 = 0.0;
  std::shared_ptr<const numerics::TailIntegral> tail1, tail2;  // ∫_a e^τ S_i'(τ) dτ per window

  [[nodiscard]] auto window(int i) const -> Ramp;
  [[nodiscard]] auto at(double a) const -> Jet;
};
auto make_reeb_ramp(double theta1, double theta0, double a1, double a0) -> ReebRamp;

/// Vertical shift -int_a^{a0} e^tau theta'(tau) dtau of a Reeb twist.
struct ReebPotential {
  ReebRamp theta;
};

class RProfile;

struct RSum {
  std::vector<RProfile> terms;
};

class RProfile {
public:
  using Kind = std::variant<Linear, SinBridge, Bump, Tabulated, ReebPotential, RSum>;

  RProfile() : kind_(Linear{}) {}
  RProfile(Kind kind, double scale = 1.0) : kind_(std::move(kind)), scale_(scale) {}  // NOLINT

  [[nodiscard]] auto at(double a) const -> Jet;
  [[nodiscard]] auto eval(double a, int order) const -> double;

  [[nodiscard]] auto kind() const -> const Kind& { return kind_; }
  [[nodiscard]] auto scale() const -> double { return scale_; }
  [[nodiscard]] auto scaled(double c) const -> RProfile { return RProfile(kind_, scale_ * c); }

  friend auto operator+(const RProfile& a, const RProfile& b) -> RProfile {
    return RProfile(RSum{{a, b}});
  }
  friend auto operator-(const RProfile& a, const RProfile& b) -> RProfile {
    return RProfile(RSum{{a, b.scaled(-1.0)}});
  }

private:
  Kind kind_;
  double scale_ = 1.0;
};

// Shadows and shapes.

struct Ball {
  double r0 = 1.0;
  int n = 1;  // the ball sits in R^{2n}
};

enum class BaseKind { sphere, flat_torus };

struct Codisc {
  BaseKind base = BaseKind::sphere;
  int n = 2;  // dimension of the base manifold
  double r0 = 1.0;
};

struct Interval {
  double a1 = 0.0;
  double a0 = 1.0;
};

using Shadow = std::variant<Ball, Codisc, Interval>;
using Sheet = std::variant<Profile, RProfile>;

struct Shape {
  Shadow shadow;
  Sheet f_plus;
  Sheet f_minus;

  [[nodiscard]] auto radial_plus() const -> const Profile&;
  [[nodiscard]] auto radial_minus() const -> const Profile&;
  [[nodiscard]] auto interval_plus() const -> const RProfile&;
  [[nodiscard]] auto interval_minus() const -> const RProfile&;
  [[nodiscard]] auto radial(int sheet) const -> const Profile& {
    return sheet > 0 ? radial_plus() : radial_minus();
  }
  [[nodiscard]] auto interval(int sheet) const -> const RProfile& {
    return sheet > 0 ? interval_plus() : interval_minus();
  }
  /// Outer radius for Ball and Codisc shadows.
  [[nodiscard]] auto radius() const -> double;
  [[nodiscard]] auto interval_shadow() const -> const Interval&;
};

auto make_radial_shape(Shadow shadow, Profile plus, Profile minus) -> Shape;
auto make_interval_shape(Interval shadow, RProfile plus, RProfile minus) -> Shape;

struct ValidationReport {
  bool ok = true;
  std::string problem;       // empty, "violated-ordering" or "boundary-mismatch"
  double min_gap = 0.0;      // smallest sampled f_+ - f_- in the open shadow
  double boundary_gap = 0.0; // largest |f_+ - f_-| on the boundary
};

auto validate_shape(const Shape& s, int samples = 4000) -> ValidationReport;
/// Throws the matching error when the shape is not valid.
void require_valid(const Shape& s);

struct EquivalenceReport {
  bool equivalent = false;
  double discrepancy = 0.0;
};

/// Compares the two shapes on the boundary collar of width delta (default 5% of the
/// shadow size), values and first two derivatives.
auto equivalence_check(const Shape& s, const Shape& t, double delta = -1.0) -> EquivalenceReport;

}  // namespace vcd::profiles

#pragma once

// Shapes over codisc bundles D*_{r0}Q ⊂ (ℝ × T*Q, db + p·dq) for Q a round sphere S^n or a
// flat torus ℝ^n / ℤ^n. Covectors are stored as (q, p); on the sphere q ∈ S^n ⊂ ℝ^{n+1}
// and p ⊥ q. Points of the contact manifold are (b, q, p).

#include "vcd/moser.hpp"
#include "vcd/numerics.hpp"
#include "vcd/profiles.hpp"
#include "vcd/verify.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace vcd::cotangent {

using profiles::BaseKind;
using profiles::Profile;
using profiles::Shape;
using Covector = Eigen::VectorXd;
using Point = Eigen::VectorXd;

struct Geometry {
  BaseKind base = BaseKind::sphere;
  int n = 2;

  /// Ambient size of q (n + 1 on the sphere).
  [[nodiscard]] auto width() const -> int { return base == BaseKind::sphere ? n + 1 : n; }
  /// Half the minimal period of η on the unit bundle: π on spheres, 0 on tori (no common period).
  [[nodiscard]] auto besse_half_period() const -> double;
  [[nodiscard]] auto chart() const -> ContactChart;
};

auto geometry_of(const Shape& s) -> Geometry;

auto make_covector(const Geometry& g, const std::vector<double>& q, const std::vector<double>& p) -> Covector;
auto fiber_norm(const Geometry& g, const Covector& u) -> double;
/// Multiplies the fibre coordinate by c (c may be negative or zero).
auto scale_fiber(const Geometry& g, const Covector& u, double c) -> Covector;
/// Puts q back on the unit sphere and p in its tangent space; reduces q mod 1 on the torus.
auto normalize(const Geometry& g, const Covector& u) -> Covector;
auto distance(const Geometry& g, const Covector& a, const Covector& b) -> double;

/// η_θ: unit-speed geodesic flow through the direction of p, fibre length preserved.
auto normalized_cogeodesic_flow(const Geometry& g, const Covector& u, double theta) -> Covector;
/// γ_σ = η_{|u| σ}, the Hamiltonian flow of ½|u|².
auto cogeodesic_flow(const Geometry& g, const Covector& u, double sigma) -> Covector;

/// ℓ_u(s) = ∫_s^0 f'(e^σ |u|) dσ.
auto oriented_length(const Profile& f, double fiber_radius, double s) -> double;
/// ψ_s(u) = e^s γ_{σ_u(s)}(u), the flow of Y_λ - X_f.
auto half_char_flow(const Geometry& g, const Profile& f, const Covector& u, double s) -> Covector;
/// Same flow integrated as an ODE.
auto half_char_flow_ode(const Geometry& g, const Profile& f, const Covector& u, double s, double tol = 1e-12)
    -> Covector;

/// ±∫_0^{r0} f_±'(τ)/τ dτ.
auto char_half_length(const Shape& s, int sheet) -> numerics::QuadResult;
auto sigma_invariant(const Shape& s) -> numerics::QuadResult;

/// Ψ_r(u0) = r γ_{L(r)}(u0/|u0|), L(r) = ∫_r^{r0} f'(τ)/τ dτ, for u0 on the equator.
auto doubled_half_char(const Shape& s, int sheet, const Covector& u0, double r) -> Covector;

/// Rows of (b, q, p) along Ψ_r at `rows` evenly spaced r from r_from to r_to; b sits on the sheet.
auto doubled_half_char_path(const Shape& s, int sheet, const Covector& u0, double r_from, double r_to, int rows)
    -> numerics::Trajectory;

struct TwistResult {
  Shape target;
  double angle = 0.0;  // θ near the boundary
  std::function<Point(const Point&)> map;
};

/// φ(b, u) = (b - Θ(|u|), η_{θ(|u|)}(u)), Θ(ρ) = -∫_ρ^{r0} τ θ'(τ) dτ. θ must vanish near 0.
auto cogeodesic_twist(const Shape& s, const profiles::Ramp& theta) -> TwistResult;
/// `shift` is the profile of Θ, e.g. Profile(make_twist_potential(theta, r0)).
auto twist_map(const Geometry& g, const profiles::Ramp& theta, const Profile& shift, const Point& x) -> Point;

enum class Which { plus, minus, full };

struct MonodromySample {
  Covector start;
  Covector predicted;
  Covector traced;
  double deviation = 0.0;
};

struct MonodromyReport {
  double flow_angle = 0.0;    // predicted map is η_{flow_angle}, composed with fibre negation if set
  bool negate_fiber = false;
  std::vector<MonodromySample> samples;
  double max_deviation = 0.0;
};

/// Predicted from the half-lengths and traced by integrating the doubled half
/// characteristics from r0 to -r0 (plus sheet first for the full map).
auto equator_monodromy(const Shape& s, Which which, int n_samples, unsigned long long seed = 1) -> MonodromyReport;
auto monodromy_at(const Shape& s, Which which, const Covector& u0) -> MonodromySample;
/// ODE trace of r ↦ Ψ_r(u0) from r0 to -r0.
auto trace_doubled_half_char(const Geometry& g, const Profile& f, double r0, const Covector& u0) -> Covector;

/// h(ρ) = r ∫_r^{r0} g'(τ)/τ dτ, or -r ∫_0^r g'(τ)/τ dτ when the half-lengths match.
auto moser_h_cotangent(const Profile& g, double r0) -> moser::Potential;

class MoserProblem {
public:
  /// Twists the source first so that the half-lengths match, then builds the Moser data.
  MoserProblem(const Shape& source, const Shape& target);

  [[nodiscard]] auto flow_problem() const -> moser::FlowProblem;
  [[nodiscard]] auto twist_angle() const -> double { return angle_; }
  [[nodiscard]] auto twisted_source() const -> const Shape& { return twisted_; }
  [[nodiscard]] auto geometry() const -> const Geometry& { return geo_; }
  [[nodiscard]] auto full_map(const Point& x, const numerics::OdeControl& c) const -> Point;

private:
  Shape source_, target_, twisted_;
  Geometry geo_;
  double angle_ = 0.0;
  profiles::Ramp ramp_;
  std::shared_ptr<moser::MoserField> field_;
};

struct CotangentMoserRun {
  moser::MoserRun run;
  double twist_angle = 0.0;
  double singular_set_error = 0.0;  // base point and height of the zero section images
};

auto default_seeds(const Shape& s, int count, unsigned long long seed) -> std::vector<moser::Seed>;

auto moser_flow_cotangent(const Shape& source, const Shape& target, const std::vector<moser::Seed>& seeds,
                          const numerics::OdeControl& control = {}, bool keep_trajectories = false)
    -> CotangentMoserRun;

/// Random unit covector (times `radius`) over a random base point.
auto random_covector(const Geometry& g, double radius, moser::Uniform& u) -> Covector;

}  // namespace vcd::cotangent

#pragma once

// Shapes over an interval shadow (a1, a0) × S¹ in (ℝ × ℝ × S¹, db + e^a dw).
// Points are (b, a, w) with w an angle; the Reeb flow of dw is rotation.

#include "vcd/moser.hpp"
#include "vcd/numerics.hpp"
#include "vcd/profiles.hpp"
#include "vcd/verify.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace vcd::sympl {

using profiles::RProfile;
using profiles::Shape;
using Point = Eigen::VectorXd;

struct ContactModel {
  /// Half the minimal Reeb period of the circle.
  [[nodiscard]] auto besse_half_period() const -> double;
  [[nodiscard]] auto chart() const -> ContactChart { return {ChartKind::circle_bundle, 1}; }
};

auto wrap_angle(double w) -> double;               // into [0, 2π)
auto arc_distance(double a, double b) -> double;   // on the circle
auto reeb_flow(double t, double w) -> double;

/// ±∫_{a1}^{a0} e^{-τ} f_±'(τ) dτ.
auto char_action(const Shape& s, int sheet) -> numerics::QuadResult;
auto total_action(const Shape& s) -> numerics::QuadResult;

struct FlowPoint {
  double a = 0.0;
  double w = 0.0;
};

/// ψ_s(a, w) = (s + a, η_{σ_a(s)}(w)), σ_a(s) = ∫_{s+a}^a e^{-τ} f'(τ) dτ.
auto sympl_char_flow(const Shape& s, int sheet, double step, FlowPoint p) -> FlowPoint;
/// Rows of (b, a, w) along ψ_s for `rows` evenly spaced s from 0 to s_end; b sits on the sheet.
auto sympl_char_path(const Shape& s, int sheet, FlowPoint p, double s_end, int rows) -> numerics::Trajectory;
auto sympl_char_flow_ode(const Shape& s, int sheet, double step, FlowPoint p, double tol = 1e-12) -> FlowPoint;

struct TwistResult {
  Shape target;
  profiles::ReebRamp theta;
  std::function<Point(const Point&)> map;
};

/// φ(b, a, w) = (b - Θ(a), a, η_{θ(a)}(w)) with Θ(a) = -∫_a^{a0} e^τ θ'(τ) dτ and Θ(a1) = 0.
auto reeb_twist(const Shape& s, double theta1, double theta0) -> TwistResult;
auto twist_map(const profiles::ReebRamp& theta, const RProfile& shift, const Point& x) -> Point;

enum class Which { plus, minus, full };

struct MonodromySample {
  double start = 0.0;
  double predicted = 0.0;
  double traced = 0.0;
  double deviation = 0.0;  // arc distance
};

struct MonodromyReport {
  double rotation = 0.0;  // predicted map is η_rotation
  std::vector<MonodromySample> samples;
  double max_deviation = 0.0;
};

/// Plus sheet from a0 down to a1, minus sheet from a1 up to a0; the full map runs both.
auto sympl_monodromy(const Shape& s, Which which, int n_samples, unsigned long long seed = 1) -> MonodromyReport;
/// Angle change along the characteristics of one sheet, integrated as an ODE in a.
auto trace_sheet(const Shape& s, int sheet, double w) -> double;

/// h_±(a) = e^a ∫_a^{a0} e^{-τ} g_±'(τ) dτ for the perturbations g_± = target - source.
/// Throws when h_+(a1) and h_-(a1) differ by more than 1e-9.
auto moser_h_sympl(const RProfile& g_plus, const RProfile& g_minus, const profiles::Interval& shadow)
    -> std::pair<moser::Potential, moser::Potential>;

class MoserProblem {
public:
  MoserProblem(const Shape& source, const Shape& target);

  [[nodiscard]] auto flow_problem() const -> moser::FlowProblem;
  /// Rotation the isotopy applies near a = a1, ∫ e^{-τ} (g_+ - f_+)' dτ.
  [[nodiscard]] auto lower_rotation() const -> double { return lower_rotation_; }
  [[nodiscard]] auto full_map(const Point& x, const numerics::OdeControl& c) const -> Point;

private:
  Shape source_, target_;
  double lower_rotation_ = 0.0;
  std::shared_ptr<moser::MoserField> field_;
};

struct SymplMoserRun {
  moser::MoserRun run;
  double lower_rotation = 0.0;
  double upper_collar_displacement = 0.0;  // collar seeds near a0, compared with the identity
  double lower_collar_displacement = 0.0;  // collar seeds near a1, compared with the identity
};

/// Pattern of five: plus sheet, minus sheet, two interior points, one collar point
/// (alternating between the two ends).
auto default_seeds(const Shape& s, int count, unsigned long long seed) -> std::vector<moser::Seed>;

auto moser_flow_sympl(const Shape& source, const Shape& target, const std::vector<moser::Seed>& seeds,
                      const numerics::OdeControl& control = {}, bool keep_trajectories = false) -> SymplMoserRun;

}  // namespace vcd::sympl

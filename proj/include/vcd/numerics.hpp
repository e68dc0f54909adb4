#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace vcd::numerics {

struct Quadrature {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_depth = 40;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

/// Which endpoints carry an inverse-square-root singularity.
enum class SoftEnds { none, lower, upper, both };

using ScalarFn = std::function<double(double)>;

/// Adaptive Gauss-Kronrod 7-15 with bisection of the worst interval.
/// Soft endpoints are handled by tau = b - u^2 (or a + u^2).
auto integrate_1d(const ScalarFn& f, double a, double b, const Quadrature& q = {},
                  SoftEnds soft = SoftEnds::none) -> QuadResult;

/// x ↦ ∫_x^b f(τ) dτ for x in [a, b]. Whole cells are integrated once up front; a call adds
/// one Kronrod rule over the partial cell.
class TailIntegral {
public:
  TailIntegral(ScalarFn f, double a, double b, int cells = 256);
  auto operator()(double x) const -> double;

private:
  ScalarFn f_;
  double a_, b_, h_;
  std::vector<double> tail_;  // tail_[k] = ∫ from a + k h to b
};

using State = std::vector<double>;
using Field = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

enum class OdeMethod { rk4, rk45 };

struct OdeControl {
  OdeMethod method = OdeMethod::rk45;
  double step = 1e-2;  // fixed step for rk4, initial guess for rk45
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  std::size_t max_steps = 200000;
};

struct StepStats {
  std::size_t steps = 0;
  std::size_t rejections = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  StepStats step_stats;

  [[nodiscard]] auto final_state() const -> const State& { return states.back(); }
};

/// Integrates y' = X(t, y) from t0 to t1; t1 < t0 runs backwards.
auto solve_ode(const Field& field, const State& y0, double t0, double t1, const OdeControl& c = {})
    -> Trajectory;

/// Replays fixed steps on a prescribed time grid. Used where the time-1 map has to be
/// smooth in the initial condition, e.g. for finite-difference Jacobians of flows.
auto solve_ode_on_grid(const Field& field, const State& y0, std::span<const double> times,
                       OdeMethod method) -> State;

using VectorMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using ScalarMap = std::function<double(const Eigen::VectorXd&)>;

/// Central differences; h <= 0 selects eps^(1/3) * max(1, |x_j|) per coordinate.
auto jacobian_fd(const VectorMap& f, const Eigen::VectorXd& x, double h = 0.0) -> Eigen::MatrixXd;

/// Central second differences; h <= 0 selects eps^(1/4) * max(1, |x_j|).
auto hessian_fd(const ScalarMap& f, const Eigen::VectorXd& x, double h = 0.0) -> Eigen::MatrixXd;

/// k-th divided difference: f_1(t) = int_0^1 f'(st) ds, f_k = (f_{k-1})_1, so that
/// f_k(0) = f^(k)(0)/k!. `derivative(t, j)` must return the j-th derivative of f.
auto divided_difference(const std::function<double(double, int)>& derivative, int k,
                        const Quadrature& q = {}) -> ScalarFn;

}  // namespace vcd::numerics

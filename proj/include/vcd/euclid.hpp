#pragma once

// Shapes over a ball in ℝ^{2n} inside (ℝ^{2n+1}, db + ½ Σ (x dy - y dx)).
// Points are (b, x_1..x_n, y_1..y_n).

#include "vcd/moser.hpp"
#include "vcd/profiles.hpp"
#include "vcd/verify.hpp"

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <vector>

namespace vcd::euclid {

using profiles::Profile;
using profiles::Shape;
using Point = Eigen::VectorXd;

auto make_point(double b, const std::vector<double>& x, const std::vector<double>& y) -> Point;
auto dimension(const Point& p) -> int;  // n
auto radius_sq(const Point& p) -> double;

/// Coefficients of db + λ at p in the order (b, x, y).
auto contact_form(const Point& p) -> Eigen::VectorXd;

struct CharVector {
  double db = 0.0;
  Eigen::VectorXd horizontal;  // (x, y) components
};

/// ±(λ(X_f) ∂_b + Y_λ - X_f) on the sheet b = f_±; the sign is the sheet.
auto characteristic_field(const Shape& s, int sheet, const Point& p) -> CharVector;
/// Same field without the on-sheet check, as a full vector.
auto characteristic_vector(const Profile& f, int sheet, const Point& p) -> Eigen::VectorXd;

struct SingularityEigen {
  std::complex<double> first;   // sheet · (½ + i f''(0))
  std::complex<double> second;  // sheet · (½ - i f''(0))
  double mean_curvature = 0.0;  // f''(0)
};

auto singularity_eigen(const Shape& s, int sheet) -> SingularityEigen;
/// Eigenvalues of a finite-difference linearisation of the horizontal field at the centre.
auto singularity_eigen_fd(const Profile& f, int sheet, int n) -> Eigen::VectorXcd;

/// Integrates the characteristic field of one sheet from `start` (lifted onto the sheet) over [0, t_end].
/// Negative t_end runs backwards, towards the singular point of the exit sheet.
auto trace_characteristic(const Shape& s, int sheet, const Point& start, double t_end,
                          const numerics::OdeControl& c = {}) -> numerics::Trajectory;

auto vertical_diffeo(const Shape& source, const Shape& target, double band = -1.0) -> moser::VerticalMap;
auto apply_vertical(const moser::VerticalMap& vm, const Point& p) -> Point;

/// h(ρ) = ρ ∫_r^{r0} g'(τ)/τ² dτ, ρ = r², for the perturbation g = g_± - f_±.
auto moser_h_euclid(const Profile& g, double r0) -> moser::Potential;

/// Moser data for a pair of equivalent shapes with equal mean curvatures.
class MoserProblem {
public:
  MoserProblem(const Shape& source, const Shape& target);

  [[nodiscard]] auto field(double t, const Point& p) const -> Eigen::VectorXd;
  [[nodiscard]] auto ode_field() const -> numerics::Field;
  [[nodiscard]] auto vertical(const Point& p) const -> Point;
  [[nodiscard]] auto moser() const -> const moser::MoserField& { return *field_; }
  [[nodiscard]] auto flow_problem() const -> moser::FlowProblem;
  [[nodiscard]] auto source() const -> const Shape& { return source_; }
  [[nodiscard]] auto target() const -> const Shape& { return target_; }

private:
  Shape source_, target_;
  int n_ = 1;
  std::shared_ptr<moser::MoserField> field_;
};

auto moser_field(const Shape& source, const Shape& target, double t, const Point& p) -> Eigen::VectorXd;

/// Seeds on both sheets, in the interior and in the boundary collar.
auto default_seeds(const Shape& s, int count, unsigned long long seed) -> std::vector<moser::Seed>;

auto moser_flow(const Shape& source, const Shape& target, const std::vector<moser::Seed>& seeds,
                const numerics::OdeControl& control = {}, bool keep_trajectories = false) -> moser::MoserRun;

auto chart(int n) -> ContactChart;
auto verify_contacto(const numerics::VectorMap& map, const std::vector<Point>& points, double h = 0.0)
    -> ContactoReport;

}  // namespace vcd::euclid

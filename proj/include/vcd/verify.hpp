#pragma once

#include "vcd/numerics.hpp"

#include <Eigen/Dense>

#include <vector>

namespace vcd {

/// Ambient coordinates of the contact manifolds ℝ × V handled here.
///   euclid:           (b, x_1..x_n, y_1..y_n),   db + ½ Σ (x dy - y dx)
///   cotangent sphere: (b, q ∈ S^n ⊂ ℝ^{n+1}, p ∈ ℝ^{n+1}),  db + p·dq
///   cotangent torus:  (b, q ∈ ℝ^n mod 1, p ∈ ℝ^n),  db + p·dq
///   circle bundle:    (b, a, w mod 2π),  db + e^a dw
enum class ChartKind { euclid, cotangent_sphere, cotangent_torus, circle_bundle };

struct ContactChart {
  ChartKind kind = ChartKind::euclid;
  int n = 1;

  [[nodiscard]] auto dim() const -> int;
  [[nodiscard]] auto form(const Eigen::VectorXd& x) const -> Eigen::VectorXd;
  [[nodiscard]] auto tangent_basis(const Eigen::VectorXd& x) const -> std::vector<Eigen::VectorXd>;
  /// Nearest point of the manifold (identity for the flat charts).
  [[nodiscard]] auto retract(const Eigen::VectorXd& x) const -> Eigen::VectorXd;
  /// a - b with periodic coordinates reduced to the nearest representative.
  [[nodiscard]] auto difference(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const -> Eigen::VectorXd;
};

struct PointDefect {
  double defect = 0.0;         // non-proportional part of the pullback, relative
  double factor = 1.0;         // conformal factor of the best fit
  double strict_defect = 0.0;  // |pullback - form| / |form|
};

struct ContactoReport {
  double max_defect = 0.0;
  double max_strict_defect = 0.0;
  double min_factor = 0.0;
  double max_factor = 0.0;
  std::vector<PointDefect> points;
};

/// Pulls the contact form back through `map` with finite differences along tangent
/// directions (sixth order, step 2.5e-4 unless h > 0) and measures how far it is from a multiple of the form at each point.
auto verify_contacto(const ContactChart& chart, const numerics::VectorMap& map,
                     const std::vector<Eigen::VectorXd>& points, double h = 0.0) -> ContactoReport;

/// Single-point version returning the pulled-back form on the tangent basis.
auto pullback_on_basis(const ContactChart& chart, const numerics::VectorMap& map, const Eigen::VectorXd& x,
                       double h = 0.0) -> Eigen::VectorXd;

}  // namespace vcd

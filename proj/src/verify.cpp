#include "vcd/verify.hpp"

#include "vcd/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace vcd {

auto ContactChart::dim() const -> int {
  switch (kind) {
    case ChartKind::euclid: return 2 * n + 1;
    case ChartKind::cotangent_sphere: return 2 * (n + 1) + 1;
    case ChartKind::cotangent_torus: return 2 * n + 1;
    case ChartKind::circle_bundle: return 3;
  }
  return 0;
}

auto ContactChart::form(const Eigen::VectorXd& x) const -> Eigen::VectorXd {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(dim());
  f[0] = 1.0;
  switch (kind) {
    case ChartKind::euclid:
      for (int j = 0; j < n; ++j) {
        f[1 + j] = -0.5 * x[1 + n + j];
        f[1 + n + j] = 0.5 * x[1 + j];
      }
      break;
    case ChartKind::cotangent_sphere:
    case ChartKind::cotangent_torus: {
      const int m = kind == ChartKind::cotangent_sphere ? n + 1 : n;
      for (int j = 0; j < m; ++j) f[1 + j] = x[1 + m + j];
      break;
    }
    case ChartKind::circle_bundle:
      f[2] = std::exp(x[1]);
      break;
  }
  return f;
}

auto ContactChart::tangent_basis(const Eigen::VectorXd& x) const -> std::vector<Eigen::VectorXd> {
  std::vector<Eigen::VectorXd> basis;
  const int d = dim();
  if (kind != ChartKind::cotangent_sphere) {
    for (int k = 0; k < d; ++k) basis.push_back(Eigen::VectorXd::Unit(d, k));
    return basis;
  }
  const int m = n + 1;
  const Eigen::VectorXd q = x.segment(1, m);
  const Eigen::VectorXd p = x.segment(1 + m, m);
  basis.push_back(Eigen::VectorXd::Unit(d, 0));
  // orthonormal frame of the tangent plane q^perp
  std::vector<Eigen::VectorXd> frame;
  for (int k = 0; k < m && static_cast<int>(frame.size()) < n; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(m, k);
    e -= e.dot(q) * q;
    for (const auto& f : frame) e -= e.dot(f) * f;
    if (e.norm() > 1e-6) frame.push_back(e.normalized());
  }
  for (const auto& e : frame) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    v.segment(1, m) = e;
    v.segment(1 + m, m) = -e.dot(p) * q;  // keeps q·p = 0 to first order
    basis.push_back(v.normalized());
  }
  for (const auto& e : frame) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    v.segment(1 + m, m) = e;
    basis.push_back(v);
  }
  return basis;
}

auto ContactChart::retract(const Eigen::VectorXd& x) const -> Eigen::VectorXd {
  if (kind != ChartKind::cotangent_sphere) return x;
  const int m = n + 1;
  Eigen::VectorXd y = x;
  const Eigen::VectorXd q = x.segment(1, m).normalized();
  Eigen::VectorXd p = x.segment(1 + m, m);
  p -= p.dot(q) * q;
  y.segment(1, m) = q;
  y.segment(1 + m, m) = p;
  return y;
}

auto ContactChart::difference(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const -> Eigen::VectorXd {
  Eigen::VectorXd d = a - b;
  if (kind == ChartKind::cotangent_torus) {
    for (int j = 0; j < n; ++j) d[1 + j] -= std::round(d[1 + j]);
  } else if (kind == ChartKind::circle_bundle) {
    constexpr double tau = 2.0 * std::numbers::pi;
    d[2] -= tau * std::round(d[2] / tau);
  }
  return d;
}

auto pullback_on_basis(const ContactChart& chart, const numerics::VectorMap& map, const Eigen::VectorXd& x,
                       double h) -> Eigen::VectorXd {
  const auto basis = chart.tangent_basis(x);
  if (h <= 0.0) h = 2.5e-4;
  const Eigen::VectorXd image = map(x);
  const Eigen::VectorXd alpha = chart.form(image);
  Eigen::VectorXd beta(static_cast<Eigen::Index>(basis.size()));
  // sixth-order central stencil
  for (std::size_t k = 0; k < basis.size(); ++k) {
    auto at = [&](double c) { return chart.difference(map(chart.retract(x + c * h * basis[k])), image); };
    const Eigen::VectorXd d = 45.0 * (at(1.0) - at(-1.0)) - 9.0 * (at(2.0) - at(-2.0)) + (at(3.0) - at(-3.0));
    beta[static_cast<Eigen::Index>(k)] = alpha.dot(d) / (60.0 * h);
  }
  return beta;
}

auto verify_contacto(const ContactChart& chart, const numerics::VectorMap& map,
                     const std::vector<Eigen::VectorXd>& points, double h) -> ContactoReport {
  ContactoReport rep;
  rep.min_factor = std::numeric_limits<double>::infinity();
  rep.max_factor = -std::numeric_limits<double>::infinity();
  for (const auto& x : points) {
    if (x.size() != chart.dim()) throw Error(ErrorCode::InvalidArgument, "point has the wrong dimension");
    const auto basis = chart.tangent_basis(x);
    const Eigen::VectorXd form = chart.form(x);
    Eigen::VectorXd a(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) a[static_cast<Eigen::Index>(k)] = form.dot(basis[k]);
    const Eigen::VectorXd beta = pullback_on_basis(chart, map, x, h);
    PointDefect pd;
    pd.factor = beta.dot(a) / a.squaredNorm();
    const double bn = beta.norm();
    pd.defect = bn > 0.0 ? (beta - pd.factor * a).norm() / bn : 1.0;
    pd.strict_defect = (beta - a).norm() / a.norm();
    rep.max_defect = std::max(rep.max_defect, pd.defect);
    rep.max_strict_defect = std::max(rep.max_strict_defect, pd.strict_defect);
    rep.min_factor = std::min(rep.min_factor, pd.factor);
    rep.max_factor = std::max(rep.max_factor, pd.factor);
    rep.points.push_back(pd);
  }
  return rep;
}

}  // namespace vcd

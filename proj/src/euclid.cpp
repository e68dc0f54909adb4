#include "vcd/euclid.hpp"

#include "vcd/error.hpp"

#include <cmath>
#include <memory>
#include <string>

namespace vcd::euclid {
namespace {

const numerics::Quadrature h_quad{1e-13, 1e-12, 40};

auto radial(const Profile& p) -> moser::RadialFn {
  return [p](double rho) { return p.in_s(rho); };
}

auto ball_of(const Shape& s) -> const profiles::Ball& {
  if (const auto* b = std::get_if<profiles::Ball>(&s.shadow)) return *b;
  throw Error(ErrorCode::GeometryMismatch, "shape is not over a ball");
}

}  // namespace

auto make_point(double b, const std::vector<double>& x, const std::vector<double>& y) -> Point {
  if (x.size() != y.size() || x.empty()) throw Error(ErrorCode::InvalidArgument, "x and y must have equal length");
  const auto n = static_cast<Eigen::Index>(x.size());
  Point p(2 * n + 1);
  p[0] = b;
  for (Eigen::Index j = 0; j < n; ++j) {
    p[1 + j] = x[static_cast<std::size_t>(j)];
    p[1 + n + j] = y[static_cast<std::size_t>(j)];
  }
  return p;
}

auto dimension(const Point& p) -> int { return static_cast<int>((p.size() - 1) / 2); }

auto radius_sq(const Point& p) -> double { return p.tail(p.size() - 1).squaredNorm(); }

auto contact_form(const Point& p) -> Eigen::VectorXd { return chart(dimension(p)).form(p); }

auto characteristic_vector(const Profile& f, int sheet, const Point& p) -> Eigen::VectorXd {
  const int n = dimension(p);
  const double rho = radius_sq(p);
  const double fs = f.in_s(rho).d1;
  Eigen::VectorXd v(p.size());
  // X_f = 2 f_s (-y, x), λ(X_f) = f_s ρ
  v[0] = sheet * fs * rho;
  for (int j = 0; j < n; ++j) {
    const double x = p[1 + j];
    const double y = p[1 + n + j];
    v[1 + j] = sheet * (0.5 * x + 2.0 * fs * y);
    v[1 + n + j] = sheet * (0.5 * y - 2.0 * fs * x);
  }
  return v;
}

auto characteristic_field(const Shape& s, int sheet, const Point& p) -> CharVector {
  const auto& ball = ball_of(s);
  const double r = std::sqrt(radius_sq(p));
  if (r >= ball.r0) throw Error(ErrorCode::OutOfDomain, "point is outside the open shadow");
  const Profile& f = s.radial(sheet);
  const double height = f.eval(r, 0);
  if (std::abs(p[0] - height) > 1e-9 * std::max(1.0, std::abs(height))) {
    throw Error(ErrorCode::PointNotOnSheet, "b = " + std::to_string(p[0]) + " but the sheet is at " +
                                                std::to_string(height));
  }
  const Eigen::VectorXd v = characteristic_vector(f, sheet, p);
  return {v[0], v.tail(v.size() - 1)};
}

auto trace_characteristic(const Shape& s, int sheet, const Point& start, double t_end,
                          const numerics::OdeControl& c) -> numerics::Trajectory {
  const auto& ball = ball_of(s);
  if (start.size() != 1 + 2 * ball.n) throw Error(ErrorCode::InvalidArgument, "start has the wrong dimension");
  const double r = std::sqrt(radius_sq(start));
  if (r >= ball.r0) throw Error(ErrorCode::OutOfDomain, "start is outside the open shadow");
  const Profile& f = s.radial(sheet);
  Point p = start;
  p[0] = f.eval(r, 0);
  auto field = [&f, sheet](double, std::span<const double> y, std::span<double> dy) {
    const Eigen::Map<const Eigen::VectorXd> x(y.data(), static_cast<Eigen::Index>(y.size()));
    const Eigen::VectorXd v = characteristic_vector(f, sheet, x);
    for (Eigen::Index i = 0; i < v.size(); ++i) dy[i] = v[i];
  };
  return numerics::solve_ode(field, numerics::State(p.data(), p.data() + p.size()), 0.0, t_end, c);
}

auto singularity_eigen(const Shape& s, int sheet) -> SingularityEigen {
  ball_of(s);
  const double k = s.radial(sheet).eval(0.0, 2);
  const double sg = sheet > 0 ? 1.0 : -1.0;
  return {sg * std::complex<double>(0.5, k), sg * std::complex<double>(0.5, -k), k};
}

auto singularity_eigen_fd(const Profile& f, int sheet, int n) -> Eigen::VectorXcd {
  auto horizontal = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    Point p(2 * n + 1);
    p[0] = 0.0;
    p.tail(2 * n) = z;
    const Eigen::VectorXd v = characteristic_vector(f, sheet, p);
    return v.tail(2 * n);
  };
  const Eigen::MatrixXd jac = numerics::jacobian_fd(horizontal, Eigen::VectorXd::Zero(2 * n), 1e-5);
  return Eigen::EigenSolver<Eigen::MatrixXd>(jac).eigenvalues();
}

auto vertical_diffeo(const Shape& source, const Shape& target, double band) -> moser::VerticalMap {
  const auto& ball = ball_of(source);
  const auto& tb = ball_of(target);
  if (ball.r0 != tb.r0 || ball.n != tb.n) throw Error(ErrorCode::ShadowMismatch, "balls differ");
  profiles::require_valid(source);
  profiles::require_valid(target);
  return {radial(source.radial_plus()), radial(source.radial_minus()), radial(target.radial_plus()),
          radial(target.radial_minus()), moser::Range{0.0, ball.r0 * ball.r0}, band};
}

auto apply_vertical(const moser::VerticalMap& vm, const Point& p) -> Point {
  Point q = p;
  q[0] = vm.apply(p[0], radius_sq(p)).v;
  return q;
}

auto moser_h_euclid(const Profile& g, double r0) -> moser::Potential {
  moser::Potential pot;
  const moser::Range supp = moser::numerical_support(radial(g), {0.0, r0 * r0});
  pot.support = supp.empty() ? supp : moser::Range{0.0, supp.hi};
  if (supp.empty()) {
    pot.h = [](double) { return Jet{}; };
    return pot;
  }
  const double gs0 = g.in_s(0.0).d1;
  pot.smooth = std::abs(gs0) <= 1e-12;
  if (!pot.smooth) {
    pot.warning = "perturbation has g''(0) != 0; h behaves like r^2 log r at the centre";
  }
  const double r_lo = std::sqrt(supp.lo);
  const double r_hi = std::sqrt(supp.hi);
  const bool smooth = pot.smooth;
  // (g_s(σ) - g_s(0)) / σ through the first divided difference of g_s
  auto dd = std::make_shared<numerics::ScalarFn>(numerics::divided_difference(
      [g](double s, int j) { return j == 0 ? g.in_s(s).d1 : g.in_s(s).d2; }, 1, h_quad));
  auto integrand = [g, smooth, dd](double tau) {
    if (smooth && tau < 1e-2) return 2.0 * tau * (*dd)(tau * tau);
    return 2.0 * g.in_s(tau * tau).d1 / tau;
  };
  auto inner = [integrand, r_lo, r_hi](double r) {
    const double lo = std::max(r, r_lo);
    if (lo >= r_hi) return 0.0;
    return numerics::integrate_1d(integrand, lo, r_hi, h_quad).value;
  };
  const double below = smooth && r_lo > 0.0 ? inner(r_lo) : 0.0;
  pot.h = [g, inner, below, r_lo, smooth](double rho) {
    const double r = std::sqrt(std::max(rho, 0.0));
    const double i = (smooth && r <= r_lo && r_lo > 0.0) ? below : inner(r);
    return Jet{rho * i, i - g.in_s(rho).d1, 0.0};
  };
  return pot;
}

// ---------------------------------------------------------------------------

MoserProblem::MoserProblem(const Shape& source, const Shape& target) : source_(source), target_(target) {
  const auto& ball = ball_of(source);
  n_ = ball.n;
  moser::VerticalMap vm = vertical_diffeo(source, target);
  if (!profiles::equivalence_check(source, target).equivalent) {
    throw Error(ErrorCode::InequivalentShapes, "shapes differ near the boundary of the shadow");
  }
  for (int sheet : {1, -1}) {
    const double a = source.radial(sheet).eval(0.0, 2);
    const double b = target.radial(sheet).eval(0.0, 2);
    if (std::abs(a - b) > 1e-9) {
      throw Error(ErrorCode::InequivalentShapes, "second derivatives at the centre differ on sheet " +
                                                     std::to_string(sheet));
    }
  }
  const double r0 = ball.r0;
  moser::Potential hp = moser_h_euclid(target.radial_plus() - source.radial_plus(), r0);
  moser::Potential hm = moser_h_euclid(target.radial_minus() - source.radial_minus(), r0);
  moser::Range supp = vm.support(1);
  const moser::Range sm = vm.support(-1);
  if (supp.empty()) {
    supp = sm;
  } else if (!sm.empty()) {
    supp = {std::min(supp.lo, sm.lo), std::max(supp.hi, sm.hi)};
  }
  const moser::RadialFn fp = radial(source.radial_plus());
  const moser::RadialFn fm = radial(source.radial_minus());
  const double gap = supp.empty() ? 1.0 : moser::min_gap(fp, fm, supp);
  moser::HamiltonianCutoff ham(fp, fm, std::move(hp), std::move(hm), 0.4 * gap);
  field_ = std::make_shared<moser::MoserField>(moser::Model::ball, std::move(vm), std::move(ham));
}

auto MoserProblem::field(double t, const Point& p) const -> Eigen::VectorXd {
  const double rho = radius_sq(p);
  const moser::Coefficients c = field_->coefficients(t, p[0], rho);
  Eigen::VectorXd v(p.size());
  v[0] = c.vertical;
  for (int j = 0; j < n_; ++j) {
    const double x = p[1 + j];
    const double y = p[1 + n_ + j];
    v[1 + j] = c.gen * (-2.0 * y) + c.liouville * 0.5 * x;
    v[1 + n_ + j] = c.gen * (2.0 * x) + c.liouville * 0.5 * y;
  }
  return v;
}

auto MoserProblem::ode_field() const -> numerics::Field {
  auto f = field_;
  const int n = n_;
  return [f, n](double t, std::span<const double> y, std::span<double> dy) {
    double rho = 0.0;
    for (int k = 1; k <= 2 * n; ++k) rho += y[k] * y[k];
    const moser::Coefficients c = f->coefficients(t, y[0], rho);
    dy[0] = c.vertical;
    for (int j = 0; j < n; ++j) {
      const double x = y[1 + j];
      const double yy = y[1 + n + j];
      dy[1 + j] = c.gen * (-2.0 * yy) + c.liouville * 0.5 * x;
      dy[1 + n + j] = c.gen * (2.0 * x) + c.liouville * 0.5 * yy;
    }
  };
}

auto MoserProblem::vertical(const Point& p) const -> Point { return apply_vertical(field_->vertical_map(), p); }

auto MoserProblem::flow_problem() const -> moser::FlowProblem {
  moser::FlowProblem fp;
  fp.chart = chart(n_);
  fp.field = ode_field();
  auto f = field_;
  fp.after = [f](const Eigen::VectorXd& p) { return apply_vertical(f->vertical_map(), p); };
  const Shape src = source_;
  fp.sheet_offset = [src](const Eigen::VectorXd& p, int sheet) {
    return p[0] - src.radial(sheet).in_s(radius_sq(p)).v;
  };
  return fp;
}

auto moser_field(const Shape& source, const Shape& target, double t, const Point& p) -> Eigen::VectorXd {
  return MoserProblem(source, target).field(t, p);
}

auto default_seeds(const Shape& s, int count, unsigned long long seed) -> std::vector<moser::Seed> {
  const auto& ball = ball_of(s);
  const int n = ball.n;
  moser::Uniform u(seed);
  std::vector<moser::Seed> seeds;
  auto direction = [&] {
    Eigen::VectorXd d(2 * n);
    do {
      for (int k = 0; k < 2 * n; ++k) d[k] = u.in(-1.0, 1.0);
    } while (d.norm() < 1e-3 || d.norm() > 1.0);
    return Eigen::VectorXd(d.normalized());
  };
  for (int k = 0; k < count; ++k) {
    const int slot = k % 5;
    moser::Seed sd;
    double r;
    if (slot == 4) {
      r = ball.r0 * u.in(0.97, 0.995);
      sd.kind = moser::SeedKind::collar;
    } else {
      r = ball.r0 * u.in(0.0, 0.9);
      sd.kind = slot == 0 ? moser::SeedKind::on_plus
                          : slot == 1 ? moser::SeedKind::on_minus : moser::SeedKind::interior;
    }
    const double fp = s.radial_plus().eval(r, 0);
    const double fm = s.radial_minus().eval(r, 0);
    double b;
    switch (sd.kind) {
      case moser::SeedKind::on_plus: b = fp; break;
      case moser::SeedKind::on_minus: b = fm; break;
      default: b = fm + u.in(0.05, 0.95) * (fp - fm); break;
    }
    sd.point = Point(2 * n + 1);
    sd.point[0] = b;
    sd.point.tail(2 * n) = r * direction();
    seeds.push_back(std::move(sd));
  }
  return seeds;
}

auto moser_flow(const Shape& source, const Shape& target, const std::vector<moser::Seed>& seeds,
                const numerics::OdeControl& control, bool keep_trajectories) -> moser::MoserRun {
  const MoserProblem problem(source, target);
  return moser::run_flow(problem.flow_problem(), seeds, control, keep_trajectories);
}

auto chart(int n) -> ContactChart { return {ChartKind::euclid, n}; }

auto verify_contacto(const numerics::VectorMap& map, const std::vector<Point>& points, double h) -> ContactoReport {
  if (points.empty()) return {};
  return vcd::verify_contacto(chart(dimension(points.front())), map, points, h);
}

}  // namespace vcd::euclid

#include "vcd/cotangent.hpp"

#include "vcd/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace vcd::cotangent {
namespace {

constexpr double pi = std::numbers::pi;
const numerics::Quadrature quad{1e-13, 1e-12, 40};

auto radial(const Profile& p) -> moser::RadialFn {
  return [p](double rho) { return p.in_s(rho); };
}

auto codisc_of(const Shape& s) -> const profiles::Codisc& {
  if (const auto* c = std::get_if<profiles::Codisc>(&s.shadow)) return *c;
  throw Error(ErrorCode::GeometryMismatch, "shape is not over a codisc bundle");
}

auto q_part(const Geometry& g, const Covector& u) -> Eigen::VectorXd { return u.head(g.width()); }
auto p_part(const Geometry& g, const Covector& u) -> Eigen::VectorXd { return u.tail(g.width()); }

// d/dθ of η_θ on the unit bundle, at (q, p̂).
void unit_generator(const Geometry& g, std::span<const double> y, std::span<double> dy, double c) {
  const int m = g.width();
  for (int j = 0; j < m; ++j) {
    dy[j] = c * y[m + j];
    dy[m + j] = g.base == BaseKind::sphere ? -c * y[j] : 0.0;
  }
}

auto to_state(const Covector& u) -> numerics::State { return {u.data(), u.data() + u.size()}; }

auto to_vec(const numerics::State& s) -> Covector {
  return Eigen::Map<const Eigen::VectorXd>(s.data(), static_cast<Eigen::Index>(s.size()));
}

auto soft_upper(const Profile& f) -> numerics::SoftEnds {
  return f.boundary_singular() ? numerics::SoftEnds::upper : numerics::SoftEnds::none;
}

// ∫_x^{r0} f'(τ)/τ dτ with f'(τ)/τ = 2F_s(τ²)
auto tail_integral(const Profile& f, double x, double r0) -> numerics::QuadResult {
  if (x >= r0) return {};
  auto integrand = [&f](double tau) { return 2.0 * f.in_s(tau * tau).d1; };
  return numerics::integrate_1d(integrand, x, r0, quad, soft_upper(f));
}

auto point_covector(const Geometry& g, const Point& x) -> Covector { return x.tail(2 * g.width()); }

}  // namespace

auto Geometry::besse_half_period() const -> double { return base == BaseKind::sphere ? pi : 0.0; }

auto Geometry::chart() const -> ContactChart {
  return {base == BaseKind::sphere ? ChartKind::cotangent_sphere : ChartKind::cotangent_torus, n};
}

auto geometry_of(const Shape& s) -> Geometry {
  const auto& c = codisc_of(s);
  return {c.base, c.n};
}

auto make_covector(const Geometry& g, const std::vector<double>& q, const std::vector<double>& p) -> Covector {
  const auto m = static_cast<std::size_t>(g.width());
  if (q.size() != m || p.size() != m) {
    throw Error(ErrorCode::InvalidArgument, "covector needs " + std::to_string(m) + " components in q and p");
  }
  Covector u(2 * g.width());
  for (std::size_t j = 0; j < m; ++j) {
    u[static_cast<Eigen::Index>(j)] = q[j];
    u[static_cast<Eigen::Index>(m + j)] = p[j];
  }
  return u;
}

auto fiber_norm(const Geometry& g, const Covector& u) -> double { return p_part(g, u).norm(); }

auto scale_fiber(const Geometry& g, const Covector& u, double c) -> Covector {
  Covector v = u;
  v.tail(g.width()) *= c;
  return v;
}

auto normalize(const Geometry& g, const Covector& u) -> Covector {
  const int m = g.width();
  Covector v = u;
  if (g.base == BaseKind::sphere) {
    const Eigen::VectorXd q = u.head(m).normalized();
    Eigen::VectorXd p = u.tail(m);
    p -= p.dot(q) * q;
    v.head(m) = q;
    v.tail(m) = p;
  } else {
    for (int j = 0; j < m; ++j) v[j] -= std::floor(v[j]);
  }
  return v;
}

auto distance(const Geometry& g, const Covector& a, const Covector& b) -> double {
  Covector d = a - b;
  if (g.base == BaseKind::flat_torus) {
    for (int j = 0; j < g.width(); ++j) d[j] -= std::round(d[j]);
  }
  return d.norm();
}

auto normalized_cogeodesic_flow(const Geometry& g, const Covector& u, double theta) -> Covector {
  const int m = g.width();
  const Eigen::VectorXd q = q_part(g, u);
  const Eigen::VectorXd p = p_part(g, u);
  const double np = p.norm();
  if (!(np > 0.0)) throw Error(ErrorCode::ZeroCovector, "normalized cogeodesic flow needs p != 0");
  const Eigen::VectorXd ph = p / np;
  Covector v(2 * m);
  if (g.base == BaseKind::sphere) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    v.head(m) = c * q + s * ph;
    v.tail(m) = np * (-s * q + c * ph);
  } else {
    v.head(m) = q + theta * ph;
    v.tail(m) = p;
  }
  return normalize(g, v);
}

auto cogeodesic_flow(const Geometry& g, const Covector& u, double sigma) -> Covector {
  const double np = fiber_norm(g, u);
  if (np == 0.0) return u;
  return normalized_cogeodesic_flow(g, u, np * sigma);
}

auto oriented_length(const Profile& f, double fiber_radius, double s) -> double {
  if (s == 0.0 || fiber_radius == 0.0) return 0.0;
  auto integrand = [&](double sigma) { return f.eval(std::exp(sigma) * fiber_radius, 1); };
  return numerics::integrate_1d(integrand, s, 0.0, quad).value;
}

auto half_char_flow(const Geometry& g, const Profile& f, const Covector& u, double s) -> Covector {
  if (s > 0.0) throw Error(ErrorCode::InvalidArgument, "half characteristic flow runs for s <= 0");
  const double r = fiber_norm(g, u);
  if (!(r > 0.0) || r >= f.domain_radius()) throw Error(ErrorCode::OutOfDomain, "|u| must lie in (0, r0)");
  const double ell = oriented_length(f, r, s);
  return scale_fiber(g, normalized_cogeodesic_flow(g, u, ell), std::exp(s));
}

auto half_char_flow_ode(const Geometry& g, const Profile& f, const Covector& u, double s, double tol) -> Covector {
  if (s > 0.0) throw Error(ErrorCode::InvalidArgument, "half characteristic flow runs for s <= 0");
  const int m = g.width();
  const bool sphere = g.base == BaseKind::sphere;
  // Y - X_f with X_f = 2F_s(|p|²) X_ϱ
  auto field = [m, sphere, &f](double, std::span<const double> y, std::span<double> dy) {
    double pp = 0.0;
    for (int j = 0; j < m; ++j) pp += y[m + j] * y[m + j];
    const double c = 2.0 * f.in_s(pp).d1;
    for (int j = 0; j < m; ++j) {
      dy[j] = -c * y[m + j];
      dy[m + j] = y[m + j] + (sphere ? c * pp * y[j] : 0.0);
    }
  };
  numerics::OdeControl ctl;
  ctl.abs_tol = tol;
  ctl.rel_tol = tol;
  const auto tr = numerics::solve_ode(field, to_state(u), 0.0, s, ctl);
  return normalize(g, to_vec(tr.final_state()));
}

auto char_half_length(const Shape& s, int sheet) -> numerics::QuadResult {
  const double r0 = codisc_of(s).r0;
  numerics::QuadResult q = tail_integral(s.radial(sheet), 0.0, r0);
  if (sheet < 0) q.value = -q.value;
  return q;
}

auto sigma_invariant(const Shape& s) -> numerics::QuadResult {
  const auto a = char_half_length(s, 1);
  const auto b = char_half_length(s, -1);
  return {a.value + b.value, a.error + b.error};
}

auto doubled_half_char(const Shape& s, int sheet, const Covector& u0, double r) -> Covector {
  const Geometry g = geometry_of(s);
  const double r0 = codisc_of(s).r0;
  const double n0 = fiber_norm(g, u0);
  if (std::abs(n0 - r0) > 1e-9 * r0) throw Error(ErrorCode::OutOfDomain, "u0 must lie on the equator |u| = r0");
  if (std::abs(r) > r0 * (1.0 + 1e-14)) throw Error(ErrorCode::OutOfDomain, "r must lie in [-r0, r0]");
  const Profile& f = s.radial(sheet);
  double ell;
  if (r >= 0.0) {
    ell = tail_integral(f, r, r0).value;
  } else {
    ell = 2.0 * tail_integral(f, 0.0, r0).value - tail_integral(f, -r, r0).value;
  }
  const Covector unit = scale_fiber(g, u0, 1.0 / n0);
  return scale_fiber(g, normalized_cogeodesic_flow(g, unit, ell), r);
}

auto doubled_half_char_path(const Shape& s, int sheet, const Covector& u0, double r_from, double r_to, int rows)
    -> numerics::Trajectory {
  if (rows < 1) throw Error(ErrorCode::InvalidArgument, "rows must be positive");
  if (r_from == r_to) rows = 1;
  const Profile& f = s.radial(sheet);
  numerics::Trajectory tr;
  for (int i = 0; i < rows; ++i) {
    const double r = rows == 1 ? r_from : r_from + (r_to - r_from) * i / (rows - 1);
    const Covector u = doubled_half_char(s, sheet, u0, r);
    numerics::State row{f.eval(std::abs(r), 0)};
    row.insert(row.end(), u.data(), u.data() + u.size());
    tr.times.push_back(r);
    tr.states.push_back(std::move(row));
  }
  return tr;
}

auto trace_doubled_half_char(const Geometry& g, const Profile& f, double r0, const Covector& u0) -> Covector {
  const double n0 = fiber_norm(g, u0);
  if (!(n0 > 0.0)) throw Error(ErrorCode::ZeroCovector, "equator covector is zero");
  numerics::OdeControl ctl;
  ctl.abs_tol = 1e-12;
  ctl.rel_tol = 1e-12;
  ctl.step = 1e-3;
  // d/dr (q, p̂) = -2F_s(r²) · generator
  auto plain = [&g, &f](double r, std::span<const double> y, std::span<double> dy) {
    unit_generator(g, y, dy, -2.0 * f.in_s(r * r).d1);
  };
  numerics::State y = to_state(scale_fiber(g, u0, 1.0 / n0));
  try {
    if (!f.boundary_singular()) {
      y = numerics::solve_ode(plain, y, r0, -r0, ctl).final_state();
    } else {
      // r = ±(r0 - v²) near the two equator crossings; v F_s stays bounded
      const double v1 = std::sqrt(0.25 * r0);
      const double r1 = r0 - v1 * v1;
      auto near = [&g, &f, r0](double sign) {
        return [&g, &f, r0, sign](double v, std::span<const double> y, std::span<double> dy) {
          const double vv = std::max(v, 1e-7);
          const double r = r0 - vv * vv;
          unit_generator(g, y, dy, sign * 4.0 * vv * f.in_s(r * r).d1);
        };
      };
      y = numerics::solve_ode(near(1.0), y, 0.0, v1, ctl).final_state();
      y = numerics::solve_ode(plain, y, r1, -r1, ctl).final_state();
      y = numerics::solve_ode(near(-1.0), y, v1, 0.0, ctl).final_state();
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::TracingFailure, std::string("doubled half characteristic: ") + e.what());
  }
  Covector v = to_vec(y);
  v = normalize(g, v);
  v.tail(g.width()).normalize();
  return scale_fiber(g, v, -r0);
}

auto twist_map(const Geometry& g, const profiles::Ramp& theta, const Profile& shift, const Point& x) -> Point {
  const Covector u = point_covector(g, x);
  const double r = fiber_norm(g, u);
  const double angle = theta.at(r).v;
  Point y = x;
  y[0] = x[0] - shift.in_s(r * r).v;
  if (angle != 0.0) y.tail(u.size()) = normalized_cogeodesic_flow(g, u, angle);
  return y;
}

auto cogeodesic_twist(const Shape& s, const profiles::Ramp& theta) -> TwistResult {
  const auto& c = codisc_of(s);
  if (theta.start != 0.0) throw Error(ErrorCode::InvalidArgument, "twist angle must vanish near the zero section");
  if (!(theta.lo > 0.0 && theta.hi > theta.lo && theta.hi < c.r0)) {
    throw Error(ErrorCode::InvalidArgument, "twist ramp must sit inside (0, r0)");
  }
  const Profile big_theta(profiles::make_twist_potential(theta, c.r0));
  TwistResult res;
  res.angle = theta.end;
  res.target = profiles::make_radial_shape(s.shadow, s.radial_plus() - big_theta, s.radial_minus() - big_theta);
  const Geometry g = geometry_of(s);
  res.map = [g, theta, big_theta](const Point& x) { return twist_map(g, theta, big_theta, x); };
  return res;
}

auto monodromy_at(const Shape& s, Which which, const Covector& u0) -> MonodromySample {
  const Geometry g = geometry_of(s);
  const double r0 = codisc_of(s).r0;
  MonodromySample out;
  out.start = u0;
  const double lp = char_half_length(s, 1).value;
  const double lm = char_half_length(s, -1).value;
  switch (which) {
    case Which::plus:
      out.predicted = scale_fiber(g, normalized_cogeodesic_flow(g, u0, 2.0 * lp), -1.0);
      out.traced = trace_doubled_half_char(g, s.radial_plus(), r0, u0);
      break;
    case Which::minus:
      out.predicted = scale_fiber(g, normalized_cogeodesic_flow(g, u0, -2.0 * lm), -1.0);
      out.traced = trace_doubled_half_char(g, s.radial_minus(), r0, u0);
      break;
    case Which::full:
      out.predicted = normalized_cogeodesic_flow(g, u0, 2.0 * (lp + lm));
      out.traced = trace_doubled_half_char(g, s.radial_minus(), r0,
                                           trace_doubled_half_char(g, s.radial_plus(), r0, u0));
      break;
  }
  out.deviation = distance(g, out.predicted, out.traced);
  return out;
}

auto equator_monodromy(const Shape& s, Which which, int n_samples, unsigned long long seed) -> MonodromyReport {
  const Geometry g = geometry_of(s);
  const double r0 = codisc_of(s).r0;
  profiles::require_valid(s);
  MonodromyReport rep;
  const double lp = char_half_length(s, 1).value;
  const double lm = char_half_length(s, -1).value;
  switch (which) {
    case Which::plus: rep.flow_angle = 2.0 * lp; rep.negate_fiber = true; break;
    case Which::minus: rep.flow_angle = -2.0 * lm; rep.negate_fiber = true; break;
    case Which::full: rep.flow_angle = 2.0 * (lp + lm); rep.negate_fiber = false; break;
  }
  moser::Uniform u(seed);
  for (int k = 0; k < n_samples; ++k) {
    rep.samples.push_back(monodromy_at(s, which, random_covector(g, r0, u)));
    rep.max_deviation = std::max(rep.max_deviation, rep.samples.back().deviation);
  }
  return rep;
}

auto moser_h_cotangent(const Profile& g, double r0) -> moser::Potential {
  moser::Potential pot;
  const moser::Range supp = moser::numerical_support(radial(g), {0.0, r0 * r0});
  if (supp.empty()) {
    pot.support = supp;
    pot.h = [](double) { return Jet{}; };
    return pot;
  }
  const double r_lo = std::sqrt(supp.lo);
  const double r_hi = std::sqrt(supp.hi);
  auto gs = [g](double tau) { return g.in_s(tau * tau).d1; };
  const numerics::QuadResult total = numerics::integrate_1d(gs, r_lo, r_hi, quad);
  numerics::QuadResult mass = numerics::integrate_1d([gs](double t) { return std::abs(gs(t)); }, r_lo, r_hi, quad);
  const bool matched = std::abs(total.value) <= 1e-9 * std::max(1.0, mass.value);
  pot.smooth = matched;
  if (matched) {
    // h = -r ∫_0^r g'(τ)/τ dτ = -2ρ Q, Q = (1/r) ∫_0^r g_s(τ²) dτ
    pot.support = supp;
    pot.h = [g, gs, r_lo](double rho) {
      const double r = std::sqrt(std::max(rho, 0.0));
      const double g_s = g.in_s(rho).d1;
      double q = g_s;
      if (r > 1e-8) {
        q = r <= r_lo ? 0.0 : numerics::integrate_1d(gs, r_lo, r, quad).value / r;
      }
      return Jet{-2.0 * rho * q, -q - g_s, 0.0};
    };
    return pot;
  }
  pot.warning = "half-lengths differ by " + std::to_string(2.0 * total.value) +
                "; h is not smooth at the zero section";
  pot.support = {0.0, supp.hi};
  pot.h = [g, gs, r_lo, r_hi, total](double rho) {
    const double r = std::sqrt(std::max(rho, 0.0));
    const double lo = std::max(r, r_lo);
    const double j = lo >= r_hi ? 0.0 : (r <= r_lo ? total.value : numerics::integrate_1d(gs, lo, r_hi, quad).value);
    const double big_j = 2.0 * j;
    if (r == 0.0) return Jet{0.0, std::copysign(HUGE_VAL, big_j), 0.0};
    return Jet{r * big_j, big_j / (2.0 * r) - g.in_s(rho).d1, 0.0};
  };
  return pot;
}

// ---------------------------------------------------------------------------

MoserProblem::MoserProblem(const Shape& source, const Shape& target) : source_(source), target_(target) {
  const auto& cs = codisc_of(source);
  const auto& ct = codisc_of(target);
  if (cs.base != ct.base || cs.n != ct.n || cs.r0 != ct.r0) throw Error(ErrorCode::ShadowMismatch, "codiscs differ");
  geo_ = geometry_of(source);
  const double r0 = cs.r0;
  profiles::require_valid(source);
  profiles::require_valid(target);
  if (!profiles::equivalence_check(source, target).equivalent) {
    throw Error(ErrorCode::InequivalentShapes, "shapes differ near the boundary of the shadow");
  }
  const auto ss = sigma_invariant(source);
  const auto st = sigma_invariant(target);
  if (std::abs(ss.value - st.value) > 1e-7 + ss.error + st.error) {
    throw Error(ErrorCode::SigmaMismatch, "characteristic lengths differ: " + std::to_string(ss.value) + " vs " +
                                              std::to_string(st.value));
  }
  angle_ = char_half_length(source, 1).value - char_half_length(target, 1).value;
  twisted_ = source;
  ramp_ = profiles::Ramp{0.0, 0.0, 0.25 * r0, 0.65 * r0};
  if (std::abs(angle_) > 1e-12) {
    ramp_.end = angle_;
    twisted_ = cogeodesic_twist(source, ramp_).target;
  }
  moser::VerticalMap vm(radial(twisted_.radial_plus()), radial(twisted_.radial_minus()),
                        radial(target.radial_plus()), radial(target.radial_minus()), moser::Range{0.0, r0 * r0});
  moser::Potential hp = moser_h_cotangent(target.radial_plus() - twisted_.radial_plus(), r0);
  moser::Potential hm = moser_h_cotangent(target.radial_minus() - twisted_.radial_minus(), r0);
  moser::Range supp = vm.support(1);
  const moser::Range sm = vm.support(-1);
  if (supp.empty()) {
    supp = sm;
  } else if (!sm.empty()) {
    supp = {std::min(supp.lo, sm.lo), std::max(supp.hi, sm.hi)};
  }
  const moser::RadialFn fp = radial(twisted_.radial_plus());
  const moser::RadialFn fm = radial(twisted_.radial_minus());
  const double gap = supp.empty() ? 1.0 : moser::min_gap(fp, fm, supp);
  moser::HamiltonianCutoff ham(fp, fm, std::move(hp), std::move(hm), 0.4 * gap);
  field_ = std::make_shared<moser::MoserField>(moser::Model::cotangent, std::move(vm), std::move(ham));
}

auto MoserProblem::flow_problem() const -> moser::FlowProblem {
  moser::FlowProblem fp;
  fp.chart = geo_.chart();
  auto f = field_;
  const int m = geo_.width();
  const bool sphere = geo_.base == BaseKind::sphere;
  fp.field = [f, m, sphere](double t, std::span<const double> y, std::span<double> dy) {
    double pp = 0.0;
    for (int j = 0; j < m; ++j) pp += y[1 + m + j] * y[1 + m + j];
    const moser::Coefficients c = f->coefficients(t, y[0], pp);
    dy[0] = c.vertical;
    // Gen = 2X_ϱ, Y = p∂_p
    for (int j = 0; j < m; ++j) {
      const double q = y[1 + j];
      const double p = y[1 + m + j];
      dy[1 + j] = 2.0 * c.gen * p;
      dy[1 + m + j] = (sphere ? -2.0 * c.gen * pp * q : 0.0) + c.liouville * p;
    }
  };
  if (std::abs(angle_) > 1e-12) {
    const Geometry g = geo_;
    const profiles::Ramp ramp = ramp_;
    const Profile shift(profiles::make_twist_potential(ramp, source_.radius()));
    fp.before = [g, ramp, shift](const Eigen::VectorXd& x) { return twist_map(g, ramp, shift, x); };
    fp.collar_model = fp.before;
  }
  fp.after = [f, m](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = x;
    y[0] = f->vertical_map().apply(x[0], x.tail(m).squaredNorm()).v;
    return y;
  };
  const Shape tw = twisted_;
  fp.sheet_offset = [tw, m](const Eigen::VectorXd& x, int sheet) {
    return x[0] - tw.radial(sheet).in_s(x.tail(m).squaredNorm()).v;
  };
  return fp;
}

auto MoserProblem::full_map(const Point& x, const numerics::OdeControl& c) const -> Point {
  const moser::FlowProblem fp = flow_problem();
  const Point start = fp.before ? fp.before(x) : x;
  const auto tr = numerics::solve_ode(fp.field, to_state(start), 0.0, 1.0, c);
  return fp.after(fp.chart.retract(to_vec(tr.final_state())));
}

auto random_covector(const Geometry& g, double radius, moser::Uniform& u) -> Covector {
  const int m = g.width();
  Covector v(2 * m);
  auto ball_direction = [&] {
    Eigen::VectorXd d(m);
    do {
      for (int k = 0; k < m; ++k) d[k] = u.in(-1.0, 1.0);
    } while (d.norm() < 1e-3 || d.norm() > 1.0);
    return Eigen::VectorXd(d.normalized());
  };
  if (g.base == BaseKind::sphere) {
    const Eigen::VectorXd q = ball_direction();
    Eigen::VectorXd p;
    do {
      p = ball_direction();
      p -= p.dot(q) * q;
    } while (p.norm() < 1e-3);
    v.head(m) = q;
    v.tail(m) = radius * p.normalized();
  } else {
    for (int k = 0; k < m; ++k) v[k] = u();
    v.tail(m) = radius * ball_direction();
  }
  return v;
}

auto default_seeds(const Shape& s, int count, unsigned long long seed) -> std::vector<moser::Seed> {
  const Geometry g = geometry_of(s);
  const double r0 = codisc_of(s).r0;
  moser::Uniform u(seed);
  std::vector<moser::Seed> seeds;
  for (int k = 0; k < count; ++k) {
    const int slot = k % 5;
    moser::Seed sd;
    double r;
    if (slot == 4) {
      r = r0 * u.in(0.97, 0.995);
      sd.kind = moser::SeedKind::collar;
    } else {
      r = r0 * u.in(0.0, 0.9);
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
    const Covector cv = random_covector(g, r, u);
    sd.point = Point(1 + cv.size());
    sd.point[0] = b;
    sd.point.tail(cv.size()) = cv;
    seeds.push_back(std::move(sd));
  }
  return seeds;
}

auto moser_flow_cotangent(const Shape& source, const Shape& target, const std::vector<moser::Seed>& seeds,
                          const numerics::OdeControl& control, bool keep_trajectories) -> CotangentMoserRun {
  const MoserProblem problem(source, target);
  CotangentMoserRun out;
  out.twist_angle = problem.twist_angle();
  out.run = moser::run_flow(problem.flow_problem(), seeds, control, keep_trajectories);
  const Geometry& g = problem.geometry();
  const int m = g.width();
  moser::Uniform u(0x5eedULL);
  for (int sheet : {1, -1}) {
    for (int k = 0; k < 3; ++k) {
      Covector base = random_covector(g, 1.0, u);
      base.tail(m).setZero();
      Point x(1 + 2 * m);
      x[0] = source.radial(sheet).in_s(0.0).v;
      x.tail(2 * m) = base;
      const Point y = problem.full_map(x, control);
      const double height = target.radial(sheet).in_s(0.0).v;
      const double err = std::max({std::abs(y[0] - height), distance(g, y.tail(2 * m), base)});
      out.singular_set_error = std::max(out.singular_set_error, err);
    }
  }
  return out;
}

}  // namespace vcd::cotangent

#include "vcd/sympl.hpp"

#include "vcd/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace vcd::sympl {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
const numerics::Quadrature quad{1e-13, 1e-12, 40};

auto interval_of(const Shape& s) -> const profiles::Interval& {
  if (const auto* i = std::get_if<profiles::Interval>(&s.shadow)) return *i;
  throw Error(ErrorCode::GeometryMismatch, "shape is not over an interval shadow");
}

auto in_a(const RProfile& p) -> moser::RadialFn {
  return [p](double a) { return p.at(a); };
}

auto tight() -> numerics::OdeControl {
  numerics::OdeControl c;
  c.abs_tol = 1e-12;
  c.rel_tol = 1e-12;
  c.step = 1e-3;
  return c;
}

auto merge(moser::Range a, moser::Range b) -> moser::Range {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

}  // namespace

auto ContactModel::besse_half_period() const -> double { return std::numbers::pi; }

auto wrap_angle(double w) -> double {
  double r = std::fmod(w, two_pi);
  if (r < 0.0) r += two_pi;
  return r >= two_pi ? 0.0 : r;
}

auto arc_distance(double a, double b) -> double { return std::abs(std::remainder(a - b, two_pi)); }

auto reeb_flow(double t, double w) -> double { return wrap_angle(w + t); }

auto char_action(const Shape& s, int sheet) -> numerics::QuadResult {
  const auto& iv = interval_of(s);
  const RProfile& f = s.interval(sheet);
  auto integrand = [&f](double tau) { return std::exp(-tau) * f.at(tau).d1; };
  numerics::QuadResult q = numerics::integrate_1d(integrand, iv.a1, iv.a0, quad);
  if (sheet < 0) q.value = -q.value;
  return q;
}

auto total_action(const Shape& s) -> numerics::QuadResult {
  const auto a = char_action(s, 1);
  const auto b = char_action(s, -1);
  return {a.value + b.value, a.error + b.error};
}

auto sympl_char_flow(const Shape& s, int sheet, double step, FlowPoint p) -> FlowPoint {
  const auto& iv = interval_of(s);
  const double end = p.a + step;
  if (p.a < iv.a1 || p.a > iv.a0 || end < iv.a1 || end > iv.a0) {
    throw Error(ErrorCode::OutOfDomain, "flow leaves the shadow interval");
  }
  const RProfile& f = s.interval(sheet);
  auto integrand = [&f](double tau) { return std::exp(-tau) * f.at(tau).d1; };
  const double sigma = numerics::integrate_1d(integrand, end, p.a, quad).value;
  return {end, reeb_flow(sigma, p.w)};
}

auto sympl_char_path(const Shape& s, int sheet, FlowPoint p, double s_end, int rows) -> numerics::Trajectory {
  if (rows < 1) throw Error(ErrorCode::InvalidArgument, "rows must be positive");
  if (s_end == 0.0) rows = 1;
  const RProfile& f = s.interval(sheet);
  numerics::Trajectory tr;
  for (int i = 0; i < rows; ++i) {
    const double step = rows == 1 ? 0.0 : s_end * i / (rows - 1);
    const FlowPoint q = sympl_char_flow(s, sheet, step, p);
    tr.times.push_back(step);
    tr.states.push_back({f.eval(q.a, 0), q.a, q.w});
  }
  return tr;
}

auto sympl_char_flow_ode(const Shape& s, int sheet, double step, FlowPoint p, double tol) -> FlowPoint {
  const auto& iv = interval_of(s);
  if (p.a < iv.a1 || p.a > iv.a0 || p.a + step < iv.a1 || p.a + step > iv.a0) {
    throw Error(ErrorCode::OutOfDomain, "flow leaves the shadow interval");
  }
  const RProfile& f = s.interval(sheet);
  // ∂_a - X_f with X_f = e^{-a} f'(a) ∂_w
  auto field = [&f](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = 1.0;
    dy[1] = -std::exp(-y[0]) * f.at(y[0]).d1;
  };
  numerics::OdeControl c = tight();
  c.abs_tol = tol;
  c.rel_tol = tol;
  const auto tr = numerics::solve_ode(field, {p.a, p.w}, 0.0, step, c);
  return {tr.final_state()[0], wrap_angle(tr.final_state()[1])};
}

auto twist_map(const profiles::ReebRamp& theta, const RProfile& shift, const Point& x) -> Point {
  Point y = x;
  y[0] = x[0] - shift.at(x[1]).v;
  y[2] = x[2] + theta.at(x[1]).v;
  return y;
}

auto reeb_twist(const Shape& s, double theta1, double theta0) -> TwistResult {
  const auto& iv = interval_of(s);
  TwistResult res;
  res.theta = profiles::make_reeb_ramp(theta1, theta0, iv.a1, iv.a0);
  const RProfile shift(profiles::ReebPotential{res.theta});
  res.target = profiles::make_interval_shape(iv, s.interval_plus() - shift, s.interval_minus() - shift);
  const profiles::ReebRamp th = res.theta;
  res.map = [th, shift](const Point& x) { return twist_map(th, shift, x); };
  return res;
}

auto trace_sheet(const Shape& s, int sheet, double w) -> double {
  const auto& iv = interval_of(s);
  const RProfile& f = s.interval(sheet);
  auto field = [&f](double a, std::span<const double>, std::span<double> dy) {
    dy[0] = -std::exp(-a) * f.at(a).d1;
  };
  const double from = sheet > 0 ? iv.a0 : iv.a1;
  const double to = sheet > 0 ? iv.a1 : iv.a0;
  try {
    const auto tr = numerics::solve_ode(field, {w}, from, to, tight());
    return wrap_angle(tr.final_state()[0]);
  } catch (const Error& e) {
    throw Error(ErrorCode::TracingFailure, std::string("sheet characteristic: ") + e.what());
  }
}

auto sympl_monodromy(const Shape& s, Which which, int n_samples, unsigned long long seed) -> MonodromyReport {
  profiles::require_valid(s);
  MonodromyReport rep;
  const double ap = char_action(s, 1).value;
  const double am = char_action(s, -1).value;
  switch (which) {
    case Which::plus: rep.rotation = ap; break;
    case Which::minus: rep.rotation = am; break;
    case Which::full: rep.rotation = ap + am; break;
  }
  moser::Uniform u(seed);
  for (int k = 0; k < n_samples; ++k) {
    MonodromySample smp;
    smp.start = u.in(0.0, two_pi);
    smp.predicted = reeb_flow(rep.rotation, smp.start);
    switch (which) {
      case Which::plus: smp.traced = trace_sheet(s, 1, smp.start); break;
      case Which::minus: smp.traced = trace_sheet(s, -1, smp.start); break;
      case Which::full: smp.traced = trace_sheet(s, -1, trace_sheet(s, 1, smp.start)); break;
    }
    smp.deviation = arc_distance(smp.predicted, smp.traced);
    rep.max_deviation = std::max(rep.max_deviation, smp.deviation);
    rep.samples.push_back(smp);
  }
  return rep;
}

auto moser_h_sympl(const RProfile& g_plus, const RProfile& g_minus, const profiles::Interval& shadow)
    -> std::pair<moser::Potential, moser::Potential> {
  double lower[2] = {0.0, 0.0};
  auto branch = [&](const RProfile& g, double& at_a1) {
    moser::Potential pot;
    const moser::Range supp = moser::numerical_support(in_a(g), {shadow.a1, shadow.a0});
    if (supp.empty()) {
      pot.support = supp;
      pot.h = [](double) { return Jet{}; };
      return pot;
    }
    // J(a) = ∫_a^{a0} e^{-τ} g'(τ) dτ, constant below the support
    auto tail = std::make_shared<const numerics::TailIntegral>(
        [g](double tau) { return std::exp(-tau) * g.at(tau).d1; }, supp.lo, supp.hi);
    at_a1 = (*tail)(supp.lo);
    pot.support = {shadow.a1, supp.hi};
    pot.h = [g, tail](double a) {
      const double h = std::exp(a) * (*tail)(a);
      return Jet{h, h - g.at(a).d1, 0.0};
    };
    return pot;
  };
  auto hp = branch(g_plus, lower[0]);
  auto hm = branch(g_minus, lower[1]);
  const double mismatch = std::exp(shadow.a1) * (lower[0] - lower[1]);
  if (std::abs(mismatch) > 1e-9) {
    throw Error(ErrorCode::TotalActionMismatch,
                "boundary potentials differ at a1 by " + std::to_string(mismatch) + " (total actions differ)");
  }
  return {std::move(hp), std::move(hm)};
}

// ---------------------------------------------------------------------------

MoserProblem::MoserProblem(const Shape& source, const Shape& target) : source_(source), target_(target) {
  const auto& is = interval_of(source);
  const auto& it = interval_of(target);
  if (is.a1 != it.a1 || is.a0 != it.a0) throw Error(ErrorCode::ShadowMismatch, "intervals differ");
  profiles::require_valid(source);
  profiles::require_valid(target);
  if (!profiles::equivalence_check(source, target).equivalent) {
    throw Error(ErrorCode::InequivalentShapes, "shapes differ near the boundary of the shadow");
  }
  const RProfile gp = target.interval_plus() - source.interval_plus();
  const RProfile gm = target.interval_minus() - source.interval_minus();
  auto [hp, hm] = moser_h_sympl(gp, gm, is);
  moser::VerticalMap vm(in_a(source.interval_plus()), in_a(source.interval_minus()), in_a(target.interval_plus()),
                        in_a(target.interval_minus()), moser::Range{is.a1, is.a0});
  const moser::Range supp = merge(vm.support(1), vm.support(-1));
  lower_rotation_ = hp.support.empty() ? 0.0 : std::exp(-is.a1) * hp.h(is.a1).v;
  // below the perturbations both branches are the same multiple of e^a
  const moser::Range pert = merge(moser::numerical_support(in_a(gp), {is.a1, is.a0}),
                                  moser::numerical_support(in_a(gm), {is.a1, is.a0}));
  const double merge_below = pert.empty() ? -1e300 : pert.lo;
  const moser::RadialFn fp = in_a(source.interval_plus());
  const moser::RadialFn fm = in_a(source.interval_minus());
  const double gap = supp.empty() ? 1.0 : moser::min_gap(fp, fm, supp);
  moser::HamiltonianCutoff ham(fp, fm, std::move(hp), std::move(hm), 0.4 * gap, merge_below);
  field_ = std::make_shared<moser::MoserField>(moser::Model::circle, std::move(vm), std::move(ham));
}

auto MoserProblem::flow_problem() const -> moser::FlowProblem {
  moser::FlowProblem fp;
  fp.chart = ContactModel{}.chart();
  auto f = field_;
  fp.field = [f](double t, std::span<const double> y, std::span<double> dy) {
    const moser::Coefficients c = f->coefficients(t, y[0], y[1]);
    // Gen = e^{-a} ∂_w, Y = ∂_a
    dy[0] = c.vertical;
    dy[1] = c.liouville;
    dy[2] = c.gen * std::exp(-y[1]);
  };
  fp.after = [f](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = x;
    y[0] = f->vertical_map().apply(x[0], x[1]).v;
    return y;
  };
  const Shape src = source_;
  fp.sheet_offset = [src](const Eigen::VectorXd& x, int sheet) { return x[0] - src.interval(sheet).at(x[1]).v; };
  const auto& iv = interval_of(source_);
  const double mid = 0.5 * (iv.a1 + iv.a0);
  const double rot = lower_rotation_;
  fp.collar_model = [mid, rot](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = x;
    if (x[1] < mid) y[2] += rot;
    return y;
  };
  return fp;
}

auto MoserProblem::full_map(const Point& x, const numerics::OdeControl& c) const -> Point {
  const moser::FlowProblem fp = flow_problem();
  const auto tr = numerics::solve_ode(fp.field, numerics::State(x.data(), x.data() + x.size()), 0.0, 1.0, c);
  const auto& y = tr.final_state();
  return fp.after(Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size())));
}

auto default_seeds(const Shape& s, int count, unsigned long long seed) -> std::vector<moser::Seed> {
  const auto& iv = interval_of(s);
  const double len = iv.a0 - iv.a1;
  moser::Uniform u(seed);
  std::vector<moser::Seed> seeds;
  int collars = 0;
  for (int k = 0; k < count; ++k) {
    const int slot = k % 5;
    moser::Seed sd;
    double a;
    if (slot == 4) {
      const double depth = len * u.in(0.005, 0.03);
      a = collars++ % 2 == 0 ? iv.a0 - depth : iv.a1 + depth;
      sd.kind = moser::SeedKind::collar;
    } else {
      a = iv.a1 + len * u.in(0.05, 0.95);
      sd.kind = slot == 0 ? moser::SeedKind::on_plus
                          : slot == 1 ? moser::SeedKind::on_minus : moser::SeedKind::interior;
    }
    const double fp = s.interval_plus().at(a).v;
    const double fm = s.interval_minus().at(a).v;
    double b;
    switch (sd.kind) {
      case moser::SeedKind::on_plus: b = fp; break;
      case moser::SeedKind::on_minus: b = fm; break;
      default: b = fm + u.in(0.05, 0.95) * (fp - fm); break;
    }
    sd.point = Point(3);
    sd.point << b, a, u.in(0.0, two_pi);
    seeds.push_back(std::move(sd));
  }
  return seeds;
}

auto moser_flow_sympl(const Shape& source, const Shape& target, const std::vector<moser::Seed>& seeds,
                      const numerics::OdeControl& control, bool keep_trajectories) -> SymplMoserRun {
  const MoserProblem problem(source, target);
  SymplMoserRun out;
  const moser::FlowProblem fp = problem.flow_problem();
  out.run = moser::run_flow(fp, seeds, control, keep_trajectories);
  out.lower_rotation = problem.lower_rotation();
  const auto& iv = interval_of(source);
  const double mid = 0.5 * (iv.a1 + iv.a0);
  for (const auto& r : out.run.seeds) {
    if (r.kind != moser::SeedKind::collar) continue;
    const double raw = fp.chart.difference(r.image, r.start).norm();
    double& slot = r.start[1] < mid ? out.lower_collar_displacement : out.upper_collar_displacement;
    slot = std::max(slot, raw);
  }
  return out;
}

}  // namespace vcd::sympl

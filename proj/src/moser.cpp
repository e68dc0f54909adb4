#include "vcd/moser.hpp"

#include "vcd/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vcd::moser {

auto liouville_rate(Model m, double rho) -> double {
  switch (m) {
    case Model::ball: return rho;
    case Model::cotangent: return 2.0 * rho;
    case Model::circle: return 1.0;
  }
  return 0.0;
}

auto gen_action(Model m, double rho) -> double { return liouville_rate(m, rho); }

auto numerical_support(const RadialFn& g, Range domain, int samples) -> Range {
  const double step = (domain.hi - domain.lo) / samples;
  int first = -1;
  int last = -1;
  for (int k = 0; k < samples; ++k) {
    const Jet j = g(domain.lo + (k + 0.5) * step);
    const bool nonzero = !(j.v == 0.0 && j.d1 == 0.0);
    if (nonzero) {
      if (first < 0) first = k;
      last = k;
    }
  }
  if (first < 0) return {};
  Range r{domain.lo + (first - 1) * step, domain.lo + (last + 2) * step};
  r.lo = std::max(r.lo, domain.lo);
  r.hi = std::min(r.hi, domain.hi);
  return r;
}

auto min_gap(const RadialFn& f_plus, const RadialFn& f_minus, Range r, int samples) -> double {
  double gap = std::numeric_limits<double>::infinity();
  const double step = (r.hi - r.lo) / samples;
  for (int k = 0; k < samples; ++k) {
    const double x = r.lo + (k + 0.5) * step;
    gap = std::min(gap, f_plus(x).v - f_minus(x).v);
  }
  return gap;
}

namespace {

struct KValue {
  double k;
  double dk;
};

// K(u) = u on the plateau |u| <= p, then p + eps (w + exp(1/(1-w) - 1/w)) with w the relative
// depth into the transition. 1/K' is the cutoff; it is flat at both ends of the transition.
auto kfun(double u, double p, double eps) -> KValue {
  const double au = std::abs(u);
  if (au <= p) return {u, 1.0};
  const double w = (au - p) / eps;
  const double inf = std::numeric_limits<double>::infinity();
  if (w >= 1.0) return {inf, inf};
  const double lb = 1.0 / (1.0 - w) - 1.0 / w;
  if (lb > 700.0) return {inf, inf};
  const double bw = std::exp(lb);
  const double dbw = bw * (1.0 / ((1.0 - w) * (1.0 - w)) + 1.0 / (w * w));
  const double k = p + eps * (w + bw);
  return {u < 0.0 ? -k : k, 1.0 + dbw};
}

// log K'(u); stays finite where K' itself overflows.
auto log_dk(double u, double p, double eps) -> double {
  const double au = std::abs(u);
  if (au <= p) return 0.0;
  const double w = (au - p) / eps;
  if (w >= 1.0) return std::numeric_limits<double>::infinity();
  const double lb = 1.0 / (1.0 - w) - 1.0 / w;
  const double q = 1.0 / ((1.0 - w) * (1.0 - w)) + 1.0 / (w * w);
  if (lb <= 0.0) return std::log1p(std::exp(lb) * q);
  return lb + std::log(q) + std::log1p(std::exp(-lb) / q);
}

auto kinv(double target, double p, double eps) -> double {
  const double at = std::abs(target);
  if (at <= p) return target;
  // Newton on log(w + e^{lb(w)}) = log c, safeguarded by bisection
  const double log_c = std::log((at - p) / eps);
  double lo = 0.0;
  double hi = 1.0;
  double w = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double lb = 1.0 / (1.0 - w) - 1.0 / w;
    const double q = 1.0 / ((1.0 - w) * (1.0 - w)) + 1.0 / (w * w);
    double psi;
    double dpsi;
    if (lb > 0.0) {
      const double e = std::exp(-lb);
      psi = lb + std::log1p(w * e) - log_c;
      dpsi = (e + q) / (w * e + 1.0);
    } else {
      const double e = std::exp(lb);
      psi = std::log(w + e) - log_c;
      dpsi = (1.0 + e * q) / (w + e);
    }
    if (psi > 0.0) {
      hi = w;
    } else {
      lo = w;
    }
    double next = w - psi / dpsi;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - w) <= 1e-16 || hi - lo <= 1e-16) {
      w = next;
      break;
    }
    w = next;
  }
  const double u = p + eps * w;
  return target < 0.0 ? -u : u;
}

}  // namespace

VerticalMap::VerticalMap(RadialFn f_plus, RadialFn f_minus, RadialFn g_plus, RadialFn g_minus, Range domain,
                         double band) {
  auto diff = [](RadialFn g, RadialFn f) { return [g, f](double x) { return g(x) - f(x); }; };
  supp_minus_ = numerical_support(diff(g_minus, f_minus), domain);
  supp_plus_ = numerical_support(diff(g_plus, f_plus), domain);
  minus_ = Stage{f_minus, g_minus, supp_minus_, 0.0};
  plus_ = Stage{f_plus, g_plus, supp_plus_, 0.0};

  auto sup_abs = [](const Stage& s) {
    double m = 0.0;
    if (s.supp.empty()) return m;
    constexpr int n = 2000;
    for (int k = 0; k <= n; ++k) {
      const double x = s.supp.lo + (s.supp.hi - s.supp.lo) * k / n;
      m = std::max(m, std::abs(s.g(x).v - s.f(x).v));
    }
    return 1.02 * m + 1e-12;
  };
  const double m_minus = sup_abs(minus_);
  const double m_plus = sup_abs(plus_);

  Range both = supp_minus_;
  if (both.empty()) {
    both = supp_plus_;
  } else if (!supp_plus_.empty()) {
    both = {std::min(both.lo, supp_plus_.lo), std::max(both.hi, supp_plus_.hi)};
  }
  if (both.empty()) {
    eps_ = band > 0.0 ? band : 0.0;
    clearance_ = std::numeric_limits<double>::infinity();
    return;
  }
  const double gap = min_gap(f_plus, f_minus, both);
  eps_ = band > 0.0 ? band : 0.1 * gap;
  minus_.plateau = 0.5 * m_minus + eps_;
  plus_.plateau = 0.5 * m_plus + eps_;

  clearance_ = std::numeric_limits<double>::infinity();
  constexpr int n = 2000;
  // stage - must fix a neighbourhood of the upper source sheet
  if (!supp_minus_.empty()) {
    for (int k = 0; k <= n; ++k) {
      const double x = supp_minus_.lo + (supp_minus_.hi - supp_minus_.lo) * k / n;
      const double mid = 0.5 * (f_minus(x).v + g_minus(x).v);
      clearance_ = std::min(clearance_, f_plus(x).v - mid - (minus_.plateau + eps_));
    }
  }
  // stage + must fix a neighbourhood of the lower target sheet
  if (!supp_plus_.empty()) {
    for (int k = 0; k <= n; ++k) {
      const double x = supp_plus_.lo + (supp_plus_.hi - supp_plus_.lo) * k / n;
      const double mid = 0.5 * (f_plus(x).v + g_plus(x).v);
      clearance_ = std::min(clearance_, mid - g_minus(x).v - (plus_.plateau + eps_));
    }
  }
  if (!(clearance_ > 0.0)) {
    throw Error(ErrorCode::BandCollision,
                "cutoff bands of the two stages overlap (clearance " + std::to_string(clearance_) + ")");
  }
}

auto VerticalMap::stage(const Stage& s, double b, double rho) const -> Partials {
  if (s.supp.empty() || !s.supp.contains(rho)) return {b, 1.0, 0.0};
  const Jet f = s.f(rho);
  const Jet g = s.g(rho);
  const Jet gd = g - f;
  const Jet mid = 0.5 * (f + g);
  const double u0 = b - mid.v;
  if (std::abs(u0) >= s.plateau + eps_) return {b, 1.0, 0.0};
  const KValue k0 = kfun(u0, s.plateau, eps_);
  if (!std::isfinite(k0.k)) return {b, 1.0, 0.0};
  const double u1 = kinv(k0.k + gd.v, s.plateau, eps_);
  const double l1 = log_dk(u1, s.plateau, eps_);
  const double ratio = std::exp(log_dk(u0, s.plateau, eps_) - l1);  // K'(u0) / K'(u1)
  return {mid.v + u1, ratio, mid.d1 * (1.0 - ratio) + gd.d1 * std::exp(-l1)};
}

auto VerticalMap::apply(double b, double rho) const -> Partials {
  const Partials a = stage(minus_, b, rho);
  const Partials c = stage(plus_, a.v, rho);
  return {c.v, c.b * a.b, c.b * a.rho + c.rho};
}

HamiltonianCutoff::HamiltonianCutoff(RadialFn f_plus, RadialFn f_minus, Potential h_plus, Potential h_minus,
                                     double width, double merge_below)
    : fp_(std::move(f_plus)),
      fm_(std::move(f_minus)),
      hp_(std::move(h_plus)),
      hm_(std::move(h_minus)),
      width_(width),
      merge_below_(merge_below) {
  if (hp_.support.empty()) {
    supp_ = hm_.support;
  } else if (hm_.support.empty()) {
    supp_ = hp_.support;
  } else {
    supp_ = {std::min(hp_.support.lo, hm_.support.lo), std::max(hp_.support.hi, hm_.support.hi)};
  }
}

auto HamiltonianCutoff::at(double b, double rho) const -> Partials {
  if (supp_.empty() || !supp_.contains(rho)) return {};
  const Jet hp = hp_.support.contains(rho) ? hp_.h(rho) : Jet{};
  const Jet hm = rho < merge_below_ ? hp : (hm_.support.contains(rho) ? hm_.h(rho) : Jet{});
  const Jet d = hp - hm;
  const Jet fp = fp_(rho);
  const Jet fm = fm_(rho);
  const double w = width_;

  const Jet s1 = smooth::step((b - fm.v + 2.0 * w) / w);
  const Jet s2 = smooth::step((fp.v + 2.0 * w - b) / w);
  const double chi = s1.v * s2.v;
  const double chi_b = (s1.d1 * s2.v - s1.v * s2.d1) / w;
  const double chi_rho = (-s1.d1 * fm.d1 * s2.v + s1.v * s2.d1 * fp.d1) / w;
  if (chi == 0.0 && chi_b == 0.0 && chi_rho == 0.0) return {};

  double omega = 0.0;
  double omega_b = 0.0;
  double omega_rho = 0.0;
  if (!(d.v == 0.0 && d.d1 == 0.0)) {
    const double gap = fp.v - fm.v;
    if (!(gap > 0.0)) {
      throw Error(ErrorCode::OutOfDomain, "branches of the boundary potential differ where the sheets meet");
    }
    const double x = (b - fm.v) / gap;
    const Jet s = smooth::step((x - 0.3) / 0.4);
    omega = s.v;
    const double dx = s.d1 / 0.4;
    omega_b = dx / gap;
    omega_rho = dx * (-fm.d1 * gap - (b - fm.v) * (fp.d1 - fm.d1)) / (gap * gap);
  }
  const double inner = hm.v + omega * d.v;
  return {chi * inner, chi_b * inner + chi * omega_b * d.v,
          chi_rho * inner + chi * (hm.d1 + omega_rho * d.v + omega * d.d1)};
}

auto MoserField::coefficients(double t, double b, double rho) const -> Coefficients {
  const Partials f = vmap_.apply(b, rho);
  const Partials h = ham_.at(b, rho);
  const double r = 1.0 / ((1.0 - t) + t * f.b);
  const double s = f.b - 1.0;
  const double lv = r * (s + h.b);
  const double gen = f.rho + h.rho - t * lv * f.rho;
  const double y = liouville_rate(model_, rho);
  const double l = gen_action(model_, rho);
  const double yt = -r * (t * f.rho * lv * y + gen * l);
  return {gen, lv, h.v * r + yt};
}

}  // namespace vcd::moser

namespace vcd::moser {

auto Uniform::operator()() -> double {
  // splitmix64
  state_ += 0x9E3779B97F4A7C15ULL;
  unsigned long long z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

auto run_flow(const FlowProblem& problem, const std::vector<Seed>& seeds, const numerics::OdeControl& control,
              bool keep_trajectories) -> MoserRun {
  MoserRun run;
  const ContactChart& chart = problem.chart;
  auto before = [&](const Eigen::VectorXd& x) { return problem.before ? problem.before(x) : x; };
  auto after = [&](const Eigen::VectorXd& x) { return problem.after ? problem.after(x) : x; };
  auto to_state = [](const Eigen::VectorXd& x) { return numerics::State(x.data(), x.data() + x.size()); };
  auto to_vec = [](const numerics::State& s) {
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(s.data(), static_cast<Eigen::Index>(s.size())));
  };
  for (const Seed& seed : seeds) {
    SeedResult res;
    res.start = seed.point;
    res.kind = seed.kind;
    const numerics::Trajectory tr = numerics::solve_ode(problem.field, to_state(before(seed.point)), 0.0, 1.0, control);
    res.steps = tr.step_stats.steps;
    res.rejections = tr.step_stats.rejections;
    res.image = after(chart.retract(to_vec(tr.final_state())));
    const Eigen::VectorXd expected = problem.collar_model ? problem.collar_model(seed.point) : seed.point;
    res.displacement = chart.difference(res.image, expected).norm();
    const std::vector<double> grid = tr.times;
    auto composed = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      const numerics::State y = numerics::solve_ode_on_grid(problem.field, to_state(before(x)), grid, control.method);
      return after(chart.retract(to_vec(y)));
    };
    const ContactoReport rep = verify_contacto(chart, composed, {seed.point});
    res.pullback_residual = rep.max_defect;
    res.conformal_factor = rep.points.front().factor;
    if ((seed.kind == SeedKind::on_plus || seed.kind == SeedKind::on_minus) && problem.sheet_offset) {
      const int sheet = seed.kind == SeedKind::on_plus ? 1 : -1;
      for (const auto& st : tr.states) {
        res.surface_drift = std::max(res.surface_drift, std::abs(problem.sheet_offset(to_vec(st), sheet)));
      }
      run.max_surface_drift = std::max(run.max_surface_drift, res.surface_drift);
    }
    if (seed.kind == SeedKind::collar) {
      run.max_collar_displacement = std::max(run.max_collar_displacement, res.displacement);
    }
    run.max_pullback_residual = std::max(run.max_pullback_residual, res.pullback_residual);
    run.seeds.push_back(std::move(res));
    if (keep_trajectories) run.trajectories.push_back(tr);
  }
  return run;
}

}  // namespace vcd::moser

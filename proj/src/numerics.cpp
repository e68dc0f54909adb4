#include "vcd/numerics.hpp"

#include "vcd/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

namespace vcd {

auto to_string(ErrorCode code) -> std::string_view {
  switch (code) {
    case ErrorCode::ToleranceNotMet: return "tolerance-not-met";
    case ErrorCode::NonFiniteSample: return "non-finite-sample";
    case ErrorCode::MaxStepsExceeded: return "max-steps-exceeded";
    case ErrorCode::NonFiniteState: return "non-finite-state";
    case ErrorCode::OutOfDomain: return "out-of-domain";
    case ErrorCode::SingularEndpoint: return "singular-endpoint";
    case ErrorCode::ViolatedOrdering: return "violated-ordering";
    case ErrorCode::BoundaryMismatch: return "boundary-mismatch";
    case ErrorCode::ShadowMismatch: return "shadow-mismatch";
    case ErrorCode::PointNotOnSheet: return "point-not-on-sheet";
    case ErrorCode::BandCollision: return "band-collision";
    case ErrorCode::InequivalentShapes: return "inequivalent-shapes";
    case ErrorCode::ZeroCovector: return "zero-covector";
    case ErrorCode::SigmaMismatch: return "sigma-mismatch";
    case ErrorCode::TotalActionMismatch: return "total-action-mismatch";
    case ErrorCode::GeometryMismatch: return "geometry-mismatch";
    case ErrorCode::NotCompactlySupported: return "not-compactly-supported";
    case ErrorCode::TracingFailure: return "tracing-failure";
    case ErrorCode::ResidualCap: return "residual-cap";
    case ErrorCode::ConfigParse: return "config-parse";
    case ErrorCode::InvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

}  // namespace vcd

namespace vcd::numerics {
namespace {

constexpr std::array<double, 8> xgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the nodes xgk[1], xgk[3], xgk[5], xgk[7]
constexpr std::array<double, 4> wg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error, absval;
  int depth;
};

auto sample(const ScalarFn& f, double x) -> double {
  const double y = f(x);
  if (!std::isfinite(y)) {
    throw Error(ErrorCode::NonFiniteSample, "integrand is not finite at x = " + std::to_string(x));
  }
  return y;
}

auto gk15(const ScalarFn& f, double a, double b, int depth) -> Segment {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = sample(f, c);
  double kron = wgk[7] * fc;
  double gauss = wg[3] * fc;
  double absval = wgk[7] * std::abs(fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    const double f1 = sample(f, c - dx);
    const double f2 = sample(f, c + dx);
    kron += wgk[j] * (f1 + f2);
    absval += wgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += wg[j / 2] * (f1 + f2);
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h), absval * std::abs(h), depth};
}

auto adaptive(const ScalarFn& f, double a, double b, const Quadrature& q) -> QuadResult {
  auto worse = [](const Segment& l, const Segment& r) { return l.error < r.error; };
  std::priority_queue<Segment, std::vector<Segment>, decltype(worse)> heap(worse);
  Segment first = gk15(f, a, b, 0);
  double value = first.value;
  double error = first.error;
  double absval = first.absval;
  heap.push(first);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  auto target = [&] {
    return std::max({q.abs_tol, q.rel_tol * std::abs(value), 50.0 * eps * absval});
  };
  while (error > target()) {
    Segment worst = heap.top();
    if (worst.depth >= q.max_depth) {
      throw Error(ErrorCode::ToleranceNotMet,
                  "quadrature error " + std::to_string(error) + " above tolerance at max depth");
    }
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment l = gk15(f, worst.a, mid, worst.depth + 1);
    Segment r = gk15(f, mid, worst.b, worst.depth + 1);
    value += l.value + r.value - worst.value;
    error += l.error + r.error - worst.error;
    absval += l.absval + r.absval - worst.absval;
    heap.push(l);
    heap.push(r);
    if (error > target() && heap.size() > (std::size_t{1} << 15)) {
      throw Error(ErrorCode::ToleranceNotMet, "quadrature interval budget exhausted");
    }
  }
  // recompute the sums so that cancellation in the running totals does not leak out
  double v = 0.0;
  double e = 0.0;
  while (!heap.empty()) {
    v += heap.top().value;
    e += heap.top().error;
    heap.pop();
  }
  return {v, e};
}

}  // namespace

TailIntegral::TailIntegral(ScalarFn f, double a, double b, int cells)
    : f_(std::move(f)), a_(a), b_(b), h_((b - a) / cells), tail_(static_cast<std::size_t>(cells) + 1, 0.0) {
  if (!(b > a) || cells < 1) throw Error(ErrorCode::InvalidArgument, "tail integral needs a < b");
  const Quadrature q{1e-16, 1e-15, 40};
  for (int k = cells; k-- > 0;) {
    const double lo = a_ + k * h_;
    const double hi = k + 1 == cells ? b_ : lo + h_;
    tail_[static_cast<std::size_t>(k)] = tail_[static_cast<std::size_t>(k) + 1] + adaptive(f_, lo, hi, q).value;
  }
}

auto TailIntegral::operator()(double x) const -> double {
  if (x <= a_) return tail_.front();
  if (x >= b_) return 0.0;
  const auto cells = static_cast<double>(tail_.size() - 1);
  const auto k = static_cast<std::size_t>(std::min(std::floor((x - a_) / h_), cells - 1.0));
  const double hi = k + 2 == tail_.size() ? b_ : a_ + static_cast<double>(k + 1) * h_;
  return tail_[k + 1] + gk15(f_, x, hi, 0).value;
}

auto integrate_1d(const ScalarFn& f, double a, double b, const Quadrature& q, SoftEnds soft)
    -> QuadResult {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::InvalidArgument, "integration bounds must be finite");
  }
  if (a == b) return {0.0, 0.0};
  if (a > b) {
    SoftEnds flipped = soft;
    if (soft == SoftEnds::lower) flipped = SoftEnds::upper;
    if (soft == SoftEnds::upper) flipped = SoftEnds::lower;
    QuadResult r = integrate_1d(f, b, a, q, flipped);
    return {-r.value, r.error};
  }
  switch (soft) {
    case SoftEnds::none:
      return adaptive(f, a, b, q);
    case SoftEnds::upper: {
      auto g = [&](double u) { return 2.0 * u * f(b - u * u); };
      return adaptive(g, 0.0, std::sqrt(b - a), q);
    }
    case SoftEnds::lower: {
      auto g = [&](double u) { return 2.0 * u * f(a + u * u); };
      return adaptive(g, 0.0, std::sqrt(b - a), q);
    }
    case SoftEnds::both: {
      const double m = 0.5 * (a + b);
      Quadrature half = q;
      half.abs_tol *= 0.5;
      QuadResult l = integrate_1d(f, a, m, half, SoftEnds::lower);
      QuadResult r = integrate_1d(f, m, b, half, SoftEnds::upper);
      return {l.value + r.value, l.error + r.error};
    }
  }
  return {};
}

namespace {

void check_state(std::span<const double> y, double t) {
  for (double v : y) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFiniteState, "non-finite state at t = " + std::to_string(t));
    }
  }
}

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Work {
  std::size_t n;
  std::vector<double> k1, k2, k3, k4, k5, k6, k7, tmp;
  explicit Work(std::size_t n_)
      : n(n_), k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n) {}
};

// One Dormand-Prince step. k1 must hold X(t, y) on entry; on exit k7 holds X(t+h, out).
void dopri_step(const Field& field, double t, std::span<const double> y, double h, Work& w,
                std::span<double> out, std::span<double> err) {
  const std::size_t n = w.n;
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h * a21 * w.k1[i];
  field(t + c2 * h, w.tmp, w.k2);
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h * (a31 * w.k1[i] + a32 * w.k2[i]);
  field(t + c3 * h, w.tmp, w.k3);
  for (std::size_t i = 0; i < n; ++i)
    w.tmp[i] = y[i] + h * (a41 * w.k1[i] + a42 * w.k2[i] + a43 * w.k3[i]);
  field(t + c4 * h, w.tmp, w.k4);
  for (std::size_t i = 0; i < n; ++i)
    w.tmp[i] = y[i] + h * (a51 * w.k1[i] + a52 * w.k2[i] + a53 * w.k3[i] + a54 * w.k4[i]);
  field(t + c5 * h, w.tmp, w.k5);
  for (std::size_t i = 0; i < n; ++i)
    w.tmp[i] = y[i] + h * (a61 * w.k1[i] + a62 * w.k2[i] + a63 * w.k3[i] + a64 * w.k4[i] +
                           a65 * w.k5[i]);
  field(t + h, w.tmp, w.k6);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = y[i] + h * (b1 * w.k1[i] + b3 * w.k3[i] + b4 * w.k4[i] + b5 * w.k5[i] + b6 * w.k6[i]);
  field(t + h, out, w.k7);
  for (std::size_t i = 0; i < n; ++i)
    err[i] = h * (e1 * w.k1[i] + e3 * w.k3[i] + e4 * w.k4[i] + e5 * w.k5[i] + e6 * w.k6[i] +
                  e7 * w.k7[i]);
}

void rk4_step(const Field& field, double t, std::span<const double> y, double h, Work& w,
              std::span<double> out) {
  const std::size_t n = w.n;
  field(t, y, w.k1);
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + 0.5 * h * w.k1[i];
  field(t + 0.5 * h, w.tmp, w.k2);
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + 0.5 * h * w.k2[i];
  field(t + 0.5 * h, w.tmp, w.k3);
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h * w.k3[i];
  field(t + h, w.tmp, w.k4);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = y[i] + h / 6.0 * (w.k1[i] + 2.0 * w.k2[i] + 2.0 * w.k3[i] + w.k4[i]);
}

auto solve_rk4(const Field& field, const State& y0, double t0, double t1, const OdeControl& c)
    -> Trajectory {
  if (!(c.step > 0.0)) throw Error(ErrorCode::InvalidArgument, "rk4 needs a positive step");
  Trajectory tr;
  tr.times.push_back(t0);
  tr.states.push_back(y0);
  if (t0 == t1) return tr;
  const double span = t1 - t0;
  const auto nsteps = static_cast<std::size_t>(std::ceil(std::abs(span) / c.step - 1e-12));
  if (nsteps > c.max_steps) throw Error(ErrorCode::MaxStepsExceeded, "rk4 step budget exceeded");
  Work w(y0.size());
  State y = y0;
  State next(y0.size());
  for (std::size_t k = 0; k < nsteps; ++k) {
    const double ta = t0 + span * static_cast<double>(k) / static_cast<double>(nsteps);
    const double tb = k + 1 == nsteps ? t1 : t0 + span * static_cast<double>(k + 1) / nsteps;
    rk4_step(field, ta, y, tb - ta, w, next);
    check_state(next, tb);
    y.swap(next);
    tr.times.push_back(tb);
    tr.states.push_back(y);
  }
  tr.step_stats.steps = nsteps;
  return tr;
}

auto solve_rk45(const Field& field, const State& y0, double t0, double t1, const OdeControl& c)
    -> Trajectory {
  Trajectory tr;
  tr.times.push_back(t0);
  tr.states.push_back(y0);
  if (t0 == t1) return tr;
  const std::size_t n = y0.size();
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  Work w(n);
  State y = y0;
  State next(n);
  std::vector<double> err(n);
  double t = t0;
  double h = std::min(c.step > 0.0 ? c.step : 1e-2, span);
  field(t, y, w.k1);
  check_state(w.k1, t);
  std::size_t attempts = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++attempts > c.max_steps) {
      throw Error(ErrorCode::MaxStepsExceeded, "rk45 step budget exceeded at t = " + std::to_string(t));
    }
    bool last = false;
    if (h >= std::abs(t1 - t) * (1.0 - 1e-12)) {
      h = std::abs(t1 - t);
      last = true;
    }
    dopri_step(field, t, y, dir * h, w, next, err);
    double norm = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(next[i]) || !std::isfinite(err[i])) finite = false;
      const double sc = c.abs_tol + c.rel_tol * std::max(std::abs(y[i]), std::abs(next[i]));
      norm = std::max(norm, std::abs(err[i]) / sc);
    }
    if (!finite) {
      norm = 1e10;
    }
    if (norm <= 1.0) {
      t = last ? t1 : t + dir * h;
      y.swap(next);
      w.k1.swap(w.k7);
      check_state(w.k1, t);
      tr.times.push_back(t);
      tr.states.push_back(y);
      ++tr.step_stats.steps;
      const double fac = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
      h *= fac;
    } else {
      ++tr.step_stats.rejections;
      h *= std::max(0.2, 0.9 * std::pow(norm, -0.2));
      if (h < 1e-14 * std::max(1.0, std::abs(t))) {
        throw Error(ErrorCode::NonFiniteState, "rk45 step size underflow at t = " + std::to_string(t));
      }
    }
  }
  return tr;
}

}  // namespace

auto solve_ode(const Field& field, const State& y0, double t0, double t1, const OdeControl& c)
    -> Trajectory {
  check_state(y0, t0);
  return c.method == OdeMethod::rk4 ? solve_rk4(field, y0, t0, t1, c)
                                    : solve_rk45(field, y0, t0, t1, c);
}

auto solve_ode_on_grid(const Field& field, const State& y0, std::span<const double> times,
                       OdeMethod method) -> State {
  State y = y0;
  if (times.size() < 2) return y;
  Work w(y0.size());
  State next(y0.size());
  std::vector<double> err(y0.size());
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double h = times[k + 1] - times[k];
    if (method == OdeMethod::rk4) {
      rk4_step(field, times[k], y, h, w, next);
    } else {
      field(times[k], y, w.k1);
      dopri_step(field, times[k], y, h, w, next, err);
    }
    check_state(next, times[k + 1]);
    y.swap(next);
  }
  return y;
}

auto jacobian_fd(const VectorMap& f, const Eigen::VectorXd& x, double h) -> Eigen::MatrixXd {
  const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  Eigen::MatrixXd jac;
  Eigen::VectorXd xp = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double hj = h > 0.0 ? h : base * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + hj;
    const Eigen::VectorXd fp = f(xp);
    xp[j] = x[j] - hj;
    const Eigen::VectorXd fm = f(xp);
    xp[j] = x[j];
    if (j == 0) jac.resize(fp.size(), x.size());
    jac.col(j) = (fp - fm) / (2.0 * hj);
  }
  return jac;
}

auto hessian_fd(const ScalarMap& f, const Eigen::VectorXd& x, double h) -> Eigen::MatrixXd {
  const double base = std::sqrt(std::sqrt(std::numeric_limits<double>::epsilon()));
  const Eigen::Index n = x.size();
  Eigen::VectorXd step(n);
  for (Eigen::Index j = 0; j < n; ++j) step[j] = h > 0.0 ? h : base * std::max(1.0, std::abs(x[j]));
  Eigen::MatrixXd hess(n, n);
  const double f0 = f(x);
  Eigen::VectorXd y = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    y[i] = x[i] + step[i];
    const double fp = f(y);
    y[i] = x[i] - step[i];
    const double fm = f(y);
    y[i] = x[i];
    hess(i, i) = (fp - 2.0 * f0 + fm) / (step[i] * step[i]);
    for (Eigen::Index j = 0; j < i; ++j) {
      double acc = 0.0;
      for (int si : {1, -1}) {
        for (int sj : {1, -1}) {
          y[i] = x[i] + si * step[i];
          y[j] = x[j] + sj * step[j];
          acc += si * sj * f(y);
        }
      }
      y[i] = x[i];
      y[j] = x[j];
      hess(i, j) = hess(j, i) = acc / (4.0 * step[i] * step[j]);
    }
  }
  return hess;
}

auto divided_difference(const std::function<double(double, int)>& derivative, int k,
                        const Quadrature& q) -> ScalarFn {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "divided difference order must be >= 1");
  // iterating f_1(t) = int_0^1 f'(st) ds k times gives the Taylor remainder kernel
  double fact = 1.0;
  for (int j = 2; j < k; ++j) fact *= j;
  return [derivative, k, q, fact](double t) {
    if (t == 0.0) {
      double kf = 1.0;
      for (int j = 2; j <= k; ++j) kf *= j;
      return derivative(0.0, k) / kf;
    }
    auto kernel = [&](double u) { return std::pow(1.0 - u, k - 1) / fact * derivative(u * t, k); };
    return integrate_1d(kernel, 0.0, 1.0, q).value;
  };
}

}  // namespace vcd::numerics

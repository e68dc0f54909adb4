// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "vcd/cotangent.hpp"
#include "vcd/decide.hpp"
#include "vcd/euclid.hpp"
#include "vcd/numerics.hpp"
#include "vcd/sympl.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace vcd;
using profiles::Ball;
using profiles::BumpEven;
using profiles::Cap;
using profiles::Codisc;
using profiles::Interval;
using profiles::PolyEven;
using profiles::Profile;
using profiles::Ramp;
using profiles::RProfile;
using profiles::Shape;

namespace {

constexpr double pi = std::numbers::pi;

// pinned tolerances
constexpr double tol_half_length = 1e-9;
constexpr double tol_linear_action = 1e-10;
constexpr double tol_sin_action = 1e-9;
constexpr double tol_hessian = 1e-4;
constexpr double tol_drift = 1e-5;
constexpr double tol_defect = 1e-4;
constexpr double moser_rk45_tol = 1e-8;
constexpr int moser_seeds = 50;
constexpr double rk4_coarse = 0.25;
constexpr double min_halving_gain = 8.0;
constexpr double tol_h = 1e-6;
constexpr double tol_shift = 1e-8;
constexpr double tol_strict = 1e-8;
constexpr int strict_points = 100;
constexpr double tol_monodromy = 1e-5;
constexpr double tol_full_identity = 1e-6;
constexpr double tol_antipodal = 1e-9;

int failures = 0;

void verdict(int n, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

auto sci(double x) -> std::string {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

auto cap_over(profiles::BaseKind base) -> Shape {
  return profiles::make_radial_shape(Codisc{base, 2, 1.0}, Profile(Cap{1.0}), Profile(Cap{1.0}, -1.0));
}

auto sin_bridge() -> Shape {
  const RProfile sb(profiles::SinBridge{1.0, 0.0, 1.0});
  return profiles::make_interval_shape(Interval{0.0, 1.0}, sb, sb.scaled(-1.0));
}

auto random_codisc_shape(profiles::BaseKind base, moser::Uniform& u) -> Shape {
  const Profile plus = Profile(Cap{1.0}) + Profile(BumpEven{u.in(0.1, 0.5), u.in(0.05, 0.2), u.in(-0.1, 0.1)});
  const Profile minus =
      Profile(Cap{1.0}, -1.0) + Profile(BumpEven{u.in(0.1, 0.5), u.in(0.05, 0.2), u.in(-0.1, 0.1)});
  return profiles::make_radial_shape(Codisc{base, 2, 1.0}, plus, minus);
}

auto random_interval_shape(moser::Uniform& u) -> Shape {
  const RProfile sb(profiles::SinBridge{u.in(0.5, 2.0), 0.0, 1.0});
  return profiles::make_interval_shape(
      Interval{0.0, 1.0}, sb + RProfile(profiles::Bump{u.in(0.3, 0.7), u.in(0.05, 0.2), u.in(-0.2, 0.2)}),
      sb.scaled(-u.in(0.5, 1.5)));
}

auto random_ramp(moser::Uniform& u, double end) -> Ramp {
  const double lo = u.in(0.1, 0.5);
  return Ramp{0.0, end, lo, lo + u.in(0.1, 0.4)};
}

auto cotangent_points(const cotangent::Geometry& g, moser::Uniform& u) -> std::vector<Eigen::VectorXd> {
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < strict_points; ++i) {
    const cotangent::Covector cv = cotangent::random_covector(g, u.in(0.05, 0.95), u);
    Eigen::VectorXd x(1 + cv.size());
    x[0] = u.in(-1.0, 1.0);
    x.tail(cv.size()) = cv;
    pts.push_back(x);
  }
  return pts;
}

auto sympl_points(moser::Uniform& u) -> std::vector<Eigen::VectorXd> {
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < strict_points; ++i) {
    Eigen::VectorXd x(3);
    x << u.in(-1.0, 1.0), u.in(0.01, 0.99), u.in(0.0, 2.0 * pi);
    pts.push_back(x);
  }
  return pts;
}

void oracles() {
  const Shape cap = cap_over(profiles::BaseKind::sphere);
  const double lp = cotangent::char_half_length(cap, 1).value;
  const double lm = cotangent::char_half_length(cap, -1).value;
  const double sg = cotangent::sigma_invariant(cap).value;
  const RProfile lin(profiles::Linear{1.0, 0.0});
  const Shape linear =
      profiles::make_interval_shape(Interval{0.0, 1.0}, lin, lin - RProfile(profiles::SinBridge{1.0, 0.0, 1.0}));
  const double al = sympl::char_action(linear, 1).value;
  const double as = sympl::char_action(sin_bridge(), 1).value;
  const double e1 = std::max({std::abs(lp + pi / 2), std::abs(lm + pi / 2), std::abs(sg + pi)});
  const double e2 = std::abs(al - (1.0 - std::exp(-1.0)));
  const double e3 = std::abs(as - pi * (1.0 + std::exp(-1.0)) / (1.0 + pi * pi));
  verdict(1, e1 < tol_half_length && e2 < tol_linear_action && e3 < tol_sin_action,
          "half-length/sum err " + sci(e1) + ", linear action err " + sci(e2) + ", sin-bridge action err " + sci(e3));
}

void hessians() {
  const std::vector<Profile> named{
      Profile(Cap{1.0}),
      Profile(Cap{1.0}, -1.0),
      Profile(PolyEven{{1.0, -1.0, 1.0}}),
      Profile(BumpEven{0.1, 0.3, 0.7}),
      Profile(profiles::make_twist_potential(Ramp{0.0, 2.0, 0.3, 0.7}, 1.0)),
      Profile(Cap{1.0}) + Profile(BumpEven{0.05, 0.2, -0.4}),
  };
  double worst = 0.0;
  for (const Profile& p : named) {
    for (int dim : {2, 4}) {
      const auto h = numerics::hessian_fd([&p](const Eigen::VectorXd& x) { return p.eval(x.norm(), 0); },
                                          Eigen::VectorXd::Zero(dim));
      const Eigen::MatrixXd expect = p.eval(0.0, 2) * Eigen::MatrixXd::Identity(dim, dim);
      worst = std::max(worst, (h - expect).cwiseAbs().maxCoeff());
    }
  }
  verdict(2, worst < tol_hessian, "max |H - f''(0) I| = " + sci(worst) + " over " + std::to_string(named.size()) +
                                      " profiles in dimensions 2 and 4");
}

void euclid_moser() {
  const Shape s = profiles::make_radial_shape(Ball{1.0, 1}, Profile(Cap{1.0}), Profile(Cap{1.0}, -1.0));
  const Shape t = profiles::make_radial_shape(Ball{1.0, 1}, Profile(Cap{1.0}) + Profile(BumpEven{0.3, 0.15, 0.05}),
                                              Profile(Cap{1.0}, -1.0));
  const auto seeds = euclid::default_seeds(s, moser_seeds, 1);
  numerics::OdeControl c;
  c.abs_tol = c.rel_tol = moser_rk45_tol;
  const auto run = euclid::moser_flow(s, t, seeds, c);
  numerics::OdeControl rk4;
  rk4.method = numerics::OdeMethod::rk4;
  rk4.step = rk4_coarse;
  const double coarse = euclid::moser_flow(s, t, seeds, rk4).max_pullback_residual;
  rk4.step = rk4_coarse / 2.0;
  const double fine = euclid::moser_flow(s, t, seeds, rk4).max_pullback_residual;
  const double gain = coarse / fine;
  const bool ok = run.seeds.size() >= 50 && run.max_surface_drift < tol_drift &&
                  run.max_pullback_residual < tol_defect && gain >= min_halving_gain;
  verdict(3, ok,
          std::to_string(run.seeds.size()) + " seeds: drift " + sci(run.max_surface_drift) + ", defect " +
              sci(run.max_pullback_residual) + "; RK4 step " + sci(rk4_coarse) + " -> " + sci(rk4_coarse / 2) +
              ": " + sci(coarse) + " -> " + sci(fine) + " (x" + sci(gain) + ")");
}

void closed_form_h() {
  const Profile g(PolyEven{{1.0, -3.0, 3.0, -1.0}});  // (1 - r²)³
  const double he = euclid::moser_h_euclid(g, 1.0).h(0.25).v;
  const double hc = cotangent::moser_h_cotangent(g, 1.0).h(0.25).v;
  const double ee = std::abs(he + 0.266283);
  const double ec = std::abs(hc + 0.331250);
  verdict(4, ee <= tol_h && ec <= tol_h,
          "h_ball(0.5) = " + std::to_string(he) + ", h_codisc(0.5) = " + std::to_string(hc));
}

struct TwistCase {
  Shape source;
  Shape target;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> map;
  ContactChart chart;
  bool whole = false;  // the shift is a whole multiple of the modulus
  long k_plus = 0;
  bool sympl = false;
};

std::vector<TwistCase> twists;

void twist_identities() {
  moser::Uniform u(2024);
  double worst_cot = 0.0;
  double worst_sym = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto base = i % 2 == 0 ? profiles::BaseKind::sphere : profiles::BaseKind::flat_torus;
    const Shape s = random_codisc_shape(base, u);
    // half of the angles are whole multiples of P on the sphere, so that criterion 8 sees non-zero k±
    const long m = static_cast<long>(std::floor(u.in(-3.0, 4.0)));
    const double theta0 = (i % 4 == 0) ? m * pi : u.in(-4.0, 4.0);
    const auto tw = cotangent::cogeodesic_twist(s, random_ramp(u, theta0));
    const double dp = cotangent::char_half_length(s, 1).value - cotangent::char_half_length(tw.target, 1).value;
    const double dm = cotangent::char_half_length(s, -1).value - cotangent::char_half_length(tw.target, -1).value;
    const double ds = cotangent::sigma_invariant(s).value - cotangent::sigma_invariant(tw.target).value;
    worst_cot = std::max({worst_cot, std::abs(dp - theta0), std::abs(dm + theta0), std::abs(ds)});
    twists.push_back({s, tw.target, tw.map, cotangent::geometry_of(s).chart(), i % 4 == 0, i % 4 == 0 ? m : 0, false});

    const Shape r = random_interval_shape(u);
    const double t1 = u.in(-3.0, 3.0);
    const long n = static_cast<long>(std::floor(u.in(-2.0, 3.0)));
    const double t0 = (i % 2 == 0) ? t1 + 2.0 * pi * n : u.in(-3.0, 3.0);
    const auto rt = sympl::reeb_twist(r, t1, t0);
    const double ap = sympl::char_action(r, 1).value - sympl::char_action(rt.target, 1).value;
    const double am = sympl::char_action(r, -1).value - sympl::char_action(rt.target, -1).value;
    const double dt = sympl::total_action(r).value - sympl::total_action(rt.target).value;
    worst_sym = std::max({worst_sym, std::abs(ap - (t0 - t1)), std::abs(am + (t0 - t1)), std::abs(dt)});
    twists.push_back({r, rt.target, rt.map, sympl::ContactModel{}.chart(), i % 2 == 0, i % 2 == 0 ? n : 0, true});
  }
  verdict(5, worst_cot < tol_shift && worst_sym < tol_shift,
          "20 cogeodesic twists: max shift err " + sci(worst_cot) + "; 20 Reeb twists: max shift err " +
              sci(worst_sym));
}

void strict_twists() {
  moser::Uniform u(99);
  double worst = 0.0;
  // the Dehn-Seidel and full-turn twists on the reference shapes
  const auto ds = cotangent::cogeodesic_twist(cap_over(profiles::BaseKind::sphere), Ramp{0.0, pi, 0.3, 0.7});
  const auto ft = sympl::reeb_twist(sin_bridge(), 0.0, 2.0 * pi);
  std::vector<std::pair<ContactChart, std::function<Eigen::VectorXd(const Eigen::VectorXd&)>>> all{
      {cotangent::Geometry{profiles::BaseKind::sphere, 2}.chart(), ds.map}, {sympl::ContactModel{}.chart(), ft.map}};
  for (const auto& t : twists) all.emplace_back(t.chart, t.map);
  for (const auto& [chart, map] : all) {
    std::vector<Eigen::VectorXd> pts;
    if (chart.kind == ChartKind::circle_bundle) {
      pts = sympl_points(u);
    } else {
      pts = cotangent_points(
          cotangent::Geometry{chart.kind == ChartKind::cotangent_sphere ? profiles::BaseKind::sphere
                                                                        : profiles::BaseKind::flat_torus,
                              2},
          u);
    }
    worst = std::max(worst, verify_contacto(chart, map, pts).max_strict_defect);
  }
  verdict(6, worst < tol_strict,
          std::to_string(all.size()) + " twists x " + std::to_string(strict_points) + " points: max strict defect " +
              sci(worst));
}

void monodromy() {
  moser::Uniform u(7);
  double worst = 0.0;
  for (auto base : {profiles::BaseKind::sphere, profiles::BaseKind::flat_torus}) {
    for (int i = 0; i < 10; ++i) {
      const Shape s = random_codisc_shape(base, u);
      for (auto w : {cotangent::Which::plus, cotangent::Which::minus, cotangent::Which::full}) {
        worst = std::max(worst, cotangent::equator_monodromy(s, w, 4, i + 1).max_deviation);
      }
    }
  }
  for (int i = 0; i < 10; ++i) {
    const Shape s = random_interval_shape(u);
    for (auto w : {sympl::Which::plus, sympl::Which::minus, sympl::Which::full}) {
      worst = std::max(worst, sympl::sympl_monodromy(s, w, 4, i + 1).max_deviation);
    }
  }
  const Shape cap = cap_over(profiles::BaseKind::sphere);
  const auto full = cotangent::equator_monodromy(cap, cotangent::Which::full, 10);
  double identity = 0.0;
  const cotangent::Geometry sphere{profiles::BaseKind::sphere, 2};
  for (const auto& smp : full.samples) identity = std::max(identity, cotangent::distance(sphere, smp.traced, smp.start));

  const auto ds = cotangent::cogeodesic_twist(cap, Ramp{0.0, pi, 0.3, 0.7});
  double antipodal = 0.0;
  for (int i = 0; i < 100; ++i) {
    const cotangent::Covector e = cotangent::random_covector(sphere, 1.0, u);
    Eigen::VectorXd x(7);
    x[0] = u.in(-0.5, 0.5);
    x.tail(6) = e;
    const Eigen::VectorXd y = ds.map(x);
    antipodal = std::max({antipodal, (y.tail(6) + e).norm(), std::abs(y[0] - x[0])});
  }
  verdict(7, worst < tol_monodromy && identity < tol_full_identity && antipodal < tol_antipodal,
          "random shapes: max deviation " + sci(worst) + "; cap full monodromy vs identity " + sci(identity) +
              "; Dehn-Seidel equator vs antipodal " + sci(antipodal));
}

void decisions() {
  using decide::Verdict;
  bool ok = true;
  int checked = 0;
  std::string first_bad;
  auto expect = [&](bool cond, const std::string& what) {
    ++checked;
    if (!cond && ok) first_bad = what;
    ok = ok && cond;
  };

  const auto sphere_p = cotangent::Geometry{profiles::BaseKind::sphere, 2}.besse_half_period();
  const auto torus_p = cotangent::Geometry{profiles::BaseKind::flat_torus, 2}.besse_half_period();
  const auto circle_p = sympl::ContactModel{}.besse_half_period();
  expect(sphere_p == pi && circle_p == pi && torus_p == 0.0, "declared half periods");

  for (std::size_t i = 0; i < twists.size(); ++i) {
    const auto& t = twists[i];
    const auto a = decide::compute_invariants(t.source);
    const auto b = decide::compute_invariants(t.target);
    const std::string tag = "twist pair " + std::to_string(i);
    if (t.sympl) {
      const auto total = decide::decide_sympl(a, b, decide::SymplMode::total);
      expect(total.verdict == Verdict::contactomorphic && total.k == 0, tag + " total");
      const auto per = decide::decide_sympl(a, b, decide::SymplMode::per_sheet);
      if (t.whole) {
        expect(per.k_plus == t.k_plus && per.k_minus == -t.k_plus, tag + " per-sheet k");
        expect(per.k && per.k == *per.k_plus + *per.k_minus, tag + " k = k+ + k-");
      }
    } else {
      const auto sig = decide::decide_cotangent(a, b, decide::CotangentMode::sigma_only);
      expect(sig.verdict == Verdict::contactomorphic && sig.k == 0, tag + " sigma");
      const auto half = decide::decide_cotangent(a, b, decide::CotangentMode::half_lengths);
      if (t.whole) {
        expect(half.k_plus == t.k_plus && half.k_minus == -t.k_plus, tag + " k±");
        expect(half.k && half.k == *half.k_plus + *half.k_minus && half.k == sig.k, tag + " k = k+ + k-");
      }
    }
  }

  // reference pairs
  const Shape cap = cap_over(profiles::BaseKind::sphere);
  const auto ds = cotangent::cogeodesic_twist(cap, Ramp{0.0, pi, 0.3, 0.7});
  const auto dsd = decide::decide_cotangent(decide::compute_invariants(cap), decide::compute_invariants(ds.target),
                                            decide::CotangentMode::half_lengths);
  expect(dsd.verdict == Verdict::contactomorphic_up_to && dsd.k_plus == 1 && dsd.k_minus == -1 && dsd.k == 0,
         "Dehn-Seidel pair");
  const auto ft = sympl::reeb_twist(sin_bridge(), 0.0, 2.0 * pi);
  const auto ftd = decide::decide_sympl(decide::compute_invariants(sin_bridge()), decide::compute_invariants(ft.target),
                                        decide::SymplMode::per_sheet);
  expect(ftd.verdict == Verdict::contactomorphic_up_to && ftd.k_plus == 1 && ftd.k_minus == -1 && ftd.k == 0,
         "full Reeb turn");

  // the Moser pair is decided equal; the torus twist by a non-zero angle is not
  const Shape e = profiles::make_radial_shape(Ball{1.0, 1}, Profile(Cap{1.0}), Profile(Cap{1.0}, -1.0));
  const Shape eb = profiles::make_radial_shape(
      Ball{1.0, 1}, Profile(Cap{1.0}) + Profile(BumpEven{0.3, 0.15, 0.05}), Profile(Cap{1.0}, -1.0));
  expect(decide::decide_euclid(decide::compute_invariants(e), decide::compute_invariants(eb)).verdict ==
             Verdict::contactomorphic,
         "cap + bump pair");
  const Shape torus = cap_over(profiles::BaseKind::flat_torus);
  const auto tt = cotangent::cogeodesic_twist(torus, Ramp{0.0, pi, 0.3, 0.7});
  expect(decide::decide_cotangent(decide::compute_invariants(torus), decide::compute_invariants(tt.target),
                                  decide::CotangentMode::half_lengths)
                 .verdict == Verdict::not_contactomorphic,
         "torus half-lengths");
  verdict(8, ok, std::to_string(checked) + " decision checks" + (ok ? "" : ", first failure: " + first_bad));
}

auto slurp(const fs::path& p) -> std::string {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism() {
  const std::string tool = VCD_TOOL_PATH;
  const std::string configs = VCD_CONFIG_DIR;
  const std::vector<std::pair<std::string, std::string>> runs{
      {"invariants", "euclid_cap_invariants.json"}, {"trace", "euclid_cap_trace.json"},
      {"trace", "sphere_cap_trace.json"},           {"twist", "sphere_dehn_seidel_twist.json"},
      {"twist", "circle_sin_bridge_twist.json"},    {"decide", "torus_decide.json"},
      {"moser", "euclid_cap_bump_moser.json"},      {"moser", "sphere_twisted_moser.json"},
      {"moser", "circle_bump_moser.json"}};
  bool ok = true;
  std::size_t files = 0;
  for (const auto& [cmd, cfg] : runs) {
    fs::path dirs[2];
    for (int k = 0; k < 2; ++k) {
      dirs[k] = fs::temp_directory_path() / ("vcd_acceptance_" + std::to_string(k));
      fs::remove_all(dirs[k]);
      fs::create_directories(dirs[k]);
      const std::string line = tool + " " + cmd + " --config " + configs + "/" + cfg + " --out " + dirs[k].string() +
                               " > " + (dirs[k] / "stdout.txt").string();
      ok = ok && std::system(line.c_str()) == 0;
    }
    for (const auto& e : fs::directory_iterator(dirs[0])) {
      ok = ok && slurp(e.path()) == slurp(dirs[1] / e.path().filename());
      ++files;
    }
  }
  verdict(9, ok, std::to_string(runs.size()) + " tool runs twice, " + std::to_string(files) +
                     " output files compared byte for byte");
}

}  // namespace

auto main() -> int {
  const auto start = std::chrono::steady_clock::now();
  oracles();
  hessians();
  euclid_moser();
  closed_form_h();
  twist_identities();
  strict_twists();
  monodromy();
  decisions();
  determinism();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of 9 criteria failed, %.1f s\n", failures, secs);
  return failures == 0 ? 0 : 1;
}

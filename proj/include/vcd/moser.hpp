#pragma once

// Radial Moser machinery shared by the three geometries.
//
// Every function here depends on a point of V only through a radial coordinate rho:
//   ball:       rho = |z|^2, Liouville field ½z,    X_K = K_rho · 2(-y, x)
//   cotangent:  rho = |p|^2, Liouville field p∂_p,  X_K = K_rho · 2X_ϱ (cogeodesic generator)
//   circle:     rho = a,     Liouville field ∂_a,   X_K = K_rho · e^{-a}∂_w
// With Gen the last factor, dρ(Y) = y(ρ) and λ(Gen) = l(ρ) are the only model data needed.

#include "vcd/numerics.hpp"
#include "vcd/smooth.hpp"
#include "vcd/verify.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace vcd::moser {

enum class Model { ball, cotangent, circle };

auto liouville_rate(Model m, double rho) -> double;  // dρ(Y)
auto gen_action(Model m, double rho) -> double;      // λ(Gen)

using RadialFn = std::function<Jet(double)>;

struct Range {
  double lo = 1.0;
  double hi = 0.0;
  [[nodiscard]] auto empty() const -> bool { return !(hi >= lo); }
  [[nodiscard]] auto contains(double x) const -> bool { return x >= lo && x <= hi; }
};

/// Closure of {rho : G(rho) != 0 or G'(rho) != 0} on a sample grid, widened by one cell.
auto numerical_support(const RadialFn& g, Range domain, int samples = 4000) -> Range;

struct Partials {
  double v = 0.0;
  double b = 0.0;    // ∂_b
  double rho = 0.0;  // ∂_rho
};

/// Vertical diffeomorphism (b, v) ↦ (F(b, v), v) taking the graphs of f_± to those of g_±.
/// Two stages, each the time-1 map of G_σ(ρ) κ_σ(b - m_σ(ρ)) ∂_b with m_σ the midpoint of the
/// two graphs and κ_σ a plateau cutoff. The flow of such a field is explicit up to inverting a
/// scalar monotone function.
class VerticalMap {
public:
  VerticalMap(RadialFn f_plus, RadialFn f_minus, RadialFn g_plus, RadialFn g_minus, Range domain,
              double band = -1.0);

  [[nodiscard]] auto apply(double b, double rho) const -> Partials;
  [[nodiscard]] auto band() const -> double { return eps_; }
  [[nodiscard]] auto support(int sheet) const -> Range { return sheet > 0 ? supp_plus_ : supp_minus_; }
  /// Smallest vertical clearance left between a stage band and the other sheet.
  [[nodiscard]] auto clearance() const -> double { return clearance_; }

private:
  struct Stage {
    RadialFn f, g;
    Range supp;
    double plateau = 0.0;  // half-width where the cutoff is 1
  };
  [[nodiscard]] auto stage(const Stage& s, double b, double rho) const -> Partials;

  Stage minus_, plus_;
  Range supp_minus_, supp_plus_;
  double eps_ = 0.0;
  double clearance_ = 0.0;
};

/// Boundary potential h for one sheet: value and ρ-derivative.
struct Potential {
  RadialFn h;
  Range support;     // h vanishes outside
  bool smooth = true;
  std::string warning;
};

/// H(b, ρ) equal to h_± on the sheets with ∂_b H = 0 there.
class HamiltonianCutoff {
public:
  HamiltonianCutoff(RadialFn f_plus, RadialFn f_minus, Potential h_plus, Potential h_minus, double width,
                    double merge_below = -1e300);

  [[nodiscard]] auto at(double b, double rho) const -> Partials;
  [[nodiscard]] auto width() const -> double { return width_; }

private:
  RadialFn fp_, fm_;
  Potential hp_, hm_;
  Range supp_;
  double width_;
  double merge_below_;  // below this ρ the two branches coincide and are merged exactly
};

struct Coefficients {
  double gen = 0.0;        // V = gen · Gen + liouville · Y
  double liouville = 0.0;
  double vertical = 0.0;   // db(X_t)
};

/// Moser field of α_t = (1-t) db + t dF + λ with Hamiltonian H.
class MoserField {
public:
  MoserField(Model model, VerticalMap vmap, HamiltonianCutoff ham)
      : model_(model), vmap_(std::move(vmap)), ham_(std::move(ham)) {}

  [[nodiscard]] auto coefficients(double t, double b, double rho) const -> Coefficients;
  [[nodiscard]] auto vertical_map() const -> const VerticalMap& { return vmap_; }
  [[nodiscard]] auto hamiltonian() const -> const HamiltonianCutoff& { return ham_; }
  [[nodiscard]] auto model() const -> Model { return model_; }

private:
  Model model_;
  VerticalMap vmap_;
  HamiltonianCutoff ham_;
};

// Seeds and flow runs -----------------------------------------------------------

enum class SeedKind { on_plus, on_minus, interior, collar };

struct Seed {
  Eigen::VectorXd point;
  SeedKind kind = SeedKind::interior;
};

struct SeedResult {
  Eigen::VectorXd start;
  Eigen::VectorXd image;
  SeedKind kind = SeedKind::interior;
  double pullback_residual = 0.0;
  double conformal_factor = 1.0;
  double surface_drift = 0.0;   // on-sheet seeds: largest distance from the sheet along the flow
  double displacement = 0.0;    // |image - collar model(start)| in the chart
  std::size_t steps = 0;
  std::size_t rejections = 0;
};

struct MoserRun {
  std::vector<SeedResult> seeds;
  std::vector<numerics::Trajectory> trajectories;
  double max_pullback_residual = 0.0;
  double max_surface_drift = 0.0;
  double max_collar_displacement = 0.0;
};

struct FlowProblem {
  ContactChart chart;
  numerics::Field field;                                  // Moser field on the chart
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> before;  // applied to seeds first
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> after;   // vertical map
  std::function<double(const Eigen::VectorXd&, int)> sheet_offset;  // b - f_sheet(v)
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> collar_model;  // expected map near the boundary
};

/// Integrates each seed over t in [0, 1] and checks the composed map against the contact
/// form. Finite differences replay the accepted step grid of the seed, so that the
/// differenced map is smooth in the initial point.
auto run_flow(const FlowProblem& problem, const std::vector<Seed>& seeds, const numerics::OdeControl& control,
              bool keep_trajectories = false) -> MoserRun;

/// Deterministic uniform numbers in [0, 1) from a 64-bit generator.
class Uniform {
public:
  explicit Uniform(unsigned long long seed) : state_(seed) {}
  auto operator()() -> double;
  auto in(double lo, double hi) -> double { return lo + (hi - lo) * (*this)(); }

private:
  unsigned long long state_;
};

/// Smallest f_+ - f_- over the range.
auto min_gap(const RadialFn& f_plus, const RadialFn& f_minus, Range r, int samples = 400) -> double;

}  // namespace vcd::moser

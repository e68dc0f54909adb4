#include "vcd/decide.hpp"

#include "vcd/error.hpp"
#include "vcd/euclid.hpp"
#include "vcd/sympl.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

namespace vcd::decide {
namespace {

auto fmt(double x) -> std::string {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

auto entry(const numerics::QuadResult& q) -> Entry { return {q.value, q.error}; }

auto need(const std::optional<Entry>& e, const char* name) -> const Entry& {
  if (!e) throw Error(ErrorCode::GeometryMismatch, std::string("report has no ") + name);
  return *e;
}

enum class Status { within, band, beyond };

struct Comparison {
  std::string name;
  double delta = 0.0;
  Residue res;
  Status status = Status::within;
};

auto compare(const std::string& name, const Entry& a, const Entry& b, double modulus, double tol) -> Comparison {
  Comparison c;
  c.name = name;
  c.delta = a.value - b.value;
  c.res = residue(c.delta, modulus);
  const double band = a.error + b.error;
  if (c.res.residual <= tol) {
    c.status = Status::within;
  } else if (c.res.residual > tol + band) {
    c.status = Status::beyond;
  } else {
    c.status = Status::band;
  }
  return c;
}

auto combine(const std::vector<Comparison>& cs, double modulus, const std::string& modulus_name, double tol,
             double band) -> Decision {
  Decision d;
  d.tolerance_used = tol;
  d.error_band = band;
  bool any_beyond = false;
  bool all_within = true;
  bool all_zero = true;
  for (const auto& c : cs) {
    any_beyond = any_beyond || c.status == Status::beyond;
    all_within = all_within && c.status == Status::within;
    all_zero = all_zero && c.res.k == 0;
    if (!d.rationale.empty()) d.rationale += "; ";
    d.rationale += "Δ" + c.name + " = " + fmt(c.delta);
    if (modulus > 0.0) {
      d.rationale += " = " + std::to_string(c.res.k) + "·" + modulus_name + " + " + fmt(c.delta - c.res.k * modulus);
    }
  }
  if (any_beyond) {
    d.verdict = Verdict::not_contactomorphic;
    d.rationale += " (exceeds tolerance " + fmt(tol) + " plus error " + fmt(band) + ")";
  } else if (!all_within) {
    d.verdict = Verdict::inconclusive;
    d.rationale += " (within the quadrature error band above tolerance " + fmt(tol) + ")";
  } else {
    d.verdict = all_zero ? Verdict::contactomorphic : Verdict::contactomorphic_up_to;
    d.rationale += " (within tolerance " + fmt(tol) + ")";
  }
  return d;
}

void require_same(const InvariantReport& a, const InvariantReport& b, GeometryKind g) {
  if (a.geometry != g || b.geometry != g) {
    throw Error(ErrorCode::GeometryMismatch, "reports are not both " + to_string(g));
  }
}

}  // namespace

auto residue(double delta, double modulus) -> Residue {
  if (!(modulus > 0.0)) return {0, std::abs(delta)};
  const double k = std::round(delta / modulus);
  return {static_cast<long>(k), std::abs(delta - k * modulus)};
}

auto compute_invariants(const profiles::Shape& s) -> InvariantReport {
  InvariantReport r;
  if (std::holds_alternative<profiles::Ball>(s.shadow)) {
    r.geometry = GeometryKind::euclid;
    for (int sheet : {1, -1}) {
      const double k = euclid::singularity_eigen(s, sheet).mean_curvature;
      (sheet > 0 ? r.mean_curv_plus : r.mean_curv_minus) = Entry{k, 1e-15 * std::max(1.0, std::abs(k))};
    }
  } else if (std::holds_alternative<profiles::Codisc>(s.shadow)) {
    r.geometry = GeometryKind::cotangent;
    r.base = cotangent::geometry_of(s);
    r.L_plus = entry(cotangent::char_half_length(s, 1));
    r.L_minus = entry(cotangent::char_half_length(s, -1));
    r.Sigma = Entry{r.L_plus->value + r.L_minus->value, r.L_plus->error + r.L_minus->error};
  } else {
    r.geometry = GeometryKind::sympl;
    r.A_plus = entry(sympl::char_action(s, 1));
    r.A_minus = entry(sympl::char_action(s, -1));
    r.T = Entry{r.A_plus->value + r.A_minus->value, r.A_plus->error + r.A_minus->error};
  }
  return r;
}

auto decide_euclid(const InvariantReport& a, const InvariantReport& b, double tol) -> Decision {
  require_same(a, b, GeometryKind::euclid);
  const auto cp = compare("f''_+(0)", need(a.mean_curv_plus, "mean_curv_plus"), need(b.mean_curv_plus, ""), 0.0, tol);
  const auto cm =
      compare("f''_-(0)", need(a.mean_curv_minus, "mean_curv_minus"), need(b.mean_curv_minus, ""), 0.0, tol);
  const double band = a.mean_curv_plus->error + b.mean_curv_plus->error + a.mean_curv_minus->error +
                      b.mean_curv_minus->error;
  return combine({cp, cm}, 0.0, "", tol, band);
}

auto decide_cotangent(const InvariantReport& a, const InvariantReport& b, CotangentMode mode, double tol) -> Decision {
  require_same(a, b, GeometryKind::cotangent);
  if (!a.base || !b.base || a.base->base != b.base->base || a.base->n != b.base->n) {
    throw Error(ErrorCode::GeometryMismatch, "reports are over different base manifolds");
  }
  const double p = a.base->besse_half_period();
  if (mode == CotangentMode::sigma_only) {
    const auto c = compare("Σ", need(a.Sigma, "Sigma"), need(b.Sigma, "Sigma"), p, tol);
    Decision d = combine({c}, p, "P", tol, a.Sigma->error + b.Sigma->error);
    if (d.verdict != Verdict::not_contactomorphic) d.k = c.res.k;
    return d;
  }
  const double modulus = mode == CotangentMode::half_lengths ? p : 2.0 * p;
  const std::string name = mode == CotangentMode::half_lengths ? "P" : "2P";
  const auto cp = compare("L_+", need(a.L_plus, "L_plus"), need(b.L_plus, "L_plus"), modulus, tol);
  const auto cm = compare("L_-", need(a.L_minus, "L_minus"), need(b.L_minus, "L_minus"), modulus, tol);
  const double band = a.L_plus->error + b.L_plus->error + a.L_minus->error + b.L_minus->error;
  Decision d = combine({cp, cm}, modulus, name, tol, band);
  if (d.verdict != Verdict::not_contactomorphic) {
    d.k_plus = cp.res.k;
    d.k_minus = cm.res.k;
    // ΔΣ = (k_+ + k_-) P, or twice that in the even mode
    d.k = (mode == CotangentMode::half_lengths ? 1 : 2) * (cp.res.k + cm.res.k);
  }
  return d;
}

auto decide_sympl(const InvariantReport& a, const InvariantReport& b, SymplMode mode, double tol) -> Decision {
  require_same(a, b, GeometryKind::sympl);
  const double modulus = 2.0 * sympl::ContactModel{}.besse_half_period();
  if (mode == SymplMode::total) {
    const auto c = compare("T", need(a.T, "T"), need(b.T, "T"), modulus, tol);
    Decision d = combine({c}, modulus, "2P", tol, a.T->error + b.T->error);
    if (d.verdict != Verdict::not_contactomorphic) d.k = c.res.k;
    return d;
  }
  const auto cp = compare("A_+", need(a.A_plus, "A_plus"), need(b.A_plus, "A_plus"), modulus, tol);
  const auto cm = compare("A_-", need(a.A_minus, "A_minus"), need(b.A_minus, "A_minus"), modulus, tol);
  const double band = a.A_plus->error + b.A_plus->error + a.A_minus->error + b.A_minus->error;
  Decision d = combine({cp, cm}, modulus, "2P", tol, band);
  if (d.verdict != Verdict::not_contactomorphic) {
    d.k_plus = cp.res.k;
    d.k_minus = cm.res.k;
    d.k = cp.res.k + cm.res.k;
  }
  return d;
}

auto to_string(Verdict v) -> std::string {
  switch (v) {
    case Verdict::contactomorphic: return "Contactomorphic";
    case Verdict::not_contactomorphic: return "NotContactomorphic";
    case Verdict::contactomorphic_up_to: return "ContactomorphicUpTo";
    case Verdict::inconclusive: return "Inconclusive";
  }
  return "";
}

auto to_string(GeometryKind g) -> std::string {
  switch (g) {
    case GeometryKind::euclid: return "euclid";
    case GeometryKind::cotangent: return "cotangent";
    case GeometryKind::sympl: return "sympl";
  }
  return "";
}

auto to_json(const InvariantReport& r) -> nlohmann::json {
  nlohmann::json j;
  j["geometry"] = to_string(r.geometry);
  if (r.base) {
    j["base"] = {{"kind", r.base->base == profiles::BaseKind::sphere ? "sphere" : "flat_torus"},
                 {"n", r.base->n},
                 {"besse_half_period", r.base->besse_half_period()}};
  }
  if (r.geometry == GeometryKind::sympl) {
    j["model"] = {{"kind", "circle"}, {"besse_half_period", sympl::ContactModel{}.besse_half_period()}};
  }
  nlohmann::json errs = nlohmann::json::object();
  auto put = [&](const char* name, const std::optional<Entry>& e) {
    if (!e) return;
    j[name] = e->value;
    errs[name] = e->error;
  };
  put("mean_curv_plus", r.mean_curv_plus);
  put("mean_curv_minus", r.mean_curv_minus);
  put("L_plus", r.L_plus);
  put("L_minus", r.L_minus);
  put("Sigma", r.Sigma);
  put("A_plus", r.A_plus);
  put("A_minus", r.A_minus);
  put("T", r.T);
  j["quadrature_errs"] = errs;
  return j;
}

auto to_json(const Decision& d) -> nlohmann::json {
  nlohmann::json j;
  j["verdict"] = to_string(d.verdict);
  auto opt = [](const std::optional<long>& k) { return k ? nlohmann::json(*k) : nlohmann::json(nullptr); };
  j["k"] = opt(d.k);
  j["k_plus"] = opt(d.k_plus);
  j["k_minus"] = opt(d.k_minus);
  j["rationale"] = d.rationale;
  j["tolerances"] = {{"tol", d.tolerance_used}, {"error_band", d.error_band}};
  return j;
}

}  // namespace vcd::decide

#pragma once

// Invariant reports and the comparisons that decide contactomorphism classes.

#include "vcd/cotangent.hpp"
#include "vcd/profiles.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace vcd::decide {

enum class GeometryKind { euclid, cotangent, sympl };

struct Entry {
  double value = 0.0;
  double error = 0.0;  // quadrature error estimate
};

struct InvariantReport {
  GeometryKind geometry = GeometryKind::euclid;
  std::optional<cotangent::Geometry> base;  // cotangent only
  std::optional<Entry> mean_curv_plus, mean_curv_minus;
  std::optional<Entry> L_plus, L_minus, Sigma;
  std::optional<Entry> A_plus, A_minus, T;
};

/// Geometry follows the shadow of the shape.
auto compute_invariants(const profiles::Shape& s) -> InvariantReport;

enum class Verdict { contactomorphic, not_contactomorphic, contactomorphic_up_to, inconclusive };

struct Decision {
  Verdict verdict = Verdict::inconclusive;
  std::optional<long> k, k_plus, k_minus;
  std::string rationale;
  double tolerance_used = 0.0;
  double error_band = 0.0;  // width of the inconclusive band above the tolerance
};

constexpr double default_tolerance = 1e-7;

enum class CotangentMode { sigma_only, half_lengths, half_lengths_even };
enum class SymplMode { total, per_sheet };

auto decide_euclid(const InvariantReport& a, const InvariantReport& b, double tol = default_tolerance) -> Decision;
/// P is read from the base of the reports (π for spheres, 0 for tori).
auto decide_cotangent(const InvariantReport& a, const InvariantReport& b, CotangentMode mode,
                      double tol = default_tolerance) -> Decision;
/// Modulus 2P with P = π for the circle.
auto decide_sympl(const InvariantReport& a, const InvariantReport& b, SymplMode mode,
                  double tol = default_tolerance) -> Decision;

struct Residue {
  long k = 0;
  double residual = 0.0;  // |Δ - k · modulus|
};

/// Nearest multiple of `modulus` (0 means exact comparison).
auto residue(double delta, double modulus) -> Residue;

auto to_string(Verdict v) -> std::string;
auto to_string(GeometryKind g) -> std::string;
auto to_json(const InvariantReport& r) -> nlohmann::json;
auto to_json(const Decision& d) -> nlohmann::json;

}  // namespace vcd::decide

#pragma once

// Flat C-infinity building blocks with their first two derivatives.

#include <cmath>

namespace vcd {

/// Value and first two derivatives of a scalar function at one point.
struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  friend auto operator+(Jet a, Jet b) -> Jet { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
  friend auto operator-(Jet a, Jet b) -> Jet { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
  friend auto operator*(double c, Jet a) -> Jet { return {c * a.v, c * a.d1, c * a.d2}; }
};

namespace smooth {

/// exp(-1/(1-u^2)) on (-1,1), zero outside.
inline auto bump(double u) -> Jet {
  if (!(std::abs(u) < 1.0)) return {};
  const double q = 1.0 - u * u;
  const double e = std::exp(-1.0 / q);
  const double g = -2.0 * u / (q * q);
  const double g1 = -2.0 / (q * q) - 8.0 * u * u / (q * q * q);
  return {e, e * g, e * (g * g + g1)};
}

/// Step from 0 (x <= 0) to 1 (x >= 1), flat at both ends.
inline auto step(double x) -> Jet {
  if (x <= 0.0) return {0.0, 0.0, 0.0};
  if (x >= 1.0) return {1.0, 0.0, 0.0};
  const double y = 1.0 - x;
  const double a = std::exp(-1.0 / x);
  const double c = std::exp(-1.0 / y);
  const double s = a + c;
  const double v = a / s;
  // log-derivative form keeps the expressions bounded near the ends
  const double la = 1.0 / (x * x);
  const double lc = -1.0 / (y * y);
  const double d1 = a * c * (la - lc) / (s * s);
  const double la2 = -2.0 / (x * x * x);
  const double lc2 = -2.0 / (y * y * y);
  // d/dx of a c (la - lc) / s^2
  const double num = a * c * ((la + lc) * (la - lc) + (la2 - lc2));
  const double ds = a * la + c * lc;
  const double d2 = num / (s * s) - 2.0 * a * c * (la - lc) * ds / (s * s * s);
  return {v, d1, d2};
}

/// Plateau of 1 on |u| <= inner, zero for |u| >= outer.
inline auto plateau(double u, double inner, double outer) -> Jet {
  const double w = outer - inner;
  const double au = std::abs(u);
  const Jet s = step((outer - au) / w);
  const double sg = u < 0.0 ? -1.0 : 1.0;
  return {s.v, -sg * s.d1 / w, s.d2 / (w * w)};
}

}  // namespace smooth
}  // namespace vcd

#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace quench {

inline constexpr const char* kVersion = "0.1.0";

// x^e for x > 0, evaluated in log space so that large bases and
// p << -1 exponent combinations stay in range.
inline double pow_pos(double x, double e) { return std::exp(e * std::log(x)); }

// Japanese bracket <y> = (1+y^2)^(1/2).
inline double bracket(double y) { return std::sqrt(1.0 + y * y); }

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

// Thomas algorithm. lower[0] and upper[n-1] are ignored.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs,
                       std::span<double> scratch);

// Cubic Lagrange interpolation on a uniform grid v[i] at x0 + i*h.
// Clamps to the grid range; callers must keep x inside it.
double interp_cubic_uniform(std::span<const double> v, double x0, double h, double x);

}  // namespace quench

#include "quench/numerics.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>

namespace quench {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need two samples and matching sizes");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  return fit;
}

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs,
                       std::span<double> scratch) {
  const std::size_t n = diag.size();
  if (n == 0) return;
  if (lower.size() != n || upper.size() != n || rhs.size() != n || scratch.size() < n)
    throw std::invalid_argument("solve_tridiagonal: inconsistent sizes");
  scratch[0] = upper[0] / diag[0];
  rhs[0] = rhs[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double m = 1.0 / (diag[i] - lower[i] * scratch[i - 1]);
    scratch[i] = upper[i] * m;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) * m;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i] * rhs[i + 1];
}

double interp_cubic_uniform(std::span<const double> v, double x0, double h, double x) {
  const int n = static_cast<int>(v.size());
  if (n < 4) throw std::invalid_argument("interp_cubic_uniform: need at least 4 nodes");
  double s = (x - x0) / h;
  int i = static_cast<int>(std::floor(s));
  i = std::clamp(i, 1, n - 3);
  const double t = s - i;
  const double fm = v[i - 1], f0 = v[i], f1 = v[i + 1], f2 = v[i + 2];
  // Lagrange basis on offsets {-1,0,1,2}
  const double c_m = -t * (t - 1.0) * (t - 2.0) / 6.0;
  const double c_0 = (t * t - 1.0) * (t - 2.0) / 2.0;
  const double c_1 = -t * (t + 1.0) * (t - 2.0) / 2.0;
  const double c_2 = t * (t * t - 1.0) / 6.0;
  return c_m * fm + c_0 * f0 + c_1 * f1 + c_2 * f2;
}

}  // namespace quench

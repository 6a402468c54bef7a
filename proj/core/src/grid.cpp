#include "quench/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace quench {

Grid::Grid(double half_width_, int n_points_)
    : half_width(half_width_), n_points(n_points_) {
  if (!(half_width > 0.0)) throw std::invalid_argument("Grid: half_width must be positive");
  if (n_points < 3 || n_points % 2 == 0)
    throw std::invalid_argument("Grid: n_points must be odd and >= 3");
}

GridFunction::GridFunction(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid.n_points)
    throw std::invalid_argument("GridFunction: value count does not match grid");
}

GridFunction GridFunction::zero(const Grid& grid) {
  return GridFunction(grid, std::vector<double>(grid.n_points, 0.0));
}

double GridFunction::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool GridFunction::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

bool GridFunction::all_positive() const {
  for (double v : values_)
    if (!(v > 0.0)) return false;
  return true;
}

bool GridFunction::is_even(double tol) const {
  const int c = grid_.center();
  for (int i = 1; i <= c; ++i)
    if (std::abs(values_[c + i] - values_[c - i]) > tol) return false;
  return true;
}

double weighted_sup_norm(const GridFunction& f, double n, double gauge_a) {
  if (!f.all_finite()) throw std::invalid_argument("weighted_sup_norm: non-finite values");
  double m = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    const double y = f.grid().node(i);
    const double w = pow_pos(1.0 + y * y, -0.5 * n) * std::exp(0.25 * gauge_a * y * y);
    m = std::max(m, w * std::abs(f[i]));
  }
  return m;
}

double inner_product(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("inner_product: grid mismatch");
  const int n = f.size();
  double s = 0.5 * (f[0] * g[0] + f[n - 1] * g[n - 1]);
  for (int i = 1; i < n - 1; ++i) s += f[i] * g[i];
  return s * f.grid().spacing();
}

GridFunction laplacian(const GridFunction& f) {
  const int n = f.size();
  if (n < 3) throw std::invalid_argument("laplacian: need at least 3 nodes");
  const double ih2 = 1.0 / (f.grid().spacing() * f.grid().spacing());
  std::vector<double> out(n);
  for (int i = 1; i < n - 1; ++i) out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) * ih2;
  out[0] = (f[0] - 2.0 * f[1] + f[2]) * ih2;
  out[n - 1] = (f[n - 3] - 2.0 * f[n - 2] + f[n - 1]) * ih2;
  return GridFunction(f.grid(), std::move(out));
}

GridFunction heat_convolve(const GridFunction& f, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_convolve: t must be positive");
  const Grid& g = f.grid();
  const double h = g.spacing();
  const int n = g.n_points;
  const double clip = 8.0 * std::sqrt(2.0 * t);
  const int reach = std::max(1, static_cast<int>(std::ceil(clip / h)));
  const double inv4t = 1.0 / (4.0 * t);
  std::vector<double> w(2 * reach + 1);
  double wsum = 0.0;
  for (int k = -reach; k <= reach; ++k) {
    const double d = k * h;
    w[k + reach] = std::exp(-d * d * inv4t);
    wsum += w[k + reach];
  }
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = -reach; k <= reach; ++k) {
      const int j = std::clamp(i + k, 0, n - 1);  // boundary-value extension
      acc += w[k + reach] * f[j];
    }
    out[i] = acc / wsum;
  }
  return GridFunction(g, std::move(out));
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_grid_csv(const GridFunction& f, std::ostream& out, const std::string& header_block) {
  if (!header_block.empty()) out << header_block;
  out << "y,value\n";
  for (int i = 0; i < f.size(); ++i)
    out << format_double(f.grid().node(i)) << ',' << format_double(f[i]) << '\n';
}

GridFunction read_grid_csv(std::istream& in) {
  std::string line;
  std::vector<double> ys, vs;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'y') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("read_grid_csv: malformed row");
    ys.push_back(std::stod(line.substr(0, comma)));
    vs.push_back(std::stod(line.substr(comma + 1)));
  }
  if (ys.size() < 3) throw std::runtime_error("read_grid_csv: too few rows");
  Grid g(std::abs(ys.front()), static_cast<int>(ys.size()));
  return GridFunction(g, std::move(vs));
}

}  // namespace quench

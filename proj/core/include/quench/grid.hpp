#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "quench/numerics.hpp"

namespace quench {

// Uniform symmetric grid on [-L, L] with an odd node count, so y = 0 is a node.
struct Grid {
  double half_width = 1.0;
  int n_points = 3;

  Grid() = default;
  Grid(double half_width_, int n_points_);

  double spacing() const { return 2.0 * half_width / (n_points - 1); }
  double node(int i) const { return -half_width + i * spacing(); }
  int center() const { return (n_points - 1) / 2; }

  friend bool operator==(const Grid&, const Grid&) = default;
};

class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(const Grid& grid, std::vector<double> values);

  static GridFunction zero(const Grid& grid);

  template <class F>
  static GridFunction sample(const Grid& grid, F&& f) {
    std::vector<double> v(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) v[i] = f(grid.node(i));
    return GridFunction(grid, std::move(v));
  }

  // Samples the right half and mirrors it, so the even tag holds exactly.
  template <class F>
  static GridFunction sample_even(const Grid& grid, F&& f) {
    std::vector<double> v(grid.n_points);
    const int c = grid.center();
    for (int i = c; i < grid.n_points; ++i) {
      v[i] = f(grid.node(i));
      v[2 * c - i] = v[i];
    }
    return GridFunction(grid, std::move(v));
  }

  const Grid& grid() const { return grid_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[i]; }
  double& operator[](int i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& raw() { return values_; }

  double min_value() const;
  double max_abs() const;
  bool all_finite() const;
  bool all_positive() const;
  // Exact mirror symmetry check (tol = 0 demands bit equality).
  bool is_even(double tol = 0.0) const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

// sup over nodes of <y>^(-n) e^(a y^2/4) |f|; a = 0 gives the plain weighted norm.
double weighted_sup_norm(const GridFunction& f, double n, double gauge_a = 0.0);

// Composite trapezoid approximation of the L^2 pairing.
double inner_product(const GridFunction& f, const GridFunction& g);

// Second-order central difference; endpoint rows reuse the adjacent
// interior stencil (exact on quadratics, intended for interior use).
GridFunction laplacian(const GridFunction& f);

// e^{t d^2/dx^2} by quadrature of the Gaussian kernel, clipped to
// |x-y| <= 8 sqrt(2t) and mass-normalized discretely; f is extended
// beyond the grid by its boundary values.
GridFunction heat_convolve(const GridFunction& f, double t);

void write_grid_csv(const GridFunction& f, std::ostream& out,
                    const std::string& header_block = {});
GridFunction read_grid_csv(std::istream& in);

std::string format_double(double x);

}  // namespace quench

#pragma once

#include <array>

#include "quench/model.hpp"

namespace quench {

using Mat2 = std::array<std::array<double, 2>, 2>;

// Orthogonality map G(mu, v) whose root defines the extracted (a, b).
// Components are the pairings of V_mu - v against e^{-a y^2/2} and
// (1 - a y^2) e^{-a y^2/2} (eigenvector normalizations cancel in the root).
std::array<double, 2> g_map(double a, double b, const GridFunction& v, double p);

struct GMapJacobian {
  Mat2 A1;  // parameter derivatives of V against the weights
  Mat2 A2;  // moment integrals against V_mu - v (zero on the manifold)
  Mat2 G1;  // Gaussian moment factor
  Mat2 G2;  // scalar factor; A1 = G1*G2 at b = 0
  double condition = 0.0;
  bool singular = false;

  Mat2 total() const;
};

GMapJacobian g_jacobian(double a, double b, const GridFunction& v, double p);

struct SplitConfig {
  int max_iters = 25;
  double trust_radius = 0.2;
  double damping = 0.5;
  double a_min = 1e-3;
  double a_max = 2.0 - 1e-3;
};

struct SplitResult {
  double a = 0.0;
  double b = 0.0;
  GridFunction xi;        // gauge-stripped fluctuation: v = V_{a,b} + e^{a y^2/4} xi
  double residual_0 = 0.0;  // <xi, phi_0a>
  double residual_2 = 0.0;  // <xi, phi_2a>
  int newton_iters = 0;
  bool converged = false;
};

// Newton iteration on G(mu, v) = 0 from (a_init, b_init); failure to converge
// signals that v lies outside the splitting neighborhood.
SplitResult extract_params(const GridFunction& v, double a_init, double b_init, double p,
                           const SplitConfig& cfg = {});

struct IcBoundsReport {
  double dist_mu;         // |g(v) - mu0|
  double c_mu;            // dist_mu / (delta0 b0^{3/2})
  double c_transfer_n3;   // norm ratio for n = 3
  double c_n2;            // n = 2 bound constant
  double c_nq;            // n = q bound constant (p < -1 only, else 0)
  bool has_q = false;
  SplitResult split;
};

IcBoundsReport verify_ic_bounds(const GridFunction& v, double a0, double b0, double p,
                                double b0_data, double delta0);

}  // namespace quench

#pragma once

#include <vector>

#include "quench/model.hpp"

namespace quench {

// L_alpha = -d^2/dz^2 + (alpha^2/4) z^2 - alpha/2 - 2 alpha/(1-p), optionally
// with the frozen potential V = 2 p alpha / (1 - p + beta z^2).
struct FrozenOperatorSpec {
  double alpha = 0.5;
  double p = -1.0;
  bool with_potential = false;
  double beta = 0.0;
};

GridFunction apply_l_alpha(const GridFunction& f, const FrozenOperatorSpec& spec);

struct EigenPair {
  double value;
  GridFunction vec;
};

// n in {0,1,2}: eigenvalue n*alpha - 2*alpha/(1-p) and the normalized eigenvector.
EigenPair eigenpair(int n, double alpha, double p, const Grid& grid);

// e^{-sigma L_alpha} f via the calibrated Gaussian (Mehler) kernel.
GridFunction mehler_apply(const GridFunction& f, double alpha, double p, double sigma);

// P_n = 1 - sum_{m<n} |phi_m><phi_m|, n in {1,2,3}.
GridFunction project(const GridFunction& f, int n, double alpha, double p);

enum class DecayMode { p2_plain, p1_weighted_k, p3_full };

struct DecayRow {
  int sample;
  double sigma;
  double norm;
};

struct DecayReport {
  DecayMode mode;
  double predicted_rate = 0.0;  // for p3_full: the acceptance threshold -0.05
  std::vector<double> fitted_rates;
  double worst_fitted = 0.0;  // max over samples
  bool ok = false;            // every fitted <= predicted + 0.05
  std::vector<DecayRow> rows;
};

// Propagates projected samples and regresses the log of the weighted norm
// against sigma. Samples must have finite <z>^{-n} e^{alpha z^2/4}-norms.
// k is the P1 weight order; beta is the frozen potential parameter (p3_full).
DecayReport verify_decay(DecayMode mode, double alpha, double p, double k,
                         const std::vector<GridFunction>& samples, double beta = 0.0);

struct SourceDecomposition {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  GridFunction f1;   // bare bracket term 4 p b^3 y^4 / ((1-p)^2 (1-p+b y^2)^2)
  GridFunction chi;  // V_{a,b} e^{-a y^2/4} / (1-p)
  GridFunction f;    // chi * [gamma1 + gamma2 y^2/(1-p+b y^2) + f1]
};

SourceDecomposition source_decomposition(double a, double b, double a_tau, double b_tau,
                                         double p, const Grid& grid);

// N(a,b,xi) evaluated pointwise; v = V_{a,b} + e^{a y^2/4} xi must stay positive.
GridFunction nonlinear_term(double a, double b, const GridFunction& xi, double p);

}  // namespace quench

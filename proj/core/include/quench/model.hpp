#pragma once

#include <string>

#include "quench/grid.hpp"

namespace quench {

// Nonlinearity power p < 0 and the constants derived from it.
struct ExponentConfig {
  double p;
  double q;        // min{4/(1-p), 2(2-p)/(1-p)^2, 1}
  double kappa_b;  // 4p/(p-1)^2, the coefficient in the leading b-ODE
  double kappa_v;  // 2/(1-p)

  static ExponentConfig from_p(double p);
};

double q_exponent(double p);

// Homogeneous solution (u0^{1-p} - (1-p) t)^{1/(1-p)} and its quench time.
double u_hom(double u0, double p, double t);
double quench_time_hom(double u0, double p);

// Profile parameters with the relation 2c = a + 1/2 enforced on construction.
struct ProfileParams {
  double a;
  double b;
  double c;

  static ProfileParams from_ab(double a, double b);
};

// ((1-p + b y^2)/(2c))^{1/(1-p)}
double v_profile(const ProfileParams& params, double p, double y);
// v_profile damped by the gauge factor e^{-a y^2/4}
double gauged_profile(const ProfileParams& params, double p, double y);

// Static profile ((1-p + b y^2)/(2 abar))^{1/(1-p)}, the general solution of
// abar y v_y + (2 abar/(p-1)) v + v^p = 0.
double v_ab_static(double abar, double b, double p, double y);

// Profile in the split normalization, V_{a,b} = ((1-p+b y^2)/(a+1/2))^{1/(1-p)},
// with its parameter derivatives.
double profile_V(double a, double b, double p, double y);
double profile_V_da(double a, double b, double p, double y);
double profile_V_db(double a, double b, double p, double y);

// Two-valued comparison envelope g(y, beta).
double lower_envelope(double y, double beta, double p);

// Reference curvature trajectory 1/(1/b0 - (4p/(p-1)^2) tau).
double beta_of_tau(double b0, double p, double tau);

enum class Perturbation { zero, gaussian_bump, hermite4_mode };

Perturbation perturbation_from_string(const std::string& s);
std::string to_string(Perturbation p);

struct InitialDataSpec {
  double b0 = 0.05;
  double c0 = 0.5;
  double delta0 = 0.0;
  Perturbation perturbation = Perturbation::hermite4_mode;
  double lambda0 = 1.0;

  void validate() const;  // throws on out-of-range fields
};

// Even data satisfying the weighted-norm bounds and the envelope lower bound;
// throws naming the violated invariant when the requested spec is infeasible.
GridFunction generate_initial_data(const InitialDataSpec& spec, const Grid& grid, double p);

struct NormalizedData {
  GridFunction u;
  double k0;
  double delta1;
  double beta;
};

// k0-rescaling that moves (b0, c0) data onto the one-parameter normal form.
NormalizedData normalize_initial_data(const GridFunction& u0, double b0, double c0, double p,
                                      double delta0 = 0.0);

}  // namespace quench

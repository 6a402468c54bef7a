#include "quench/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace quench {

namespace {

void require_p(double p) {
  if (!(p < 0.0)) throw std::invalid_argument("nonlinearity power must satisfy p < 0");
}

}  // namespace

double q_exponent(double p) {
  require_p(p);
  const double omp = 1.0 - p;
  return std::min({4.0 / omp, 2.0 * (2.0 - p) / (omp * omp), 1.0});
}

ExponentConfig ExponentConfig::from_p(double p) {
  require_p(p);
  ExponentConfig cfg;
  cfg.p = p;
  cfg.q = q_exponent(p);
  cfg.kappa_b = 4.0 * p / ((p - 1.0) * (p - 1.0));
  cfg.kappa_v = 2.0 / (1.0 - p);
  return cfg;
}

double quench_time_hom(double u0, double p) {
  require_p(p);
  if (!(u0 > 0.0)) throw std::invalid_argument("u_hom: u0 must be positive");
  return pow_pos(u0, 1.0 - p) / (1.0 - p);
}

double u_hom(double u0, double p, double t) {
  const double ts = quench_time_hom(u0, p);
  if (!(t < ts) || t < 0.0) throw std::invalid_argument("u_hom: need 0 <= t < t*");
  return pow_pos(pow_pos(u0, 1.0 - p) - (1.0 - p) * t, 1.0 / (1.0 - p));
}

ProfileParams ProfileParams::from_ab(double a, double b) {
  if (!(a > 0.0)) throw std::invalid_argument("ProfileParams: a must be positive");
  if (b < 0.0) throw std::invalid_argument("ProfileParams: b must be nonnegative");
  return ProfileParams{a, b, 0.5 * (a + 0.5)};
}

double v_profile(const ProfileParams& params, double p, double y) {
  require_p(p);
  return pow_pos((1.0 - p + params.b * y * y) / (2.0 * params.c), 1.0 / (1.0 - p));
}

double gauged_profile(const ProfileParams& params, double p, double y) {
  return v_profile(params, p, y) * std::exp(-0.25 * params.a * y * y);
}

double v_ab_static(double abar, double b, double p, double y) {
  require_p(p);
  if (!(abar > 0.0)) throw std::invalid_argument("v_ab_static: abar must be positive");
  return pow_pos((1.0 - p + b * y * y) / (2.0 * abar), 1.0 / (1.0 - p));
}

double profile_V(double a, double b, double p, double y) {
  return pow_pos((1.0 - p + b * y * y) / (a + 0.5), 1.0 / (1.0 - p));
}

double profile_V_da(double a, double b, double p, double y) {
  return -profile_V(a, b, p, y) / ((1.0 - p) * (a + 0.5));
}

double profile_V_db(double a, double b, double p, double y) {
  return profile_V(a, b, p, y) * y * y / ((1.0 - p) * (1.0 - p + b * y * y));
}

double lower_envelope(double y, double beta, double p) {
  require_p(p);
  if (beta < 0.0) throw std::invalid_argument("lower_envelope: beta must be nonnegative");
  const double omp = 1.0 - p;
  if (beta * y * y <= 4.0 * omp) return pow_pos(0.5 * omp, 1.0 / omp);
  return pow_pos(2.0 * omp, 1.0 / omp);
}

double beta_of_tau(double b0, double p, double tau) {
  require_p(p);
  if (!(b0 > 0.0)) throw std::invalid_argument("beta_of_tau: b0 must be positive");
  if (tau < 0.0) throw std::invalid_argument("beta_of_tau: tau must be nonnegative");
  const double kappa_b = 4.0 * p / ((p - 1.0) * (p - 1.0));
  return 1.0 / (1.0 / b0 - kappa_b * tau);
}

Perturbation perturbation_from_string(const std::string& s) {
  if (s == "zero") return Perturbation::zero;
  if (s == "gaussian-bump") return Perturbation::gaussian_bump;
  if (s == "hermite4-mode") return Perturbation::hermite4_mode;
  throw std::invalid_argument("unknown perturbation id: " + s);
}

std::string to_string(Perturbation p) {
  switch (p) {
    case Perturbation::zero: return "zero";
    case Perturbation::gaussian_bump: return "gaussian-bump";
    case Perturbation::hermite4_mode: return "hermite4-mode";
  }
  return "?";
}

void InitialDataSpec::validate() const {
  if (b0 < 0.0) throw std::invalid_argument("InitialDataSpec: b0 must be nonnegative");
  if (c0 < 0.5 || c0 > 2.0)
    throw std::invalid_argument("InitialDataSpec: c0 must lie in [1/2, 2]");
  if (delta0 < 0.0) throw std::invalid_argument("InitialDataSpec: delta0 must be nonnegative");
  if (!(lambda0 > 0.0)) throw std::invalid_argument("InitialDataSpec: lambda0 must be positive");
}

namespace {

double envelope_bound(const InitialDataSpec& spec, double p, double x) {
  const double s = 2.0 * spec.c0 + 2.0 * spec.b0 / (1.0 - p);
  return pow_pos(s, 1.0 / (p - 1.0)) * lower_envelope(std::sqrt(s) * x, spec.b0, p);
}

double exact_profile(const InitialDataSpec& spec, double p, double x) {
  return pow_pos((1.0 - p + spec.b0 * x * x) / (2.0 * spec.c0), 1.0 / (1.0 - p));
}

// Even quartic, Gram-Schmidt-ed against the two splitting directions in the
// a = 1/2 gauge: the stripped fluctuation q(x) e^{-x^2/8 - a x^2/4} must be
// L^2-orthogonal to phi_0a and phi_2a.
double hermite4_shape(double x) {
  constexpr double a = 0.5;
  constexpr double kappa = 0.5 * a + 0.125;
  // Gaussian moments M_k = int x^{2k} e^{-kappa x^2}
  const double m0 = std::sqrt(M_PI / kappa);
  const double m1 = m0 / (2.0 * kappa);
  const double m2 = 3.0 * m0 / (4.0 * kappa * kappa);
  const double m3 = 15.0 * m0 / (8.0 * kappa * kappa * kappa);
  // solve  m2 + alpha m1 + gamma m0 = 0,  m3 + alpha m2 + gamma m1 = 0
  const double det = m1 * m1 - m2 * m0;
  const double alpha = (m3 * m0 - m2 * m1) / det;
  const double gamma = (m2 * m2 - m3 * m1) / det;
  const double x2 = x * x;
  return (x2 * x2 + alpha * x2 + gamma) * std::exp(-x2 / 8.0);
}

double perturbation_shape(Perturbation id, double x) {
  switch (id) {
    case Perturbation::zero: return 0.0;
    case Perturbation::gaussian_bump: return std::exp(-0.5 * x * x);
    case Perturbation::hermite4_mode: return hermite4_shape(x);
  }
  return 0.0;
}

}  // namespace

GridFunction generate_initial_data(const InitialDataSpec& spec, const Grid& grid, double p) {
  require_p(p);
  spec.validate();

  const bool want_pert = spec.perturbation != Perturbation::zero && spec.delta0 > 0.0;
  std::vector<double> weight_orders = {2.0, 3.0};
  if (p < -1.0) weight_orders.push_back(q_exponent(p));

  double amp = 0.0;
  if (want_pert) {
    if (spec.b0 <= 0.0)
      throw std::runtime_error(
          "generate_initial_data: weighted-norm bound delta0*b0^{n/2} is zero at b0 = 0; "
          "a nonzero perturbation is infeasible");
    GridFunction shape =
        GridFunction::sample_even(grid, [&](double x) { return perturbation_shape(spec.perturbation, x); });
    amp = std::numeric_limits<double>::infinity();
    for (double n : weight_orders) {
      const double norm = weighted_sup_norm(shape, n);
      if (norm > 0.0) amp = std::min(amp, spec.delta0 * pow_pos(spec.b0, 0.5 * n) / norm);
    }
    if (!std::isfinite(amp)) amp = 0.0;
  }

  GridFunction u0 = GridFunction::sample_even(grid, [&](double x) {
    double v = exact_profile(spec, p, x);
    if (want_pert) v += amp * perturbation_shape(spec.perturbation, x);
    // clip from below so the comparison envelope holds
    return std::max(v, envelope_bound(spec, p, x));
  });

  // re-verify the weighted-norm bounds on the generated datum
  GridFunction dev = GridFunction::zero(grid);
  for (int i = 0; i < grid.n_points; ++i) dev[i] = u0[i] - exact_profile(spec, p, grid.node(i));
  for (double n : weight_orders) {
    const double allowed = spec.delta0 * pow_pos(std::max(spec.b0, 1e-300), 0.5 * n);
    const double measured = weighted_sup_norm(dev, n);
    if (measured > allowed * (1.0 + 1e-9) + 1e-15)
      throw std::runtime_error(
          "generate_initial_data: weighted-norm bound violated after clipping (n = " +
          std::to_string(n) + ")");
  }
  return u0;
}

NormalizedData normalize_initial_data(const GridFunction& u0, double b0, double c0, double p,
                                      double delta0) {
  require_p(p);
  if (c0 < 0.5 || c0 > 2.0)
    throw std::invalid_argument("normalize_initial_data: c0 must lie in [1/2, 2]");
  const double k0 = 1.0 / std::sqrt(2.0 * c0 + 2.0 * b0 / (1.0 - p));
  const double pref = pow_pos(k0, 2.0 / (p - 1.0));
  const Grid& g = u0.grid();
  std::vector<double> out(g.n_points);
  const int c = g.center();
  for (int i = c; i < g.n_points; ++i) {
    const double x = k0 * g.node(i);
    out[i] = pref * interp_cubic_uniform(u0.values(), -g.half_width, g.spacing(), x);
    out[2 * c - i] = out[i];
  }
  NormalizedData nd{GridFunction(g, std::move(out)), k0, delta0 * pref, b0 * k0 * k0};
  return nd;
}

}  // namespace quench

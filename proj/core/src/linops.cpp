#include "quench/linops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quench/numerics.hpp"

namespace quench {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
}

double potential_v(const FrozenOperatorSpec& s, double z) {
  return 2.0 * s.p * s.alpha / (1.0 - s.p + s.beta * z * z);
}

// e^{alpha z^2/4} phi_n(z): polynomial part of the first three eigenvectors.
double phi_poly(int n, double alpha, double z) {
  const double n0 = std::pow(alpha / (2.0 * M_PI), 0.25);
  switch (n) {
    case 0: return n0;
    case 1: return n0 * std::sqrt(alpha) * z;
    case 2: return std::pow(alpha / (8.0 * M_PI), 0.25) * (1.0 - alpha * z * z);
  }
  throw std::invalid_argument("eigenvectors available for n in {0,1,2} only");
}

double trapz_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

}  // namespace

GridFunction apply_l_alpha(const GridFunction& f, const FrozenOperatorSpec& spec) {
  require_alpha(spec.alpha);
  const Grid& g = f.grid();
  GridFunction lap = laplacian(f);
  GridFunction out = GridFunction::zero(g);
  const double shift = 0.5 * spec.alpha + 2.0 * spec.alpha / (1.0 - spec.p);
  for (int i = 0; i < g.n_points; ++i) {
    const double z = g.node(i);
    double v = -lap[i] + (0.25 * spec.alpha * spec.alpha * z * z - shift) * f[i];
    if (spec.with_potential) v += potential_v(spec, z) * f[i];
    out[i] = v;
  }
  return out;
}

EigenPair eigenpair(int n, double alpha, double p, const Grid& grid) {
  require_alpha(alpha);
  if (n < 0 || n > 2) throw std::invalid_argument("eigenpair: n must be 0, 1 or 2");
  GridFunction vec = GridFunction::sample(grid, [&](double z) {
    return phi_poly(n, alpha, z) * std::exp(-0.25 * alpha * z * z);
  });
  return {n * alpha - 2.0 * alpha / (1.0 - p), std::move(vec)};
}

GridFunction mehler_apply(const GridFunction& f, double alpha, double p, double sigma) {
  require_alpha(alpha);
  if (!(sigma > 0.0)) throw std::invalid_argument("mehler_apply: sigma must be positive");
  const Grid& g = f.grid();
  const int n = g.n_points;
  const double h = g.spacing();
  const double m = std::exp(-alpha * sigma);
  const double s2 = 1.0 - m * m;
  const double growth = std::exp(2.0 * alpha / (1.0 - p) * sigma);
  const double pref = std::sqrt(alpha / (2.0 * M_PI * s2)) * growth * h;

  // work on the conjugated (polynomially bounded) representative
  std::vector<double> ft(n);
  for (int i = 0; i < n; ++i) {
    const double z = g.node(i);
    ft[i] = std::exp(0.25 * alpha * z * z) * f[i];
  }

  const double width = std::sqrt(2.0 * s2 / alpha);  // kernel scale in (x - m y)
  GridFunction out = GridFunction::zero(g);
  for (int i = 0; i < n; ++i) {
    const double x = g.node(i);
    int jlo = 0, jhi = n - 1;
    if (m > 1e-3) {
      const double yc = x / m, reach = 9.0 * width / m;
      jlo = std::max(0, static_cast<int>(std::floor((yc - reach + g.half_width) / h)));
      jhi = std::min(n - 1, static_cast<int>(std::ceil((yc + reach + g.half_width) / h)));
    }
    double acc = 0.0;
    for (int j = jlo; j <= jhi; ++j) {
      const double d = x - m * g.node(j);
      acc += trapz_weight(j, n) * std::exp(-alpha * d * d / (2.0 * s2)) * ft[j];
    }
    out[i] = pref * acc * std::exp(-0.25 * alpha * x * x);
  }
  return out;
}

GridFunction project(const GridFunction& f, int n, double alpha, double p) {
  if (n < 1 || n > 3) throw std::invalid_argument("project: n must be 1, 2 or 3");
  GridFunction out = f;
  for (int mode = 0; mode < n; ++mode) {
    EigenPair ep = eigenpair(mode, alpha, p, f.grid());
    const double c = inner_product(ep.vec, f);
    for (int i = 0; i < f.size(); ++i) out[i] -= c * ep.vec[i];
  }
  return out;
}

namespace {

// Tilde-space norm sup <z>^{-n} |e^{alpha z^2/4} g| given the tilde samples.
double weighted_norm_tilde(const Grid& g, const std::vector<double>& gt, double n) {
  double mx = 0.0;
  for (int i = 0; i < g.n_points; ++i) {
    const double z = g.node(i);
    mx = std::max(mx, pow_pos(1.0 + z * z, -0.5 * n) * std::abs(gt[i]));
  }
  return mx;
}

std::vector<double> to_tilde(const GridFunction& f, double alpha) {
  std::vector<double> ft(f.size());
  for (int i = 0; i < f.size(); ++i) {
    const double z = f.grid().node(i);
    ft[i] = std::exp(0.25 * alpha * z * z) * f[i];
  }
  return ft;
}

// subtract the first n_modes eigen-components, working on tilde samples
void project_tilde(const Grid& g, std::vector<double>& gt, int n_modes, double alpha) {
  const double h = g.spacing();
  for (int mode = 0; mode < n_modes; ++mode) {
    double c = 0.0;
    for (int i = 0; i < g.n_points; ++i) {
      const double z = g.node(i);
      c += trapz_weight(i, g.n_points) * phi_poly(mode, alpha, z) *
           std::exp(-0.5 * alpha * z * z) * gt[i];
    }
    c *= h;
    for (int i = 0; i < g.n_points; ++i) gt[i] -= c * phi_poly(mode, alpha, g.node(i));
  }
}

// one Mehler step in tilde space: gt <- e^{alpha x^2/4} e^{-dsigma L} e^{-alpha y^2/4} gt
void mehler_step_tilde(const Grid& g, std::vector<double>& gt, double alpha, double p,
                       double dsigma) {
  const int n = g.n_points;
  const double h = g.spacing();
  const double m = std::exp(-alpha * dsigma);
  const double s2 = 1.0 - m * m;
  const double pref = std::sqrt(alpha / (2.0 * M_PI * s2)) *
                      std::exp(2.0 * alpha / (1.0 - p) * dsigma) * h;
  const double width = std::sqrt(2.0 * s2 / alpha);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double x = g.node(i);
    const double yc = x / m, reach = 9.0 * width / m;
    const int jlo = std::max(0, static_cast<int>(std::floor((yc - reach + g.half_width) / h)));
    const int jhi = std::min(n - 1, static_cast<int>(std::ceil((yc + reach + g.half_width) / h)));
    double acc = 0.0;
    for (int j = jlo; j <= jhi; ++j) {
      const double d = x - m * g.node(j);
      acc += trapz_weight(j, n) * std::exp(-alpha * d * d / (2.0 * s2)) * gt[j];
    }
    out[i] = pref * acc;
  }
  gt.swap(out);
}

// backward-Euler step of d/dsigma gt = -(Ltilde + V) gt with
// Ltilde = -d^2/dz^2 + alpha z d/dz - 2 alpha/(1-p).
void frozen_op_step_tilde(const Grid& g, std::vector<double>& gt,
                          const FrozenOperatorSpec& spec, double dsigma,
                          std::vector<double>& lo, std::vector<double>& di,
                          std::vector<double>& up, std::vector<double>& scratch) {
  const int n = g.n_points;
  const double h = g.spacing();
  const double ih2 = 1.0 / (h * h);
  const double c2 = 2.0 * spec.alpha / (1.0 - spec.p);
  for (int i = 0; i < n; ++i) {
    const double z = g.node(i);
    const double v = spec.with_potential ? potential_v(spec, z) : 0.0;
    if (i == 0) {  // upwinded advection, no diffusion row at the edge
      di[i] = 1.0 + dsigma * (-spec.alpha * z / h - c2 + v);
      up[i] = dsigma * spec.alpha * z / h;
      lo[i] = 0.0;
    } else if (i == n - 1) {
      di[i] = 1.0 + dsigma * (spec.alpha * z / h - c2 + v);
      lo[i] = -dsigma * spec.alpha * z / h;
      up[i] = 0.0;
    } else {
      lo[i] = dsigma * (-ih2 - spec.alpha * z / (2.0 * h));
      di[i] = 1.0 + dsigma * (2.0 * ih2 - c2 + v);
      up[i] = dsigma * (-ih2 + spec.alpha * z / (2.0 * h));
    }
  }
  solve_tridiagonal(lo, di, up, gt, scratch);
}

}  // namespace

DecayReport verify_decay(DecayMode mode, double alpha, double p, double k,
                         const std::vector<GridFunction>& samples, double beta) {
  require_alpha(alpha);
  if (samples.size() < 5)
    throw std::invalid_argument("verify_decay: need at least 5 sample functions");

  DecayReport rep;
  rep.mode = mode;
  int n_modes = 0;
  double weight_n = 0.0;
  switch (mode) {
    case DecayMode::p2_plain:
      n_modes = 2;
      weight_n = 2.0;
      rep.predicted_rate = 2.0 * alpha * p / (1.0 - p);
      break;
    case DecayMode::p1_weighted_k:
      if (k < 0.0 || k > 1.0) throw std::invalid_argument("verify_decay: k must lie in [0,1]");
      n_modes = 1;
      weight_n = k;
      rep.predicted_rate = (2.0 / (1.0 - p) - k) * alpha;
      break;
    case DecayMode::p3_full:
      n_modes = 3;
      weight_n = 3.0;
      rep.predicted_rate = -0.05;  // contract: some c0 > 0.05 exists
      break;
  }

  const double sigma_step = 0.5, sigma_max = 6.0, fit_from = 2.0;
  const int n_steps = static_cast<int>(std::round(sigma_max / sigma_step));

  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Grid& g = samples[s].grid();
    std::vector<double> gt = to_tilde(samples[s], alpha);
    project_tilde(g, gt, n_modes, alpha);

    std::vector<double> sig, lognorm;
    rep.rows.push_back({static_cast<int>(s), 0.0, weighted_norm_tilde(g, gt, weight_n)});

    if (mode == DecayMode::p3_full) {
      FrozenOperatorSpec spec{alpha, p, true, beta};
      const double dsigma = 2e-3;
      std::vector<double> lo(g.n_points), di(g.n_points), up(g.n_points), scr(g.n_points);
      double sigma = 0.0;
      for (int step = 1; step <= n_steps; ++step) {
        while (sigma < step * sigma_step - 0.5 * dsigma) {
          frozen_op_step_tilde(g, gt, spec, dsigma, lo, di, up, scr);
          project_tilde(g, gt, n_modes, alpha);
          sigma += dsigma;
        }
        const double nn = weighted_norm_tilde(g, gt, weight_n);
        rep.rows.push_back({static_cast<int>(s), sigma, nn});
        if (sigma >= fit_from - 1e-9 && nn > 0.0) {
          sig.push_back(sigma);
          lognorm.push_back(std::log(nn));
        }
      }
    } else {
      for (int step = 1; step <= n_steps; ++step) {
        mehler_step_tilde(g, gt, alpha, p, sigma_step);
        project_tilde(g, gt, n_modes, alpha);  // guard eigen-leakage from quadrature
        const double sigma = step * sigma_step;
        const double nn = weighted_norm_tilde(g, gt, weight_n);
        rep.rows.push_back({static_cast<int>(s), sigma, nn});
        if (sigma >= fit_from - 1e-9 && nn > 0.0) {
          sig.push_back(sigma);
          lognorm.push_back(std::log(nn));
        }
      }
    }
    if (sig.size() < 3) throw std::runtime_error("verify_decay: sample decayed to zero too fast");
    rep.fitted_rates.push_back(fit_line(sig, lognorm).slope);
  }

  rep.worst_fitted = *std::max_element(rep.fitted_rates.begin(), rep.fitted_rates.end());
  rep.ok = rep.worst_fitted <= rep.predicted_rate + 0.05;
  return rep;
}

SourceDecomposition source_decomposition(double a, double b, double a_tau, double b_tau,
                                         double p, const Grid& grid) {
  if (!(p < 0.0)) throw std::invalid_argument("source_decomposition: p < 0 required");
  SourceDecomposition sd;
  const double omp = 1.0 - p;
  const double gamma = a - 0.5 + 2.0 * b / omp;
  sd.gamma1 = a_tau / (a + 0.5) + gamma;
  sd.gamma2 = -b_tau - b * gamma + 4.0 * p / ((p - 1.0) * (p - 1.0)) * b * b;
  sd.f1 = GridFunction::sample_even(grid, [&](double y) {
    const double A = omp + b * y * y;
    return p / (omp * omp) * 4.0 * b * b * b * y * y * y * y / (A * A);
  });
  sd.chi = GridFunction::sample_even(grid, [&](double y) {
    return profile_V(a, b, p, y) * std::exp(-0.25 * a * y * y) / omp;
  });
  sd.f = GridFunction::zero(grid);
  for (int i = 0; i < grid.n_points; ++i) {
    const double y = grid.node(i);
    const double A = omp + b * y * y;
    sd.f[i] = sd.chi[i] * (sd.gamma1 + sd.gamma2 * y * y / A + sd.f1[i]);
  }
  return sd;
}

GridFunction nonlinear_term(double a, double b, const GridFunction& xi, double p) {
  if (!(p < 0.0)) throw std::invalid_argument("nonlinear_term: p < 0 required");
  const Grid& g = xi.grid();
  GridFunction out = GridFunction::zero(g);
  const double omp = 1.0 - p;
  for (int i = 0; i < g.n_points; ++i) {
    const double y = g.node(i);
    const double gauge = std::exp(0.25 * a * y * y);
    const double V = profile_V(a, b, p, y);
    const double v = V + gauge * xi[i];
    if (!(v > 0.0)) throw std::runtime_error("nonlinear_term: nonpositive v");
    const double A = omp + b * y * y;
    out[i] = -pow_pos(v, p) / gauge + pow_pos(V, p) / gauge + p * (a + 0.5) / A * xi[i];
  }
  return out;
}

}  // namespace quench

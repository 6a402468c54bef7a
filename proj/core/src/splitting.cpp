#include "quench/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace quench {

namespace {

// trapezoid quadrature of w(y)*f[i] over the grid
double quad(const GridFunction& f, double (*w)(double, double), double a) {
  const Grid& g = f.grid();
  const int n = g.n_points;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = w(g.node(i), a) * f[i];
    s += (i == 0 || i == n - 1) ? 0.5 * t : t;
  }
  return s * g.spacing();
}

double w0(double y, double a) { return std::exp(-0.5 * a * y * y); }
double w2(double y, double a) { return (1.0 - a * y * y) * std::exp(-0.5 * a * y * y); }
double wy2(double y, double a) { return y * y * std::exp(-0.5 * a * y * y); }
double wy2_5(double y, double a) {
  return (5.0 - a * y * y) * y * y * std::exp(-0.5 * a * y * y);
}

GridFunction deviation(double a, double b, const GridFunction& v, double p) {
  GridFunction d = GridFunction::zero(v.grid());
  for (int i = 0; i < v.size(); ++i) d[i] = profile_V(a, b, p, v.grid().node(i)) - v[i];
  return d;
}

double solve2(const Mat2& m, const std::array<double, 2>& rhs, std::array<double, 2>& out) {
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (det == 0.0) return 0.0;
  out[0] = (rhs[0] * m[1][1] - rhs[1] * m[0][1]) / det;
  out[1] = (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det;
  return det;
}

double norm_inf2(const std::array<double, 2>& v) {
  return std::max(std::abs(v[0]), std::abs(v[1]));
}

}  // namespace

std::array<double, 2> g_map(double a, double b, const GridFunction& v, double p) {
  GridFunction d = deviation(a, b, v, p);
  return {quad(d, w0, a), quad(d, w2, a)};
}

Mat2 GMapJacobian::total() const {
  Mat2 t;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) t[i][j] = A1[i][j] + A2[i][j];
  return t;
}

GMapJacobian g_jacobian(double a, double b, const GridFunction& v, double p) {
  const Grid& g = v.grid();
  GridFunction dVa = GridFunction::zero(g), dVb = GridFunction::zero(g);
  for (int i = 0; i < g.n_points; ++i) {
    const double y = g.node(i);
    dVa[i] = profile_V_da(a, b, p, y);
    dVb[i] = profile_V_db(a, b, p, y);
  }
  GMapJacobian jac;
  jac.A1 = {{{quad(dVa, w0, a), quad(dVb, w0, a)}, {quad(dVa, w2, a), quad(dVb, w2, a)}}};

  GridFunction d = deviation(a, b, v, p);
  jac.A2 = {{{-0.25 * quad(d, wy2, a), 0.0}, {-0.25 * quad(d, wy2_5, a), 0.0}}};

  // Gaussian-moment factorization of A1 at b = 0, for conditioning diagnostics
  GridFunction one = GridFunction::sample(g, [](double) { return 1.0; });
  const double q00 = quad(one, w0, a);        // m0
  const double qy2 = quad(one, wy2, a);       // m2
  const double q2 = quad(one, w2, a);         // m0 - a m2
  GridFunction y2f = GridFunction::sample(g, [](double y) { return y * y; });
  const double qy2w2 = quad(y2f, w2, a);      // m2 - a m4
  jac.G1 = {{{-qy2, q00 / (a + 0.5)}, {-qy2w2, 0.0}}};
  const double v0 = pow_pos((1.0 - p) / (a + 0.5), 1.0 / (1.0 - p));
  jac.G2 = {{{0.0, v0 / ((p - 1.0) * (1.0 - p))}, {v0 / (p - 1.0), 0.0}}};

  const Mat2 t = jac.total();
  const double det = t[0][0] * t[1][1] - t[0][1] * t[1][0];
  double mx = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) mx = std::max(mx, std::abs(t[i][j]));
  jac.singular = std::abs(det) <= 1e-14 * mx * mx;
  jac.condition = jac.singular ? std::numeric_limits<double>::infinity() : mx * mx / std::abs(det);
  return jac;
}

SplitResult extract_params(const GridFunction& v, double a_init, double b_init, double p,
                           const SplitConfig& cfg) {
  if (!(p < 0.0)) throw std::invalid_argument("extract_params: p < 0 required");
  SplitResult res;
  res.xi = GridFunction::zero(v.grid());

  double a = std::clamp(a_init, cfg.a_min, cfg.a_max);
  double b = std::max(b_init, 0.0);
  const double g_tol = 1e-14 * std::sqrt(2.0 * M_PI) * std::max(1.0, v.max_abs());

  std::array<double, 2> G = g_map(a, b, v, p);
  int it = 0;
  bool ok = false;
  for (; it < cfg.max_iters; ++it) {
    if (norm_inf2(G) <= g_tol) {
      ok = true;
      break;
    }
    GMapJacobian jac = g_jacobian(a, b, v, p);
    if (jac.singular) break;
    std::array<double, 2> step;
    solve2(jac.total(), {-G[0], -G[1]}, step);
    double sn = norm_inf2(step);
    if (!std::isfinite(sn)) break;
    if (sn > cfg.trust_radius) {
      step[0] *= cfg.trust_radius / sn;
      step[1] *= cfg.trust_radius / sn;
    }
    // damped update: halve the step while the residual grows
    double scale = 1.0;
    bool accepted = false;
    for (int back = 0; back < 8; ++back) {
      double an = std::clamp(a + scale * step[0], cfg.a_min, cfg.a_max);
      double bn = std::max(b + scale * step[1], 0.0);  // one-sided at b = 0
      std::array<double, 2> Gn = g_map(an, bn, v, p);
      if (norm_inf2(Gn) <= norm_inf2(G) || norm_inf2(Gn) <= g_tol) {
        a = an;
        b = bn;
        G = Gn;
        accepted = true;
        break;
      }
      scale *= cfg.damping;
    }
    if (!accepted) break;
  }
  if (!ok && norm_inf2(G) <= g_tol) ok = true;

  res.a = a;
  res.b = b;
  res.newton_iters = it;
  res.converged = ok && a > cfg.a_min && a < cfg.a_max;

  const Grid& gr = v.grid();
  for (int i = 0; i < gr.n_points; ++i) {
    const double y = gr.node(i);
    res.xi[i] = std::exp(-0.25 * a * y * y) * (v[i] - profile_V(a, b, p, y));
  }
  const double n0 = std::pow(a / (2.0 * M_PI), 0.25);
  const double n2 = std::pow(a / (8.0 * M_PI), 0.25);
  GridFunction phi0 = GridFunction::sample_even(gr, [&](double y) { return n0 * std::exp(-0.25 * a * y * y); });
  GridFunction phi2 = GridFunction::sample_even(gr, [&](double y) {
    return n2 * (1.0 - a * y * y) * std::exp(-0.25 * a * y * y);
  });
  res.residual_0 = inner_product(res.xi, phi0);
  res.residual_2 = inner_product(res.xi, phi2);

  const double xi_l2 = std::sqrt(inner_product(res.xi, res.xi));
  const double tol_orth = std::max(1e-12, 1e-10 * xi_l2);
  if (std::abs(res.residual_0) > tol_orth || std::abs(res.residual_2) > tol_orth)
    res.converged = false;
  return res;
}

IcBoundsReport verify_ic_bounds(const GridFunction& v, double a0, double b0, double p,
                                double b0_data, double delta0) {
  IcBoundsReport rep{};
  rep.split = extract_params(v, a0, b0, p);
  const double da = rep.split.a - a0, db = rep.split.b - b0;
  rep.dist_mu = std::sqrt(da * da + db * db);

  auto weighted_dev = [&](double aa, double bb, double n) {
    GridFunction d = GridFunction::zero(v.grid());
    for (int i = 0; i < v.size(); ++i)
      d[i] = v[i] - profile_V(aa, bb, p, v.grid().node(i));
    return weighted_sup_norm(d, n);
  };

  auto ratio = [](double lhs, double bound) {
    if (bound > 0.0) return lhs / bound;
    return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  };

  const double scale_mu = delta0 * pow_pos(std::max(b0_data, 1e-300), 1.5);
  rep.c_mu = ratio(rep.dist_mu, scale_mu);
  rep.c_transfer_n3 = ratio(weighted_dev(rep.split.a, rep.split.b, 3.0), weighted_dev(a0, b0, 3.0));
  rep.c_n2 = ratio(weighted_dev(rep.split.a, rep.split.b, 2.0),
                   delta0 * (b0_data + pow_pos(std::max(b0_data, 1e-300), 1.5)));
  if (p < -1.0) {
    rep.has_q = true;
    const double q = q_exponent(p);
    rep.c_nq = ratio(weighted_dev(rep.split.a, rep.split.b, q),
                     delta0 * (pow_pos(b0_data, 0.5 * q) + pow_pos(b0_data, 0.5 * (1.0 + q))));
  }
  return rep;
}

}  // namespace quench

#include "quench/rescaled_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quench/numerics.hpp"

namespace quench {

GridFunction to_blowup_frame(const GridFunction& u, double lambda, const Grid& y_grid,
                             double p) {
  if (!(lambda > 0.0)) throw std::invalid_argument("to_blowup_frame: lambda must be positive");
  const Grid& gx = u.grid();
  if (lambda * y_grid.half_width > gx.half_width * (1.0 + 1e-12))
    throw std::invalid_argument("to_blowup_frame: lambda * y-range exceeds the u-grid");
  const double pref = pow_pos(lambda, 2.0 / (p - 1.0));
  std::vector<double> out(y_grid.n_points);
  const int c = y_grid.center();
  for (int i = c; i < y_grid.n_points; ++i) {
    const double x = lambda * y_grid.node(i);
    out[i] = pref * interp_cubic_uniform(u.values(), -gx.half_width, gx.spacing(), x);
    out[2 * c - i] = out[i];
  }
  return GridFunction(y_grid, std::move(out));
}

GridFunction to_physical(const GridFunction& v, double lambda, const Grid& x_grid, double p) {
  if (!(lambda > 0.0)) throw std::invalid_argument("to_physical: lambda must be positive");
  const Grid& gy = v.grid();
  if (x_grid.half_width / lambda > gy.half_width * (1.0 + 1e-12))
    throw std::invalid_argument("to_physical: x-range/lambda exceeds the v-grid");
  const double pref = pow_pos(lambda, 2.0 / (1.0 - p));
  std::vector<double> out(x_grid.n_points);
  const int c = x_grid.center();
  for (int i = c; i < x_grid.n_points; ++i) {
    const double y = x_grid.node(i) / lambda;
    out[i] = pref * interp_cubic_uniform(v.values(), -gy.half_width, gy.spacing(), y);
    out[2 * c - i] = out[i];
  }
  return GridFunction(x_grid, std::move(out));
}

GaugeView gauge_transform(const GridFunction& v, double a) {
  GaugeView view;
  view.a = a;
  view.w = GridFunction::zero(v.grid());
  for (int i = 0; i < v.size(); ++i) {
    const double y = v.grid().node(i);
    view.w[i] = std::exp(-0.25 * a * y * y) * v[i];
  }
  return view;
}

GridFunction gauge_inverse(const GaugeView& view) {
  GridFunction v = GridFunction::zero(view.w.grid());
  for (int i = 0; i < v.size(); ++i) {
    const double y = view.w.grid().node(i);
    v[i] = view.w[i] / std::exp(-0.25 * view.a * y * y);
  }
  return v;
}

namespace {

// u -> (u^{1-p} - (1-p) s)^{1/(1-p)}; false on quench crossing
bool reaction_half_map(std::vector<double>& u, double s, double p) {
  const double omp = 1.0 - p;
  for (double& v : u) {
    const double w = pow_pos(v, omp) - omp * s;
    if (!(w > 0.0)) return false;
    v = pow_pos(w, 1.0 / omp);
  }
  return true;
}

struct Stepper {
  const Grid grid;
  double p;
  std::vector<double> lo, di, up, scratch;

  explicit Stepper(const Grid& g, double p_)
      : grid(g), p(p_), lo(g.center() + 1), di(g.center() + 1), up(g.center() + 1),
        scratch(g.center() + 1) {}

  // one BE solve of (I - dtau (D2 - a y D1 + 2a/(1-p))) on the half grid,
  // Dirichlet clamp to the profile value at the outer boundary
  void linear_step(std::vector<double>& v, double dtau, double a, double b) {
    const std::size_t m = v.size();
    const double h = grid.spacing();
    const double ih2 = 1.0 / (h * h);
    const double c1 = 2.0 * a / (1.0 - p);
    lo[0] = 0.0;
    di[0] = 1.0 + dtau * (2.0 * ih2 - c1);
    up[0] = -2.0 * dtau * ih2;
    for (std::size_t i = 1; i + 1 < m; ++i) {
      const double y = i * h;
      lo[i] = -dtau * (ih2 + 0.5 * a * y / h);
      di[i] = 1.0 + dtau * (2.0 * ih2 - c1);
      up[i] = -dtau * (ih2 - 0.5 * a * y / h);
    }
    lo[m - 1] = 0.0;
    di[m - 1] = 1.0;
    up[m - 1] = 0.0;
    v[m - 1] = profile_V(a, b, p, grid.half_width);
    solve_tridiagonal(lo, di, up, v, scratch);
  }

  bool advance(std::vector<double>& v, double dtau, double a, double b) {
    if (!reaction_half_map(v, 0.5 * dtau, p)) return false;
    linear_step(v, dtau, a, b);
    return reaction_half_map(v, 0.5 * dtau, p);
  }
};

std::vector<double> half_values(const GridFunction& u) {
  const int c = u.grid().center();
  std::vector<double> h(u.grid().n_points - c);
  for (int i = c; i < u.grid().n_points; ++i) h[i - c] = u[i];
  return h;
}

GridFunction mirror(const Grid& g, const std::vector<double>& half) {
  std::vector<double> v(g.n_points);
  const int c = g.center();
  for (int i = c; i < g.n_points; ++i) {
    v[i] = half[i - c];
    v[2 * c - i] = half[i - c];
  }
  return GridFunction(g, std::move(v));
}

}  // namespace

BlowupState step_rescaled(const BlowupState& state, double dtau, double p,
                          const SplitConfig& split) {
  if (!(dtau > 0.0)) throw std::invalid_argument("step_rescaled: dtau must be positive");
  if (!state.v.all_positive()) throw std::invalid_argument("step_rescaled: v must be positive");
  Stepper stepper(state.v.grid(), p);
  std::vector<double> half = half_values(state.v);
  if (!stepper.advance(half, dtau, state.a, state.b))
    throw std::runtime_error("step_rescaled: v crossed zero");
  GridFunction v_new = mirror(state.v.grid(), half);
  SplitResult sr = extract_params(v_new, state.a, state.b, p, split);
  if (!sr.converged) throw std::runtime_error("step_rescaled: splitting Newton failed");

  BlowupState next;
  next.v = std::move(v_new);
  next.a = sr.a;
  next.b = sr.b;
  const double a_mid = 0.5 * (state.a + sr.a);
  next.lambda = state.lambda * std::exp(-a_mid * dtau);
  const double lambda_mid = state.lambda * std::exp(-0.5 * a_mid * dtau);
  next.t = state.t + lambda_mid * lambda_mid * dtau;
  next.tau = state.tau + dtau;
  return next;
}

RescaledTrace evolve_rescaled(const GridFunction& v0, double p, const RescaledConfig& cfg) {
  if (!(p < 0.0)) throw std::invalid_argument("evolve_rescaled: p < 0 required");
  RescaledTrace trace;
  trace.p = p;
  trace.dtau = cfg.dtau;

  SplitResult sr = extract_params(v0, cfg.a_init, cfg.b_init, p, cfg.split);
  if (!sr.converged) {
    trace.aborted = true;
    trace.abort_reason = "left U_eps0: initial splitting failed";
    return trace;
  }

  const Grid& g = v0.grid();
  Stepper stepper(g, p);
  std::vector<double> v = half_values(v0);
  double a = sr.a, b = sr.b;
  double tau = 0.0, t = 0.0, lambda = cfg.lambda0;
  trace.samples.push_back({tau, t, lambda, a, b, sr.residual_0, sr.residual_2,
                           sr.newton_iters, mirror(g, v)});

  const long n_steps = static_cast<long>(std::llround(cfg.tau_max / cfg.dtau));
  for (long step = 1; step <= n_steps; ++step) {
    if (!stepper.advance(v, cfg.dtau, a, b)) {
      trace.aborted = true;
      trace.abort_reason = "v crossed zero at tau=" + format_double(tau);
      return trace;
    }
    GridFunction vf = mirror(g, v);
    sr = extract_params(vf, a, b, p, cfg.split);
    if (!sr.converged) {
      trace.aborted = true;
      trace.abort_reason = "left U_eps0: splitting residual above tolerance at tau=" +
                           format_double(tau + cfg.dtau);
      return trace;
    }
    const double a_mid = 0.5 * (a + sr.a);
    const double lambda_mid = lambda * std::exp(-0.5 * a_mid * cfg.dtau);
    lambda *= std::exp(-a_mid * cfg.dtau);
    t += lambda_mid * lambda_mid * cfg.dtau;
    tau = step * cfg.dtau;
    a = sr.a;
    b = sr.b;
    if (step % cfg.sample_stride == 0 || step == n_steps)
      trace.samples.push_back({tau, t, lambda, a, b, sr.residual_0, sr.residual_2,
                               sr.newton_iters, std::move(vf)});
  }
  return trace;
}

}  // namespace quench

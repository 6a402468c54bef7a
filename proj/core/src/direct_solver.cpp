#include "quench/direct_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quench/model.hpp"
#include "quench/numerics.hpp"

namespace quench {

namespace {

// u -> (u^{1-p} - (1-p) s)^{1/(1-p)} on the half array; false on quench crossing
bool reaction_half_map(std::vector<double>& u, double s, double p) {
  const double omp = 1.0 - p;
  for (double& v : u) {
    const double w = pow_pos(v, omp) - omp * s;
    if (!(w > 0.0)) return false;
    v = pow_pos(w, 1.0 / omp);
  }
  return true;
}

struct HalfWorkspace {
  std::vector<double> lo, di, up, scratch;
  void resize(std::size_t n) {
    lo.resize(n);
    di.resize(n);
    up.resize(n);
    scratch.resize(n);
  }
};

// backward-Euler diffusion on the half grid; boundary ghost from log-linear
// extrapolation of the pre-step solution (far field grows like a power law)
void diffuse_be(std::vector<double>& u, double dt, double h, HalfWorkspace& ws) {
  const std::size_t m = u.size();
  const double r = dt / (h * h);
  double ratio = 1.0;
  if (u[m - 2] > 0.0 && u[m - 1] > 0.0) ratio = std::clamp(u[m - 1] / u[m - 2], 0.5, 1.9);
  ws.resize(m);
  ws.di[0] = 1.0 + 2.0 * r;
  ws.up[0] = -2.0 * r;  // mirror node across the center
  ws.lo[0] = 0.0;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    ws.lo[i] = -r;
    ws.di[i] = 1.0 + 2.0 * r;
    ws.up[i] = -r;
  }
  ws.lo[m - 1] = -r;
  ws.di[m - 1] = 1.0 + (2.0 - ratio) * r;
  ws.up[m - 1] = 0.0;
  solve_tridiagonal(ws.lo, ws.di, ws.up, u, ws.scratch);
}

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

bool step_half(std::vector<double>& u, double dt, double p, double h, HalfWorkspace& ws) {
  if (!reaction_half_map(u, 0.5 * dt, p)) return false;
  diffuse_be(u, dt, h, ws);
  return reaction_half_map(u, 0.5 * dt, p);
}

}  // namespace

std::optional<GridFunction> step_imex(const GridFunction& u, double dt, double p) {
  if (!(p < 0.0)) throw std::invalid_argument("step_imex: p < 0 required");
  if (!(dt > 0.0)) throw std::invalid_argument("step_imex: dt must be positive");
  if (!u.all_positive()) throw std::invalid_argument("step_imex: u must be positive");
  HalfWorkspace ws;
  std::vector<double> half = half_values(u);
  if (!step_half(half, dt, p, u.grid().spacing(), ws)) return std::nullopt;
  return mirror(u.grid(), half);
}

DirectTrace run_to_quench(const GridFunction& u0, double p, const DirectConfig& cfg) {
  if (!(p < 0.0)) throw std::invalid_argument("run_to_quench: p < 0 required");
  if (!u0.all_positive()) throw std::invalid_argument("run_to_quench: u0 must be positive");

  DirectTrace trace;
  trace.p = p;
  const double omp = 1.0 - p;
  const double floor = cfg.stop_floor_rel * u0.min_value();

  HalfWorkspace ws;
  const Grid& g = u0.grid();
  std::vector<double> u = half_values(u0);
  double t = 0.0;
  long step = 0;
  trace.samples.push_back({t, u0.min_value(), u0});

  while (t < cfg.t_max) {
    const double umin = *std::min_element(u.begin(), u.end());
    if (umin < floor) {
      trace.quenched = true;
      break;
    }
    double dt = cfg.fixed_dt ? cfg.dt_max
                             : std::min(cfg.dt_max, cfg.dt_safety * pow_pos(umin, omp) / omp);
    std::vector<double> next = u;
    bool ok = step_half(next, dt, p, g.spacing(), ws);
    while (!ok && dt > 1e-14) {
      dt *= 0.5;
      next = u;
      ok = step_half(next, dt, p, g.spacing(), ws);
    }
    if (!ok) {
      trace.quenched = true;  // quench-crossing at the dt floor
      break;
    }
    for (double v : next)
      if (!std::isfinite(v)) {
        trace.aborted = true;
        trace.abort_reason = "implicit solve produced non-finite values at t=" + format_double(t);
        return trace;
      }
    u.swap(next);
    t += dt;
    ++step;
    const double m = *std::min_element(u.begin(), u.end());
    if (step % cfg.sample_stride == 0 || m < floor)
      trace.samples.push_back({t, m, mirror(g, u)});
  }
  if (trace.samples.back().t != t) {
    const double m = *std::min_element(u.begin(), u.end());
    trace.samples.push_back({t, m, mirror(g, u)});
  }
  return trace;
}

GridFunction duhamel_iterate(const GridFunction& u0, double p, double t, int n_sub, int n_iter) {
  if (!(p < 0.0)) throw std::invalid_argument("duhamel_iterate: p < 0 required");
  if (!(t > 0.0) || n_sub < 1) throw std::invalid_argument("duhamel_iterate: bad t or n_sub");
  const double kappa0 = u0.min_value();
  if (!(kappa0 > 0.0)) throw std::invalid_argument("duhamel_iterate: u0 must be positive");
  const double horizon = pow_pos(kappa0, 1.0 - p) / (1.0 - p);
  if (t > 0.1 * horizon + 1e-15)
    throw std::invalid_argument("duhamel_iterate: t outside the short-time regime");

  const Grid& g = u0.grid();
  const double dt = t / n_sub;
  auto power_p = [&](const GridFunction& f) {
    GridFunction out = GridFunction::zero(g);
    for (int i = 0; i < g.n_points; ++i) out[i] = pow_pos(f[i], p);
    return out;
  };

  std::vector<GridFunction> free_mid;  // e^{s_m Lap} u0 at midpoints
  std::vector<double> s_mid(n_sub);
  for (int m = 0; m < n_sub; ++m) {
    s_mid[m] = (m + 0.5) * dt;
    free_mid.push_back(heat_convolve(u0, s_mid[m]));
  }
  const GridFunction free_end = heat_convolve(u0, t);
  if (n_iter == 0) return free_end;

  std::vector<GridFunction> U = free_mid;  // zeroth iterate at the midpoints
  GridFunction u_end = free_end;
  double prev_res = -1.0;
  for (int it = 0; it < n_iter; ++it) {
    // refresh midpoint values from the integral formula
    std::vector<GridFunction> Unew;
    Unew.reserve(n_sub);
    for (int m = 0; m < n_sub; ++m) {
      GridFunction acc = free_mid[m];
      for (int j = 0; j < m; ++j) {
        GridFunction kern = heat_convolve(power_p(U[j]), s_mid[m] - s_mid[j]);
        for (int i = 0; i < g.n_points; ++i) acc[i] -= dt * kern[i];
      }
      // trailing half cell [m dt, s_m]
      GridFunction kern = heat_convolve(power_p(U[m]), 0.25 * dt);
      for (int i = 0; i < g.n_points; ++i) acc[i] -= 0.5 * dt * kern[i];
      Unew.push_back(std::move(acc));
    }
    U.swap(Unew);

    GridFunction u_next = free_end;
    for (int j = 0; j < n_sub; ++j) {
      GridFunction kern = heat_convolve(power_p(U[j]), t - s_mid[j]);
      for (int i = 0; i < g.n_points; ++i) u_next[i] -= dt * kern[i];
    }
    double res = 0.0;
    for (int i = 0; i < g.n_points; ++i) res = std::max(res, std::abs(u_next[i] - u_end[i]));
    if (prev_res >= 0.0 && res > prev_res && res > 1e-13)
      throw std::runtime_error("duhamel_iterate: residual not decreasing (outside contraction)");
    prev_res = res;
    u_end = std::move(u_next);
  }
  return u_end;
}

QuenchEstimate estimate_quench_time(const DirectTrace& trace, double p) {
  QuenchEstimate est;
  if (trace.samples.size() < 3) return est;
  const double u0min = trace.samples.front().u_min;
  std::vector<double> ts, ys;
  for (const auto& s : trace.samples) {
    if (s.u_min <= 0.2 * u0min) {
      ts.push_back(s.t);
      ys.push_back(pow_pos(s.u_min, 1.0 - p));
    }
  }
  if (ts.size() < 2) return est;  // trace truncated before decay
  LinearFit fit = fit_line(ts, ys);
  if (!(fit.slope < 0.0)) return est;
  est.t_star = -fit.intercept / fit.slope;
  double scale = 0.0;
  for (double y : ys) scale += std::abs(y);
  scale /= static_cast<double>(ys.size());
  est.residual_rel = fit.residual_rms / std::max(scale, 1e-300);
  est.low_confidence = ts.size() < 5 || est.residual_rel > 1e-3;
  return est;
}

}  // namespace quench

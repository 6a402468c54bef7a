#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quench/grid.hpp"

namespace quench {

struct DirectConfig {
  double dt_safety = 0.1;      // fraction of the local homogeneous quench horizon
  double dt_max = 1e-3;
  double stop_floor_rel = 1e-3;  // stop once u_min < rel * initial min
  double t_max = 10.0;
  int sample_stride = 10;
  bool fixed_dt = false;  // step with dt_max unconditionally (paired-run tests)
};

struct DirectSample {
  double t;
  double u_min;
  GridFunction u;
};

struct DirectTrace {
  std::vector<DirectSample> samples;
  double p = -1.0;
  bool quenched = false;  // reached the stop floor (or the dt floor at crossing)
  bool aborted = false;
  std::string abort_reason;
};

// One Strang step: exact reaction half-map, backward-Euler diffusion, reaction
// half-map. Returns nullopt when the reaction map would cross the quench
// (caller shrinks dt or stops). Preserves evenness exactly and positivity.
std::optional<GridFunction> step_imex(const GridFunction& u, double dt, double p);

DirectTrace run_to_quench(const GridFunction& u0, double p, const DirectConfig& cfg = {});

// Fixed-point iteration on the integral form of the equation, midpoint rule in
// time with n_sub subintervals; n_iter = 0 returns the free propagation.
GridFunction duhamel_iterate(const GridFunction& u0, double p, double t, int n_sub, int n_iter);

struct QuenchEstimate {
  double t_star = 0.0;
  double residual_rel = 0.0;
  bool low_confidence = true;
};

// Root of the least-squares line through (t, u_min^{1-p}) over the trailing
// window u_min <= 0.2 * initial min.
QuenchEstimate estimate_quench_time(const DirectTrace& trace, double p);

}  // namespace quench

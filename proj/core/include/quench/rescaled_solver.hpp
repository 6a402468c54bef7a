#pragma once

#include <string>
#include <vector>

#include "quench/splitting.hpp"

namespace quench {

// One instant of the self-similar frame.
struct BlowupState {
  GridFunction v;
  double lambda = 1.0;
  double a = 0.5;
  double b = 0.0;
  double tau = 0.0;
  double t = 0.0;
};

struct GaugeView {
  GridFunction w;  // e^{-a y^2/4} v
  double a = 0.0;
};

// v(y) = lambda^{2/(p-1)} u(lambda y), resampled by cubic interpolation.
GridFunction to_blowup_frame(const GridFunction& u, double lambda, const Grid& y_grid, double p);
// Inverse map u(x) = lambda^{2/(1-p)} v(x/lambda).
GridFunction to_physical(const GridFunction& v, double lambda, const Grid& x_grid, double p);

GaugeView gauge_transform(const GridFunction& v, double a);
GridFunction gauge_inverse(const GaugeView& view);

struct RescaledConfig {
  double dtau = 1e-3;
  double tau_max = 30.0;
  int sample_stride = 20;
  double lambda0 = 1.0;
  double a_init = 0.5;
  double b_init = 0.0;
  SplitConfig split;
};

struct RescaledSample {
  double tau, t, lambda, a, b;
  double residual_0, residual_2;
  int newton_iters;
  GridFunction v;
};

struct RescaledTrace {
  std::vector<RescaledSample> samples;
  double p = -1.0;
  double dtau = 1e-3;
  bool aborted = false;
  std::string abort_reason;
};

// One IMEX step with the current a, followed by re-extraction of (a, b) and
// the (lambda, t, tau) bookkeeping. Throws on splitting failure.
BlowupState step_rescaled(const BlowupState& state, double dtau, double p,
                          const SplitConfig& split = {});

// Runs to tau_max or an invariant breach, re-extracting (a, b) every step.
RescaledTrace evolve_rescaled(const GridFunction& v0, double p, const RescaledConfig& cfg);

}  // namespace quench

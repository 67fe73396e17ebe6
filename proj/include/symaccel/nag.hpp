#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "symaccel/integrators.hpp"
#include "symaccel/objectives.hpp"
#include "symaccel/types.hpp"

namespace symaccel {

struct NagState {
  Vector x;
  Vector y;
  std::int64_t k = 1;   // momentum counter
  double s = 1.0;       // step size
};

struct NagBacktrackParams {
  double shrink = 0.5;
  double c = 1e-4;  // Armijo sufficient-decrease constant
  double growth = 1.1;
  int max_shrinks = 30;
  double s_max = 1e3;
};

// x_new = y - s grad f(y); y_new = x_new + (k-1)/(k+2) (x_new - x_old).
// One gradient evaluation.
inline NagState nag_step(const Objective& obj, const NagState& s) {
  if (s.s <= 0.0) throw std::invalid_argument("nag_step: step size must be positive");
  const Vector x_new = s.y - s.s * obj.gradient(s.y);
  const double mom = static_cast<double>(s.k - 1) / static_cast<double>(s.k + 2);
  return {x_new, x_new + mom * (x_new - s.x), s.k + 1, s.s};
}

// Function-value restart: if the step increased the objective, drop the
// accumulated momentum (k back to 1, y collapsed onto x).
inline NagState nag_step_restarted(const Objective& obj, const NagState& s, double f_prev) {
  NagState r = nag_step(obj, s);
  if (obj.value(r.x) > f_prev) {
    r.k = 1;
    r.y = r.x;
  }
  return r;
}

// Armijo line search at y, then a NAG step with the accepted step size.
// Each rejected trial is charged to grad_evals; the accepted step size,
// grown by bt.growth, warm-starts the next iteration.
inline NagState nag_backtracking_step(const Objective& obj, const NagState& st,
                                      const NagBacktrackParams& bt, int& grad_evals,
                                      double* accepted_s = nullptr) {
  if (bt.shrink <= 0.0 || bt.shrink >= 1.0)
    throw std::invalid_argument("nag_backtracking_step: shrink must be in (0,1)");
  if (bt.c <= 0.0 || bt.c >= 1.0)
    throw std::invalid_argument("nag_backtracking_step: c must be in (0,1)");
  const Vector g = obj.gradient(st.y);
  ++grad_evals;
  const double fy = obj.value(st.y);
  const double g2 = g.squaredNorm();
  double s = st.s;
  int shrinks = 0;
  while (obj.value(st.y - s * g) > fy - bt.c * s * g2) {
    if (shrinks++ >= bt.max_shrinks)
      throw StepFailure("nag_backtracking_step: max_shrinks exhausted");
    s *= bt.shrink;
    ++grad_evals;  // rejected trial
  }
  if (accepted_s) *accepted_s = s;
  const Vector x_new = st.y - s * g;
  const double mom = static_cast<double>(st.k - 1) / static_cast<double>(st.k + 2);
  NagState r{x_new, x_new + mom * (x_new - st.x), st.k + 1, std::min(s * bt.growth, bt.s_max)};
  return r;
}

struct NagConfig {
  double initial_s = 1.0;
  bool restart = true;
  std::optional<NagBacktrackParams> backtracking;
};

// NAG run loop under the shared stopping rule; emits the same trace shape as
// the ODE integrators (t accumulates accepted step sizes).
inline Trace run_nag(const Objective& obj, const Vector& initial_x, const NagConfig& config,
                     const StoppingRule& stop = {}) {
  if (stop.max_iters < 1) throw std::invalid_argument("run_nag: max_iters must be >= 1");
  NagState st{initial_x, initial_x, 1, config.initial_s};
  Trace trace;
  std::int64_t grad_cum = 0;
  double t = 1.0;
  double f_prev = obj.value(initial_x);
  const auto start = std::chrono::steady_clock::now();

  for (std::int64_t iter = 1; iter <= stop.max_iters; ++iter) {
    double accepted = st.s;
    try {
      if (config.backtracking) {
        int evals = 0;
        NagState next = nag_backtracking_step(obj, st, *config.backtracking, evals, &accepted);
        grad_cum += evals;
        if (config.restart && obj.value(next.x) > f_prev) {
          next.k = 1;
          next.y = next.x;
        }
        st = std::move(next);
      } else {
        st = config.restart ? nag_step_restarted(obj, st, f_prev) : nag_step(obj, st);
        grad_cum += 1;
      }
    } catch (const StepFailure&) {
      trace.stop_reason = "step_failure";
      trace.final_f = f_prev;
      return trace;
    }
    t += accepted;

    const double f = obj.value(st.x);
    const double gnorm = obj.gradient(st.x).norm();
    const auto elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    trace.records.push_back({iter, t, f, gnorm, grad_cum, elapsed, accepted});
    trace.final_f = f;

    if (!std::isfinite(f) || !st.x.allFinite()) {
      trace.stop_reason = "diverged";
      return trace;
    }
    if (stop.rel_tol > 0.0 &&
        std::abs(f - f_prev) / std::max(std::abs(f_prev), 1e-12) < stop.rel_tol) {
      trace.stop_reason = "rel_tol";
      return trace;
    }
    f_prev = f;
  }
  trace.stop_reason = "max_iters";
  return trace;
}

}  // namespace symaccel

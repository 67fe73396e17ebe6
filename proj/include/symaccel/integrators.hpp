#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symaccel/flows.hpp"
#include "symaccel/model.hpp"
#include "symaccel/objectives.hpp"

namespace symaccel {

enum class Scheme { SI1, SI2, SI2Literal, SI4, RK2, RK4 };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::SI1: return "si1";
    case Scheme::SI2: return "si2";
    case Scheme::SI2Literal: return "si2-literal";
    case Scheme::SI4: return "si4";
    case Scheme::RK2: return "rk2";
    case Scheme::RK4: return "rk4";
  }
  return "?";
}

inline bool is_symplectic_scheme(Scheme s) {
  return s == Scheme::SI1 || s == Scheme::SI2 || s == Scheme::SI2Literal || s == Scheme::SI4;
}

struct Backtracking {
  double shrink = 0.5;
  double growth = 1.1;
  double tol_increase = 1e-3;
  int max_shrinks = 30;
};

struct StepperConfig {
  Scheme scheme = Scheme::SI2;
  double tau = 0.01;
  std::optional<Backtracking> backtracking;
};

struct StepReport {
  PhaseState state;
  int grad_evals;
  double accepted_tau;
};

struct StepFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lie-Trotter step: K then V, both over [t, t+tau]. One gradient evaluation.
inline StepReport step_si1(const SigmaModel& m, const Objective& obj, const PhaseState& s,
                           double tau) {
  const double t = s.t;
  PhaseState r = flow_K(m, s, t, t + tau);
  r = flow_V(m, obj, r, t, t + tau);
  r.t = t + tau;
  return {std::move(r), 1, tau};
}

// Strang step with the sub-flows tiling [t, t+tau] exactly: K over the first
// half interval, V over the full interval, K over the second half. One
// gradient evaluation.
inline StepReport step_si2(const SigmaModel& m, const Objective& obj, const PhaseState& s,
                           double tau) {
  const double t = s.t;
  const double th = t + 0.5 * tau;
  PhaseState r = flow_K(m, s, t, th);
  r = flow_V(m, obj, r, t, t + tau);
  r = flow_K(m, r, th, t + tau);
  r.t = t + tau;
  return {std::move(r), 1, tau};
}

// Literal reading of the published composition: after the leading half
// time-shift, every sub-flow formula integrates from the shifted clock
// t+tau/2. The two K factors then cover [t+tau/2, t+tau] twice and V covers
// [t+tau/2, t+3tau/2]. Kept as a comparison variant.
inline StepReport step_si2_literal(const SigmaModel& m, const Objective& obj, const PhaseState& s,
                                   double tau) {
  const double t = s.t;
  const double tm = t + 0.5 * tau;
  PhaseState r = flow_K(m, s, tm, tm + 0.5 * tau);
  r = flow_V(m, obj, r, tm, tm + tau);
  r = flow_K(m, r, tm, tm + 0.5 * tau);
  r.t = t + tau;
  return {std::move(r), 1, tau};
}

struct TripleJump {
  // w1 = 1 / (2 - 2^(1/3)), w0 = 1 - 2 w1 (negative)
  static double w1() { return 1.0 / (2.0 - std::cbrt(2.0)); }
  static double w0() { return 1.0 - 2.0 * w1(); }
};

// Fourth-order triple-jump composition of step_si2 with sub-steps
// w1*tau, w0*tau, w1*tau. Three gradient evaluations.
inline StepReport step_si4(const SigmaModel& m, const Objective& obj, const PhaseState& s,
                           double tau) {
  const double w1 = TripleJump::w1();
  const double w0 = TripleJump::w0();
  const double t1 = s.t + w1 * tau;
  const double t2 = t1 + w0 * tau;
  if (t1 <= 0.0 || t2 <= 0.0) {
    throw std::range_error("step_si4: intermediate time would be nonpositive");
  }
  StepReport a = step_si2(m, obj, s, w1 * tau);
  StepReport b = step_si2(m, obj, a.state, w0 * tau);
  StepReport c = step_si2(m, obj, b.state, w1 * tau);
  c.state.t = s.t + tau;  // absorb rounding in the substep sum
  return {std::move(c.state), 3, tau};
}

// ---- Runge-Kutta baselines on the first-order (x, v) system ----

struct XVState {
  Vector x;
  Vector v;
  double t;
};

struct XVStepReport {
  XVState state;
  int grad_evals;
  double accepted_tau;
};

// Generic fixed-step RK helpers over a flat state vector; deriv(t, y) must be
// safe to call at any stage time.
using DerivFn = std::function<Vector(double, const Vector&)>;

inline Vector rk2_step(const DerivFn& deriv, double t, const Vector& y, double tau) {
  const Vector k1 = deriv(t, y);
  const Vector k2 = deriv(t + 0.5 * tau, y + 0.5 * tau * k1);
  return y + tau * k2;
}

inline Vector rk4_step(const DerivFn& deriv, double t, const Vector& y, double tau) {
  const Vector k1 = deriv(t, y);
  const Vector k2 = deriv(t + 0.5 * tau, y + 0.5 * tau * k1);
  const Vector k3 = deriv(t + 0.5 * tau, y + 0.5 * tau * k2);
  const Vector k4 = deriv(t + tau, y + tau * k3);
  return y + tau / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace detail {

inline DerivFn zhang_first_order_rhs(const SigmaModel& m, const Objective& obj) {
  return [&m, &obj](double t, const Vector& y) {
    const Eigen::Index d = y.size() / 2;
    Vector dy(y.size());
    dy.head(d) = y.tail(d);
    dy.tail(d) = zhang_acceleration(m, obj, y.head(d), y.tail(d), t);
    return dy;
  };
}

inline Vector pack_xv(const XVState& s) {
  Vector y(2 * s.x.size());
  y << s.x, s.v;
  return y;
}

inline XVState unpack_xv(const Vector& y, double t) {
  const Eigen::Index d = y.size() / 2;
  return {y.head(d), y.tail(d), t};
}

}  // namespace detail

// Midpoint RK2; two gradient evaluations per step.
inline XVStepReport step_rk2(const SigmaModel& m, const Objective& obj, const XVState& s,
                             double tau) {
  require_positive_time(s.t);
  const Vector y = rk2_step(detail::zhang_first_order_rhs(m, obj), s.t, detail::pack_xv(s), tau);
  return {detail::unpack_xv(y, s.t + tau), 2, tau};
}

// Classical RK4; four gradient evaluations per step.
inline XVStepReport step_rk4(const SigmaModel& m, const Objective& obj, const XVState& s,
                             double tau) {
  require_positive_time(s.t);
  const Vector y = rk4_step(detail::zhang_first_order_rhs(m, obj), s.t, detail::pack_xv(s), tau);
  return {detail::unpack_xv(y, s.t + tau), 4, tau};
}

inline int grad_evals_per_step(Scheme s) {
  switch (s) {
    case Scheme::SI1:
    case Scheme::SI2:
    case Scheme::SI2Literal: return 1;
    case Scheme::SI4: return 3;
    case Scheme::RK2: return 2;
    case Scheme::RK4: return 4;
  }
  return 0;
}

// Dispatch for the symplectic family.
inline StepReport step_symplectic(Scheme scheme, const SigmaModel& m, const Objective& obj,
                                  const PhaseState& s, double tau) {
  switch (scheme) {
    case Scheme::SI1: return step_si1(m, obj, s, tau);
    case Scheme::SI2: return step_si2(m, obj, s, tau);
    case Scheme::SI2Literal: return step_si2_literal(m, obj, s, tau);
    case Scheme::SI4: return step_si4(m, obj, s, tau);
    default: throw std::invalid_argument("step_symplectic: not a symplectic scheme");
  }
}

// Backtracking wrapper around a symplectic step: retry with shrunken tau while
// the objective increases beyond tolerance. The tolerance is relative to both
// the pre-step value and f_best (the best value seen so far in the run, if
// supplied); the latter keeps repeated tolerated increases from ratcheting the
// objective away from its floor. Rejected attempts are charged to the
// gradient-evaluation count. On acceptance the working tau grows again, capped
// at tau_max.
inline StepReport step_with_backtracking(const SigmaModel& m, const Objective& obj,
                                         const PhaseState& s, Scheme scheme, double& tau,
                                         const Backtracking& bt, double tau_max,
                                         double f_best = std::numeric_limits<double>::infinity()) {
  const double f0 = obj.value(s.q);
  const double f_ref = std::min(f0, f_best);
  int grad_evals = 0;
  for (int attempt = 0; attempt <= bt.max_shrinks; ++attempt) {
    StepReport r = step_symplectic(scheme, m, obj, s, tau);
    grad_evals += r.grad_evals;
    const double f1 = obj.value(r.state.q);
    if (!(f1 > f_ref * (1.0 + bt.tol_increase) + 1e-12)) {
      const double accepted = tau;
      tau = std::min(tau * bt.growth, tau_max);
      return {std::move(r.state), grad_evals, accepted};
    }
    tau *= bt.shrink;
  }
  throw StepFailure("step_with_backtracking: max_shrinks exhausted");
}

// ---- Run loop ----

struct TraceRecord {
  std::int64_t iter;
  double t;
  double f;
  double grad_norm;
  std::int64_t grad_evals_cum;
  std::int64_t elapsed_ns;
  double accepted_tau;
};

struct Trace {
  std::vector<TraceRecord> records;
  std::vector<PhaseState> states;  // reduced coordinates at each record
  std::string stop_reason;         // "rel_tol", "max_iters", "diverged", "step_failure"
  double final_f = 0.0;
};

struct StoppingRule {
  double rel_tol = 1e-6;  // <= 0 disables the relative-change test
  std::int64_t max_iters = 100000;
};

struct DivergenceError : std::runtime_error {
  DivergenceError(std::string msg, Trace partial)
      : std::runtime_error(std::move(msg)), trace(std::move(partial)) {}
  Trace trace;
};

// Iterates the configured stepper from x(t0) = initial_x, v(t0) = 0 and
// records one row per accepted step. Gradient-norm diagnostics are not
// charged to the gradient-evaluation count.
inline Trace run(const SigmaModel& m, const Objective& obj, const Vector& initial_x,
                 const StepperConfig& config, const StoppingRule& stop = {}) {
  if (stop.max_iters < 1) throw std::invalid_argument("run: max_iters must be >= 1");
  if (config.tau <= 0.0) throw std::invalid_argument("run: tau must be positive");

  const bool rk = !is_symplectic_scheme(config.scheme);
  PhaseState ps{initial_x, Vector::Zero(initial_x.size()), m.t0};
  XVState xv{initial_x, Vector::Zero(initial_x.size()), m.t0};
  double tau = config.tau;
  const double tau_max = 0.1;

  Trace trace;
  std::int64_t grad_cum = 0;
  double f_prev = obj.value(initial_x);
  double f_best = f_prev;
  const auto start = std::chrono::steady_clock::now();

  for (std::int64_t iter = 1; iter <= stop.max_iters; ++iter) {
    double accepted_tau = tau;
    try {
      if (rk) {
        XVStepReport r = config.scheme == Scheme::RK2 ? step_rk2(m, obj, xv, tau)
                                                      : step_rk4(m, obj, xv, tau);
        grad_cum += r.grad_evals;
        accepted_tau = r.accepted_tau;
        xv = std::move(r.state);
        ps = {xv.x, momentum_from_velocity(m, xv.t, xv.v), xv.t};
      } else {
        StepReport r = config.backtracking
                           ? step_with_backtracking(m, obj, ps, config.scheme, tau,
                                                    *config.backtracking, tau_max, f_best)
                           : step_symplectic(config.scheme, m, obj, ps, tau);
        grad_cum += r.grad_evals;
        accepted_tau = r.accepted_tau;
        ps = std::move(r.state);
      }
    } catch (const StepFailure&) {
      trace.stop_reason = "step_failure";
      trace.final_f = f_prev;
      return trace;
    }

    const Vector& x = rk ? xv.x : ps.q;
    const double f = obj.value(x);
    const double gnorm = obj.gradient(x).norm();
    const auto elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    trace.records.push_back({iter, ps.t, f, gnorm, grad_cum, elapsed, accepted_tau});
    trace.states.push_back(ps);
    trace.final_f = f;
    f_best = std::min(f_best, f);

    if (!std::isfinite(f) || !x.allFinite()) {
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

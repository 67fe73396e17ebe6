#pragma once

#include <stdexcept>

#include "symaccel/model.hpp"
#include "symaccel/objectives.hpp"
#include "symaccel/types.hpp"

namespace symaccel {

// Reduced-phase-space state. q is identified with x; v = -p/p0(t).
struct PhaseState {
  Vector q;
  Vector p;
  double t;
};

namespace detail {
inline void require_interval(double from_t, double to_t) {
  if (from_t <= 0.0) throw std::domain_error("flow: from_t must be positive");
  if (to_t <= 0.0) throw std::domain_error("flow: to_t must be positive");
}
}  // namespace detail

// Exact flow of the kinetic split term over [from_t, to_t]: a shear in q,
//   q += p / (2 sigma p0(1)) * [to_t^(-2 sigma) - from_t^(-2 sigma)],
// with p unchanged. Time bookkeeping is owned by the stepper; state.t is
// passed through untouched.
inline PhaseState flow_K(const SigmaModel& m, const PhaseState& s, double from_t, double to_t) {
  detail::require_interval(from_t, to_t);
  const double factor = (pow_checked(to_t, -2.0 * m.sigma) - pow_checked(from_t, -2.0 * m.sigma)) /
                        (2.0 * m.sigma * m.p0_at_1);
  return {s.q + factor * s.p, s.p, s.t};
}

// Exact flow of the potential split term over [from_t, to_t]: a momentum kick
//   p += sigma p0(1) / 3 * [to_t^(3 sigma) - from_t^(3 sigma)] * grad f(q),
// with q unchanged. Exactly one gradient evaluation.
inline PhaseState flow_V(const SigmaModel& m, const Objective& obj, const PhaseState& s,
                         double from_t, double to_t) {
  detail::require_interval(from_t, to_t);
  const double factor = m.sigma * m.p0_at_1 / 3.0 *
                        (pow_checked(to_t, 3.0 * m.sigma) - pow_checked(from_t, 3.0 * m.sigma));
  return {s.q, s.p + factor * obj.gradient(s.q), s.t};
}

inline PhaseState time_shift(const PhaseState& s, double dt) {
  if (s.t + dt <= 0.0) throw std::domain_error("time_shift: resulting time must be positive");
  return {s.q, s.p, s.t + dt};
}

inline Vector velocity_from_momentum(const SigmaModel& m, const PhaseState& s) {
  return -s.p / p0_of_t(m, s.t);
}

inline Vector momentum_from_velocity(const SigmaModel& m, double t, const Vector& v) {
  return -p0_of_t(m, t) * v;
}

}  // namespace symaccel

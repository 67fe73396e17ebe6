#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "symaccel/objectives.hpp"
#include "symaccel/types.hpp"

namespace symaccel {

// t^k with a log-domain evaluation for large exponents. Overflow is an
// explicit range error instead of a silent infinity.
inline double pow_checked(double t, double k) {
  double r;
  if (std::abs(k) > 64.0) {
    r = std::exp(k * std::log(t));
  } else {
    r = std::pow(t, k);
  }
  if (!std::isfinite(r)) {
    throw std::range_error("pow_checked: overflow at t=" + std::to_string(t) +
                           ", k=" + std::to_string(k));
  }
  return r;
}

// Parameter bundle for the accelerated-gradient flow
//   x'' + Gamma1(t) x' + Gamma0(t) grad f(x) = 0
// with Gamma0 = sigma^2 t^(sigma-2) and Gamma1 = (2 sigma + 1)/t.
struct SigmaModel {
  double sigma;
  double p0_at_1 = 1.0;  // gauge; (q,p) trajectories are invariant under rescale
  double t0 = 1.0;

  SigmaModel(double sigma_, double p0_at_1_ = 1.0, double t0_ = 1.0)
      : sigma(sigma_), p0_at_1(p0_at_1_), t0(t0_) {
    if (sigma < 2.0) throw std::invalid_argument("SigmaModel: sigma must be >= 2");
    if (p0_at_1 == 0.0) throw std::invalid_argument("SigmaModel: p0_at_1 must be nonzero");
    if (t0 <= 0.0) throw std::invalid_argument("SigmaModel: t0 must be positive");
  }
};

// Extended state carrying the redundant pair (q0, p0); diagnostics only.
struct ExtendedDiagnosticState {
  double q0;
  Vector q;
  double p0;
  Vector p;
  double t;
};

inline void require_positive_time(double t) {
  if (t <= 0.0) throw std::domain_error("time must be positive, got " + std::to_string(t));
}

inline double gamma0(const SigmaModel& m, double t) {
  require_positive_time(t);
  return m.sigma * m.sigma * pow_checked(t, m.sigma - 2.0);
}

inline double gamma1(const SigmaModel& m, double t) {
  require_positive_time(t);
  return (2.0 * m.sigma + 1.0) / t;
}

// Closed-form momentum conjugate to the redundant coordinate,
// p0(t) = p0(1) t^(2 sigma + 1); solves p0' = Gamma1 p0.
inline double p0_of_t(const SigmaModel& m, double t) {
  require_positive_time(t);
  return m.p0_at_1 * pow_checked(t, 2.0 * m.sigma + 1.0);
}

// Kinetic piece of the reduced split Hamiltonian.
inline double hamiltonian_K(const SigmaModel& m, const Vector& p, double t) {
  require_positive_time(t);
  return -p.squaredNorm() / (2.0 * p0_of_t(m, t));
}

// Potential piece of the reduced split Hamiltonian.
inline double hamiltonian_V(const SigmaModel& m, const Objective& obj, const Vector& q, double t) {
  require_positive_time(t);
  return -p0_of_t(m, t) * gamma0(m, t) * obj.value(q);
}

// Full symplectized Hamiltonian on the extended phase space; diagnostic only.
inline double hamiltonian_ZZ(const SigmaModel& m, const Objective& obj,
                             const ExtendedDiagnosticState& s) {
  require_positive_time(s.t);
  if (s.p0 == 0.0) throw std::domain_error("hamiltonian_ZZ: p0 must be nonzero");
  const double kinetic = 0.5 * (s.p / s.p0).squaredNorm();
  return -s.p0 * (kinetic + gamma0(m, s.t) * obj.value(s.q) + gamma1(m, s.t) * s.q0);
}

// Contact Hamiltonian in (q0, q, gamma, t); satisfies
// hamiltonian_ZZ = -p0 * contact_K under gamma = -p/p0.
inline double contact_K(const SigmaModel& m, const Objective& obj, double q0, const Vector& q,
                        const Vector& gamma, double t) {
  require_positive_time(t);
  return 0.5 * gamma.squaredNorm() + gamma0(m, t) * obj.value(q) + gamma1(m, t) * q0;
}

// Right-hand side x'' = -Gamma1 v - Gamma0 grad f(x); used by the RK
// baselines and the ODE-residual diagnostic.
inline Vector zhang_acceleration(const SigmaModel& m, const Objective& obj, const Vector& x,
                                 const Vector& v, double t) {
  require_positive_time(t);
  return -gamma1(m, t) * v - gamma0(m, t) * obj.gradient(x);
}

}  // namespace symaccel

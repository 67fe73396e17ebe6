#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "symaccel/integrators.hpp"
#include "symaccel/model.hpp"
#include "symaccel/objectives.hpp"

namespace symaccel {

struct LineFit {
  double slope;
  double intercept;
  double r2;
};

inline LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 points");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ymean = sy / n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double pred = slope * xs[i] + intercept;
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - ymean) * (ys[i] - ymean);
  }
  const double r2 = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  return {slope, intercept, r2};
}

struct OrderStudyReport {
  std::vector<double> taus;
  std::vector<double> errors;
  double fitted_order;
};

// Fixed-horizon global-error study: run the scheme at each tau from t0 to
// horizon, compare x(T) against an RK4 reference at min(taus)/64, and fit the
// slope of log error vs log tau.
inline OrderStudyReport order_study(Scheme scheme, const SigmaModel& m, const Objective& obj,
                                    const Vector& x0, double horizon,
                                    const std::vector<double>& taus) {
  if (taus.size() < 2) throw std::invalid_argument("order_study: need >= 2 step sizes");
  for (std::size_t i = 1; i < taus.size(); ++i) {
    if (taus[i] >= taus[i - 1])
      throw std::invalid_argument("order_study: taus must be strictly decreasing");
  }
  const double span = horizon - m.t0;
  if (span <= 0.0) throw std::invalid_argument("order_study: horizon must exceed t0");

  const auto run_fixed = [&](Scheme s, double tau) {
    const auto n = static_cast<std::int64_t>(std::llround(span / tau));
    if (std::abs(n * tau - span) > 1e-9 * span)
      throw std::invalid_argument("order_study: horizon/tau must be an integer");
    Trace tr = run(m, obj, x0, {s, tau, std::nullopt}, {0.0, n});
    if (tr.stop_reason != "max_iters")
      throw std::runtime_error("order_study: run diverged (scheme " +
                               std::string(scheme_name(s)) + ", tau " + std::to_string(tau) + ")");
    return tr.states.back().q;
  };

  const double tau_ref = taus.back() / 64.0;
  const Vector x_ref = run_fixed(Scheme::RK4, tau_ref);

  OrderStudyReport report;
  report.taus = taus;
  std::vector<double> log_tau, log_err;
  for (const double tau : taus) {
    const double err = (run_fixed(scheme, tau) - x_ref).norm();
    report.errors.push_back(err);
    log_tau.push_back(std::log(tau));
    log_err.push_back(std::log(err));
  }
  report.fitted_order = fit_line(log_tau, log_err).slope;
  return report;
}

// |det J - 1| of the one-step (q,p) map, with J built by central differences.
// Only the symplectic family makes this claim; RK schemes are rejected.
inline double symplecticity_check(Scheme scheme, const SigmaModel& m, const Objective& obj,
                                  const PhaseState& state, double tau, double fd_h) {
  if (!is_symplectic_scheme(scheme))
    throw std::invalid_argument("symplecticity_check: symplecticity is only claimed for SI schemes");
  const Eigen::Index d = state.q.size();
  Matrix jac(2 * d, 2 * d);
  const auto column = [&](Eigen::Index j) {
    PhaseState plus = state, minus = state;
    if (j < d) {
      plus.q[j] += fd_h;
      minus.q[j] -= fd_h;
    } else {
      plus.p[j - d] += fd_h;
      minus.p[j - d] -= fd_h;
    }
    const PhaseState sp = step_symplectic(scheme, m, obj, plus, tau).state;
    const PhaseState sm = step_symplectic(scheme, m, obj, minus, tau).state;
    Vector col(2 * d);
    col.head(d) = (sp.q - sm.q) / (2.0 * fd_h);
    col.tail(d) = (sp.p - sm.p) / (2.0 * fd_h);
    return col;
  };
  for (Eigen::Index j = 0; j < 2 * d; ++j) jac.col(j) = column(j);
  return std::abs(jac.determinant() - 1.0);
}

struct RateFitReport {
  double t_lo;
  double t_hi;
  double slope;
  double intercept;
  double r2;
};

// Least-squares slope of log|f - f*| vs log t over trace records inside the
// window, skipping records where the error is down in rounding noise.
inline RateFitReport rate_fit(const Trace& trace, double f_star, double t_lo, double t_hi) {
  const double floor_err =
      1e2 * std::numeric_limits<double>::epsilon() * std::abs(f_star) + 1e-14;
  std::vector<double> log_t, log_err;
  for (const auto& rec : trace.records) {
    if (rec.t < t_lo || rec.t > t_hi) continue;
    const double err = std::abs(rec.f - f_star);
    if (err <= floor_err) continue;
    log_t.push_back(std::log(rec.t));
    log_err.push_back(std::log(err));
  }
  if (log_t.size() < 2) throw std::runtime_error("rate_fit: window holds no usable records");
  const LineFit fit = fit_line(log_t, log_err);
  return {t_lo, t_hi, fit.slope, fit.intercept, fit.r2};
}

// Max norm of the second-order ODE residual x'' + Gamma1 x' + Gamma0 grad f
// reconstructed from a uniform-step trace (v from momentum, x'' by central
// differences of v).
inline double ode_residual(const Trace& trace, const SigmaModel& m, const Objective& obj) {
  if (trace.states.size() < 3)
    throw std::runtime_error("ode_residual: trace needs at least 3 records");
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < trace.states.size(); ++i) {
    const PhaseState& prev = trace.states[i - 1];
    const PhaseState& cur = trace.states[i];
    const PhaseState& next = trace.states[i + 1];
    const Vector v_prev = -prev.p / p0_of_t(m, prev.t);
    const Vector v_cur = -cur.p / p0_of_t(m, cur.t);
    const Vector v_next = -next.p / p0_of_t(m, next.t);
    const Vector accel = (v_next - v_prev) / (next.t - prev.t);
    const Vector residual =
        accel + gamma1(m, cur.t) * v_cur + gamma0(m, cur.t) * obj.gradient(cur.q);
    worst = std::max(worst, residual.norm());
  }
  return worst;
}

}  // namespace symaccel

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "symaccel/integrators.hpp"
#include "symaccel/objectives.hpp"

using namespace symaccel;

namespace {
const QuadraticObjective kQuad1(Vector::Zero(1), Vector::Ones(1));
const QuadraticObjective kQuad2(Vector::Zero(2), Vector::Ones(2));
}  // namespace

TEST_CASE("step_si1") {
  const SigmaModel m(2.0);
  SUBCASE("stationary point: only t advances") {
    PhaseState s{Vector::Zero(1), Vector::Zero(1), 1.0};
    const StepReport r = step_si1(m, kQuad1, s, 0.25);
    CHECK(r.state.q[0] == 0.0);
    CHECK(r.state.p[0] == 0.0);
    CHECK(r.state.t == doctest::Approx(1.25));
    CHECK(r.grad_evals == 1);
  }
  SUBCASE("hand example") {
    PhaseState s{Vector::Ones(1), Vector::Zero(1), 1.0};
    const StepReport r = step_si1(m, kQuad1, s, 0.5);
    CHECK(r.state.q[0] == doctest::Approx(1.0));  // flow_K is identity at p = 0
    CHECK(r.state.p[0] == doctest::Approx(6.9270833333333333));
    CHECK(r.state.t == doctest::Approx(1.5));
  }
}

TEST_CASE("step_si2 hand example") {
  const SigmaModel m(2.0);
  PhaseState s{Vector::Ones(1), Vector::Zero(1), 1.0};
  const StepReport r = step_si2(m, kQuad1, s, 0.5);
  CHECK(r.state.p[0] == doctest::Approx(6.9270833333333333));
  // q' = 1 + 6.9270833 * (1/4)(1.5^-4 - 1.25^-4)
  CHECK(r.state.q[0] == doctest::Approx(0.632745).epsilon(1e-5));
  CHECK(r.state.t == doctest::Approx(1.5));
  CHECK(r.grad_evals == 1);
}

TEST_CASE("step_si2 continuity at tiny tau") {
  const SigmaModel m(2.0);
  PhaseState s{Vector::Ones(1), Vector::Constant(1, 0.5), 1.0};
  const StepReport r = step_si2(m, kQuad1, s, 1e-8);
  const double delta = std::hypot(r.state.q[0] - s.q[0], r.state.p[0] - s.p[0]);
  CHECK(delta <= 1e-6);
}

TEST_CASE("step_si4 coefficients and guards") {
  CHECK(std::abs(2.0 * TripleJump::w1() + TripleJump::w0() - 1.0) <= 1e-15);
  CHECK(TripleJump::w0() < 0.0);

  const SigmaModel m(2.0);
  PhaseState s{Vector::Ones(1), Vector::Zero(1), 1.0};
  const StepReport r = step_si4(m, kQuad1, s, 0.1);
  CHECK(r.grad_evals == 3);
  CHECK(r.state.t == doctest::Approx(1.1));
  // huge tau drives the backward substep through t = 0
  CHECK_THROWS_AS(step_si4(m, kQuad1, s, 10.0), std::range_error);
}

TEST_CASE("generic RK4 tableau on y' = y") {
  const DerivFn deriv = [](double, const Vector& y) { return y; };
  const Vector y1 = rk4_step(deriv, 0.0, Vector::Ones(1), 0.1);
  CHECK(y1[0] == doctest::Approx(1.10517083).epsilon(1e-8));
  CHECK(std::abs(y1[0] - std::exp(0.1)) < 1e-7);
}

TEST_CASE("RK steps at equilibrium") {
  const SigmaModel m(2.0);
  XVState s{Vector::Zero(2), Vector::Zero(2), 1.0};
  const XVStepReport r2 = step_rk2(m, kQuad2, s, 0.1);
  CHECK(r2.state.x.norm() == 0.0);
  CHECK(r2.state.v.norm() == 0.0);
  CHECK(r2.state.t == doctest::Approx(1.1));
  CHECK(r2.grad_evals == 2);
  const XVStepReport r4 = step_rk4(m, kQuad2, s, 0.1);
  CHECK(r4.state.x.norm() == 0.0);
  CHECK(r4.grad_evals == 4);
}

TEST_CASE("run stops immediately when started at the optimum") {
  const SigmaModel m(2.0);
  const Trace tr = run(m, kQuad1, Vector::Zero(1), {Scheme::SI2, 0.01, std::nullopt});
  CHECK(tr.records.size() == 1);
  CHECK(tr.stop_reason == "rel_tol");
}

TEST_CASE("gradient evaluation accounting") {
  const SigmaModel m(2.0);
  SUBCASE("SI2: one per iteration") {
    const Trace tr = run(m, kQuad1, Vector::Ones(1), {Scheme::SI2, 0.01, std::nullopt});
    REQUIRE(!tr.records.empty());
    CHECK(tr.records.back().grad_evals_cum ==
          static_cast<std::int64_t>(tr.records.size()));
  }
  SUBCASE("RK4: four per iteration") {
    const Trace tr = run(m, kQuad1, Vector::Ones(1), {Scheme::RK4, 0.01, std::nullopt});
    REQUIRE(!tr.records.empty());
    CHECK(tr.records.back().grad_evals_cum ==
          4 * static_cast<std::int64_t>(tr.records.size()));
  }
}

TEST_CASE("trace time equals t0 plus accumulated tau") {
  const SigmaModel m(2.0);
  const Trace tr = run(m, kQuad2, Vector::Ones(2), {Scheme::SI1, 0.01, std::nullopt}, {1e-6, 500});
  double t = m.t0;
  for (const auto& rec : tr.records) {
    t += rec.accepted_tau;
    CHECK(std::abs(rec.t - t) <= 1e-12 * t);
  }
}

TEST_CASE("backtracking accepts a clean step unchanged") {
  const SigmaModel m(2.0);
  PhaseState s{Vector::Ones(1), Vector::Zero(1), 1.0};
  double tau = 0.01;
  const StepReport bt = step_with_backtracking(m, kQuad1, s, Scheme::SI2, tau, {}, 0.5);
  const StepReport plain = step_si2(m, kQuad1, s, 0.01);
  CHECK(bt.accepted_tau == doctest::Approx(0.01));
  CHECK(bt.state.q[0] == doctest::Approx(plain.state.q[0]).epsilon(1e-15));
  CHECK(bt.grad_evals == 1);
}

TEST_CASE("backtracking shrinks a pathological step") {
  const SigmaModel m(2.0);
  PhaseState s{Vector::Ones(1), Vector::Zero(1), 1.0};
  double tau = 1e6;
  const StepReport r = step_with_backtracking(m, kQuad1, s, Scheme::SI2, tau, {}, 1e6);
  CHECK(r.accepted_tau < 1e6);
  CHECK(kQuad1.value(r.state.q) <=
        kQuad1.value(s.q) * (1.0 + Backtracking{}.tol_increase) + 1e-12);
  CHECK(r.grad_evals > 1);  // rejected attempts are charged
}

TEST_CASE("backtracking exhaustion is an error") {
  const SigmaModel m(2.0);
  PhaseState s{Vector::Ones(1), Vector::Zero(1), 1.0};
  double tau = 1e6;
  Backtracking bt;
  bt.max_shrinks = 0;
  CHECK_THROWS_AS(step_with_backtracking(m, kQuad1, s, Scheme::SI2, tau, bt, 1e6), StepFailure);
}

TEST_CASE("gauge invariance of the q-trajectory") {
  for (const double c : {-3.0, 0.5}) {
    const SigmaModel base(2.0, 1.0);
    const SigmaModel scaled(2.0, c);
    PhaseState a{Vector::Ones(2), Vector::Zero(2), 1.0};
    PhaseState b{Vector::Ones(2), Vector::Zero(2), 1.0};
    for (int i = 0; i < 100; ++i) {
      a = step_si2(base, kQuad2, a, 0.01).state;
      b = step_si2(scaled, kQuad2, b, 0.01).state;
      CHECK((a.q - b.q).norm() <= 1e-10 * std::max(1.0, a.q.norm()));
      // momenta differ exactly by the gauge factor
      CHECK((a.p * c - b.p).norm() <= 1e-10 * std::max(1.0, b.p.norm()));
    }
  }
}

TEST_CASE("si2 and si2-literal differ but stay close") {
  const SigmaModel m(2.0);
  PhaseState a{Vector::Ones(1), Vector::Zero(1), 1.0};
  PhaseState b = a;
  for (int i = 0; i < 50; ++i) {
    a = step_si2(m, kQuad1, a, 0.01).state;
    b = step_si2_literal(m, kQuad1, b, 0.01).state;
  }
  CHECK(a.q[0] != b.q[0]);
  CHECK(std::abs(a.q[0] - b.q[0]) < 0.05);
}

TEST_CASE("runs are deterministic within one build") {
  const SigmaModel m(2.0);
  const Trace a = run(m, kQuad2, Vector::Ones(2), {Scheme::SI2, 0.01, std::nullopt}, {1e-6, 200});
  const Trace b = run(m, kQuad2, Vector::Ones(2), {Scheme::SI2, 0.01, std::nullopt}, {1e-6, 200});
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].f == b.records[i].f);
    CHECK(a.records[i].grad_norm == b.records[i].grad_norm);
    CHECK(a.records[i].t == b.records[i].t);
  }
}

TEST_CASE("divergence is reported with the trace so far") {
  // sigma far above the stability range at this step size
  const SigmaModel m(16.0);
  const Trace tr = run(m, kQuad1, Vector::Ones(1), {Scheme::RK2, 0.1, std::nullopt}, {1e-12, 5000});
  if (tr.stop_reason == "diverged") {
    CHECK(!tr.records.empty());
    CHECK(!std::isfinite(tr.records.back().f));
  }
}

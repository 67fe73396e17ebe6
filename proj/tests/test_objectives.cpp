#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "symaccel/data.hpp"
#include "symaccel/objectives.hpp"

using namespace symaccel;

TEST_CASE("logistic value at w = 0 is ln 2") {
  Matrix X(3, 2);
  X << 1, 2, -3, 4, 0.5, -0.5;
  Vector y(3);
  y << 1, 0, 1;
  CHECK(LogisticRegressionObjective(X, y, 0.0).value(Vector::Zero(2)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // regularizer vanishes at 0
  CHECK(LogisticRegressionObjective(X, y, 1e-8).value(Vector::Zero(2)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("logistic value is stable at extreme margins") {
  Matrix X(1, 1);
  X << 10.0;
  Vector y(1);
  y << 1.0;
  const LogisticRegressionObjective obj(X, y, 0.0);
  const double v = obj.value(Vector::Constant(1, 10.0));  // -log(sigmoid(100))
  CHECK(v == doctest::Approx(3.7200759760208356e-44).epsilon(1e-9));
  // |w.x| ~ 700 neither overflows nor hits log(0)
  CHECK(std::isfinite(obj.value(Vector::Constant(1, 70.0))));
  CHECK(std::isfinite(obj.value(Vector::Constant(1, -70.0))));
  CHECK(obj.value(Vector::Constant(1, -70.0)) == doctest::Approx(700.0).epsilon(1e-12));
}

TEST_CASE("logistic gradient hand example") {
  Matrix X(2, 2);
  X << 1, 0, 0, 1;
  Vector y(2);
  y << 1, 0;
  const LogisticRegressionObjective obj(X, y, 0.0);
  const Vector g = obj.gradient(Vector::Zero(2));
  CHECK(g[0] == doctest::Approx(-0.25));
  CHECK(g[1] == doctest::Approx(0.25));
}

TEST_CASE("logistic gradient matches finite differences") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const Dataset ds = synth_logistic(9, 20, 5, 2.0);
  const LogisticRegressionObjective obj(ds.features, ds.labels, 1e-8);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector w = Vector::NullaryExpr(5, [&](Eigen::Index) { return unif(rng); });
    CHECK(grad_check(obj, w, 1e-6).max_rel_err <= 1e-6);
  }
}

TEST_CASE("logistic dimension mismatch") {
  Matrix X(2, 3);
  X.setOnes();
  Vector y(2);
  y << 1, 0;
  const LogisticRegressionObjective obj(X, y, 0.0);
  CHECK_THROWS_AS(obj.value(Vector::Zero(2)), std::invalid_argument);
  CHECK_THROWS_AS(obj.gradient(Vector::Zero(4)), std::invalid_argument);
  CHECK_THROWS_AS(LogisticRegressionObjective(X, Vector::Constant(2, 0.5), 0.0),
                  std::invalid_argument);
}

TEST_CASE("logistic convexity along random segments") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  const Dataset ds = synth_logistic(3, 30, 4, 1.0);
  const LogisticRegressionObjective obj(ds.features, ds.labels, 1e-8);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector a = Vector::NullaryExpr(4, [&](Eigen::Index) { return unif(rng); });
    const Vector b = Vector::NullaryExpr(4, [&](Eigen::Index) { return unif(rng); });
    CHECK(obj.value((a + b) / 2.0) <= (obj.value(a) + obj.value(b)) / 2.0 + 1e-12);
  }
}

TEST_CASE("quadratic objective") {
  Vector center(2), scales(2);
  center << 1, -1;
  scales << 1, 4;
  const QuadraticObjective obj(center, scales);

  SUBCASE("hand values") {
    const QuadraticObjective simple(Vector::Zero(1), Vector::Ones(1));
    CHECK(simple.value(Vector::Constant(1, 2.0)) == doctest::Approx(2.0));
    CHECK(simple.gradient(Vector::Constant(1, 2.0))[0] == doctest::Approx(2.0));
    CHECK(obj.value(Vector::Zero(2)) == doctest::Approx(2.5));
    CHECK(obj.gradient(Vector::Zero(2))[0] == doctest::Approx(-1.0));
    CHECK(obj.gradient(Vector::Zero(2))[1] == doctest::Approx(4.0));
  }
  SUBCASE("minimizer") {
    CHECK(obj.value(center) == doctest::Approx(0.0));
    CHECK(obj.gradient(center).norm() == doctest::Approx(0.0));
    REQUIRE(obj.known_optimum().has_value());
    CHECK(obj.known_optimum()->f == 0.0);
  }
  SUBCASE("nonpositive scale rejected") {
    Vector bad(2);
    bad << 1, 0;
    CHECK_THROWS_AS(QuadraticObjective(center, bad), std::invalid_argument);
  }
}

TEST_CASE("grad_check on quadratics is limited only by rounding") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  Vector center(3), scales(3);
  center << 0.5, -1.0, 2.0;
  scales << 1.0, 2.0, 0.5;
  const QuadraticObjective obj(center, scales);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector x = Vector::NullaryExpr(3, [&](Eigen::Index) { return unif(rng); });
    CHECK(grad_check(obj, x, 1e-5).max_rel_err <= 1e-9);
  }
}

TEST_CASE("grad_check on a constant objective") {
  struct Constant final : Objective {
    Eigen::Index dim() const override { return 2; }
    double value(const Vector&) const override { return 3.0; }
    Vector gradient(const Vector&) const override { return Vector::Zero(2); }
  } obj;
  const auto report = grad_check(obj, Vector::Ones(2), 1e-5);
  CHECK(report.max_rel_err == 0.0);
  CHECK_THROWS_AS(grad_check(obj, Vector::Ones(2), 0.0), std::invalid_argument);
}

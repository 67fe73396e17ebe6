#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>

#include "symaccel/types.hpp"

namespace symaccel {

struct KnownOptimum {
  Vector x;
  double f;
};

class Objective {
 public:
  virtual ~Objective() = default;
  virtual Eigen::Index dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual std::optional<KnownOptimum> known_optimum() const { return std::nullopt; }

 protected:
  void check_dim(const Vector& x) const {
    if (x.size() != dim()) throw std::invalid_argument("objective: dimension mismatch");
  }
};

// f(x) = 1/2 sum_a scales_a (x_a - center_a)^2, minimum 0 at center.
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(Vector center, Vector scales)
      : center_(std::move(center)), scales_(std::move(scales)) {
    if (center_.size() != scales_.size())
      throw std::invalid_argument("quadratic: center/scales size mismatch");
    if ((scales_.array() <= 0.0).any())
      throw std::invalid_argument("quadratic: scales must be strictly positive");
  }

  Eigen::Index dim() const override { return center_.size(); }

  double value(const Vector& x) const override {
    check_dim(x);
    return 0.5 * (scales_.array() * (x - center_).array().square()).sum();
  }

  Vector gradient(const Vector& x) const override {
    check_dim(x);
    return scales_.array() * (x - center_).array();
  }

  std::optional<KnownOptimum> known_optimum() const override {
    return KnownOptimum{center_, 0.0};
  }

 private:
  Vector center_;
  Vector scales_;
};

// log(1 + e^u) without overflow for |u| up to ~700.
inline double softplus(double u) {
  return std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u)));
}

// Mean cross-entropy of h(x;w) = sigmoid(w.x) against labels in {0,1},
// plus lambda * ||w||^2.
class LogisticRegressionObjective final : public Objective {
 public:
  LogisticRegressionObjective(Matrix features, Vector labels, double lambda_reg)
      : features_(std::move(features)), labels_(std::move(labels)), lambda_(lambda_reg) {
    if (features_.rows() < 1) throw std::invalid_argument("logistic: empty dataset");
    if (features_.rows() != labels_.size())
      throw std::invalid_argument("logistic: feature/label count mismatch");
    if (lambda_ < 0.0) throw std::invalid_argument("logistic: lambda_reg must be >= 0");
    for (Eigen::Index i = 0; i < labels_.size(); ++i) {
      if (labels_[i] != 0.0 && labels_[i] != 1.0)
        throw std::invalid_argument("logistic: labels must be in {0,1}");
    }
  }

  Eigen::Index dim() const override { return features_.cols(); }

  double value(const Vector& w) const override {
    check_dim(w);
    const Vector z = features_ * w;
    double loss = 0.0;
    // -y log h - (1-y) log(1-h) = softplus(-z) + (1-y) z
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      loss += softplus(-z[i]) + (1.0 - labels_[i]) * z[i];
    }
    return loss / static_cast<double>(z.size()) + lambda_ * w.squaredNorm();
  }

  Vector gradient(const Vector& w) const override {
    check_dim(w);
    const Vector z = features_ * w;
    const Vector h = (1.0 + (-z.array()).exp()).inverse();
    return features_.transpose() * (h - labels_) / static_cast<double>(z.size()) +
           2.0 * lambda_ * w;
  }

  double lambda_reg() const { return lambda_; }

 private:
  Matrix features_;
  Vector labels_;
  double lambda_;
};

struct GradCheckReport {
  double max_rel_err;
  Vector per_coordinate;
};

// Central-difference check of gradient() against value(); relative error
// per coordinate with denominator max(1, |grad_a|).
inline GradCheckReport grad_check(const Objective& obj, const Vector& x, double h) {
  if (h <= 0.0) throw std::invalid_argument("grad_check: h must be positive");
  const Vector g = obj.gradient(x);
  Vector err(x.size());
  for (Eigen::Index a = 0; a < x.size(); ++a) {
    Vector xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    const double fd = (obj.value(xp) - obj.value(xm)) / (2.0 * h);
    err[a] = std::abs(fd - g[a]) / std::max(1.0, std::abs(g[a]));
  }
  return {err.size() > 0 ? err.maxCoeff() : 0.0, std::move(err)};
}

}  // namespace symaccel

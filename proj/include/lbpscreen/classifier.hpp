#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "lbpscreen/features.hpp"

namespace lbpscreen {

/// Class labels; the positive class is the one being screened for.
enum class Label : int { Normal = -1, Adulterated = 1 };

std::string_view to_string(Label label);
Label parse_label(std::string_view token);

constexpr int sign(Label l) { return static_cast<int>(l); }

/// C defaults to 1000: on L1-normalized histograms (squared norms around
/// 1e-2) C = 1 leaves every multiplier at its bound, and leave-one-out then
/// predicts the training majority for every held-out sample.
struct SolverConfig {
  double c = 1000.0;
  int max_outer_iterations = 100;
  double tolerance = 1e-6;
};

/// Throws std::invalid_argument unless every field is strictly positive.
void validate(const SolverConfig& cfg);

/// Samples stored row-wise; all rows share one feature kind.
template <typename Scalar>
struct BasicTrainingSet {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  FeatureKind kind = FeatureKind::Lbp;
  Matrix features;
  std::vector<Label> labels;

  Eigen::Index size() const { return features.rows(); }
  Eigen::Index dimension() const { return features.cols(); }

  static BasicTrainingSet from_samples(std::span<const BasicFeatureVector<Scalar>> xs,
                                       std::span<const Label> ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("feature and label counts differ");
    if (xs.empty()) throw std::invalid_argument("empty training set");
    BasicTrainingSet set;
    set.kind = xs.front().kind;
    set.features.resize(static_cast<Eigen::Index>(xs.size()), xs.front().size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i].kind != set.kind || xs[i].size() != set.dimension()) {
        throw std::invalid_argument("dimension mismatch: sample " + std::to_string(i) +
                                    " differs in kind or length from sample 0");
      }
      set.features.row(static_cast<Eigen::Index>(i)) = xs[i].values.transpose();
    }
    set.labels.assign(ys.begin(), ys.end());
    return set;
  }
};

template <typename Scalar>
struct BasicLinearModel {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  FeatureKind kind = FeatureKind::Lbp;
  Vector weights;
  Scalar bias = 0;

  Eigen::Index dimension() const { return weights.size(); }
  friend bool operator==(const BasicLinearModel& a, const BasicLinearModel& b) {
    return a.kind == b.kind && a.bias == b.bias && a.weights.size() == b.weights.size() &&
           a.weights == b.weights;
  }
};

/// Solver state at termination.
template <typename Scalar>
struct BasicSolverReport {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> alphas;
  int passes = 0;
  /// Largest KKT violation over all samples, in bias units.
  Scalar max_violation = 0;
  bool converged = false;
  /// Dual objective after every pair update; filled only on request.
  std::vector<Scalar> objective_trace;
};

template <typename Scalar>
struct BasicTrainResult {
  BasicLinearModel<Scalar> model;
  BasicSolverReport<Scalar> report;
};

using TrainingSet = BasicTrainingSet<double>;
using LinearModel = BasicLinearModel<double>;
using SolverReport = BasicSolverReport<double>;
using TrainResult = BasicTrainResult<double>;

namespace detail {

// Soft-margin linear C-SVC dual with the bias equality constraint:
//   min f(a) = 1/2 a'Qa - sum(a),  0 <= a_i <= C,  y'a = 0,  Q_ij = y_i y_j <x_i, x_j>.
// score_i = -y_i * grad_i = y_i - <w, x_i>. A sample in the "up" set may move
// toward +y, one in the "low" set toward -y; optimality holds when
// max(score over up) <= min(score over low), and that interval brackets the bias.
template <typename Scalar>
class PairSolver {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  PairSolver(const BasicTrainingSet<Scalar>& data, Scalar c)
      : c_(c), n_(data.size()), y_(n_), alpha_(Vector::Zero(n_)), grad_(Vector::Constant(n_, -1)) {
    for (Eigen::Index i = 0; i < n_; ++i) y_(i) = static_cast<Scalar>(sign(data.labels[i]));
    q_ = (data.features * data.features.transpose()).cwiseProduct(y_ * y_.transpose());
  }

  bool in_up(Eigen::Index i) const { return y_(i) > 0 ? alpha_(i) < c_ : alpha_(i) > 0; }
  bool in_low(Eigen::Index i) const { return y_(i) > 0 ? alpha_(i) > 0 : alpha_(i) < c_; }
  Scalar score(Eigen::Index i) const { return -y_(i) * grad_(i); }

  struct Extremes {
    Scalar up_max = -std::numeric_limits<Scalar>::infinity();
    Scalar low_min = std::numeric_limits<Scalar>::infinity();
    Eigen::Index up_arg = -1;
    Eigen::Index low_arg = -1;
  };

  Extremes extremes() const {
    Extremes e;
    for (Eigen::Index k = 0; k < n_; ++k) {
      const Scalar s = score(k);
      if (in_up(k) && s > e.up_max) {
        e.up_max = s;
        e.up_arg = k;
      }
      if (in_low(k) && s < e.low_min) {
        e.low_min = s;
        e.low_arg = k;
      }
    }
    return e;
  }

  Scalar violation(Eigen::Index i, const Extremes& e) const {
    Scalar v = 0;
    if (in_up(i)) v = std::max(v, score(i) - e.low_min);
    if (in_low(i)) v = std::max(v, e.up_max - score(i));
    return v;
  }

  Scalar gap() const {
    const Extremes e = extremes();
    if (e.up_arg < 0 || e.low_arg < 0) return 0;
    return std::max<Scalar>(0, e.up_max - e.low_min);
  }

  // Analytic two-variable step on (i in up, j in low), clipped to the box.
  void update(Eigen::Index i, Eigen::Index j) {
    constexpr Scalar kTau = static_cast<Scalar>(1e-12);
    const Scalar old_i = alpha_(i);
    const Scalar old_j = alpha_(j);
    Scalar& ai = alpha_(i);
    Scalar& aj = alpha_(j);
    if (y_(i) != y_(j)) {
      Scalar quad = q_(i, i) + q_(j, j) + 2 * q_(i, j);
      if (quad <= 0) quad = kTau;
      const Scalar delta = (-grad_(i) - grad_(j)) / quad;
      const Scalar diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0) {
        if (aj < 0) {
          aj = 0;
          ai = diff;
        }
      } else if (ai < 0) {
        ai = 0;
        aj = -diff;
      }
      if (diff > 0) {
        if (ai > c_) {
          ai = c_;
          aj = c_ - diff;
        }
      } else if (aj > c_) {
        aj = c_;
        ai = c_ + diff;
      }
    } else {
      Scalar quad = q_(i, i) + q_(j, j) - 2 * q_(i, j);
      if (quad <= 0) quad = kTau;
      const Scalar delta = (grad_(i) - grad_(j)) / quad;
      const Scalar sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c_) {
        if (ai > c_) {
          ai = c_;
          aj = sum - c_;
        }
      } else if (aj < 0) {
        aj = 0;
        ai = sum;
      }
      if (sum > c_) {
        if (aj > c_) {
          aj = c_;
          ai = sum - c_;
        }
      } else if (ai < 0) {
        ai = 0;
        aj = sum;
      }
    }
    const Scalar di = ai - old_i;
    const Scalar dj = aj - old_j;
    grad_ += q_.col(i) * di + q_.col(j) * dj;
  }

  /// -f(alpha), the quantity the dual maximizes.
  Scalar dual_objective() const { return alpha_.sum() - alpha_.dot(grad_ + Vector::Ones(n_)) / 2; }

  Scalar bias() const {
    Scalar free_sum = 0;
    Eigen::Index free_count = 0;
    Scalar lower = -std::numeric_limits<Scalar>::infinity();
    Scalar upper = std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index k = 0; k < n_; ++k) {
      const Scalar s = score(k);
      if (alpha_(k) > 0 && alpha_(k) < c_) {
        free_sum += s;
        ++free_count;
      } else if (in_up(k)) {
        lower = std::max(lower, s);
      } else {
        upper = std::min(upper, s);
      }
    }
    if (free_count > 0) return free_sum / static_cast<Scalar>(free_count);
    if (!std::isfinite(lower)) return std::isfinite(upper) ? upper : 0;
    if (!std::isfinite(upper)) return lower;
    return (lower + upper) / 2;
  }

  Eigen::Index size() const { return n_; }
  const Vector& alphas() const { return alpha_; }
  const Vector& labels() const { return y_; }

 private:
  Scalar c_;
  Eigen::Index n_;
  Vector y_;
  Vector alpha_;
  Vector grad_;
  Matrix q_;
};

}  // namespace detail

/// Trains a linear C-SVC by deterministic pairwise dual coordinate descent.
///
/// One outer iteration visits every sample in index order; a sample whose KKT
/// violation exceeds the tolerance is updated jointly with its most violating
/// partner, which keeps sum(alpha_i * y_i) = 0. Training stops once the largest
/// violation is within tolerance or after max_outer_iterations passes. The bias
/// averages y_i - <w, x_i> over free support vectors, or takes the midpoint of
/// the KKT-feasible interval when none are free.
template <typename Scalar>
BasicTrainResult<Scalar> train_csvc_detailed(const BasicTrainingSet<Scalar>& data,
                                             const SolverConfig& cfg, bool record_objective = false) {
  validate(cfg);
  if (data.size() == 0) throw std::invalid_argument("empty training set");
  if (static_cast<std::size_t>(data.size()) != data.labels.size()) {
    throw std::invalid_argument("feature and label counts differ");
  }
  const bool has_pos = std::ranges::any_of(data.labels, [](Label l) { return l == Label::Adulterated; });
  const bool has_neg = std::ranges::any_of(data.labels, [](Label l) { return l == Label::Normal; });
  if (!has_pos || !has_neg) throw std::invalid_argument("training set must contain both labels");
  if (!data.features.allFinite()) throw std::invalid_argument("training features must be finite");

  const auto tol = static_cast<Scalar>(cfg.tolerance);
  detail::PairSolver<Scalar> solver(data, static_cast<Scalar>(cfg.c));
  BasicTrainResult<Scalar> result;
  auto& report = result.report;

  while (report.passes < cfg.max_outer_iterations) {
    for (Eigen::Index i = 0; i < solver.size(); ++i) {
      const auto e = solver.extremes();
      if (e.up_arg < 0 || e.low_arg < 0) break;
      const Scalar up_side = solver.in_up(i) ? solver.score(i) - e.low_min : 0;
      const Scalar low_side = solver.in_low(i) ? e.up_max - solver.score(i) : 0;
      if (std::max(up_side, low_side) <= tol) continue;
      if (up_side >= low_side) {
        solver.update(i, e.low_arg);
      } else {
        solver.update(e.up_arg, i);
      }
      if (record_objective) report.objective_trace.push_back(solver.dual_objective());
    }
    ++report.passes;
    if (solver.gap() <= tol) {
      report.converged = true;
      break;
    }
  }

  report.alphas = solver.alphas();
  report.max_violation = solver.gap();

  auto& model = result.model;
  model.kind = data.kind;
  model.weights = data.features.transpose() * report.alphas.cwiseProduct(solver.labels());
  model.bias = solver.bias();
  return result;
}

template <typename Scalar>
BasicLinearModel<Scalar> train_csvc(const BasicTrainingSet<Scalar>& data, const SolverConfig& cfg = {}) {
  return train_csvc_detailed(data, cfg).model;
}

/// w . x + b; throws std::invalid_argument on a kind or length mismatch.
template <typename Scalar>
Scalar decision_value(const BasicLinearModel<Scalar>& m, const BasicFeatureVector<Scalar>& x) {
  if (x.kind != m.kind) {
    throw std::invalid_argument("feature kind " + std::string(to_string(x.kind)) +
                                " does not match model kind " + std::string(to_string(m.kind)));
  }
  if (x.size() != m.dimension()) {
    throw std::invalid_argument("feature length " + std::to_string(x.size()) +
                                " does not match model dimension " + std::to_string(m.dimension()));
  }
  return m.weights.dot(x.values) + m.bias;
}

/// Decision values of exactly zero map to Adulterated.
template <typename Scalar>
Label label_for(Scalar decision) {
  return decision >= 0 ? Label::Adulterated : Label::Normal;
}

template <typename Scalar>
Label predict(const BasicLinearModel<Scalar>& m, const BasicFeatureVector<Scalar>& x) {
  return label_for(decision_value(m, x));
}

}  // namespace lbpscreen

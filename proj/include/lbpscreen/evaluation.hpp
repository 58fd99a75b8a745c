#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lbpscreen/classifier.hpp"
#include "lbpscreen/dataset.hpp"
#include "lbpscreen/features.hpp"
#include "lbpscreen/image.hpp"

namespace lbpscreen {

/// An exact count ratio; rendering happens only at output time.
struct Ratio {
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// Percent with one decimal, rounded half up from the exact ratio, e.g. "96.6%".
std::string render_percent(const Ratio& r, bool decimal_comma = false);

struct FoldResult {
  std::string held_out_id;
  Label true_label = Label::Normal;
  Label predicted_label = Label::Normal;
  double decision = 0;

  bool correct() const { return true_label == predicted_label; }
};

/// Rows are the true class, columns the prediction; index 0 is normal, 1 adulterated.
using Confusion = Eigen::Matrix<std::int64_t, 2, 2>;

constexpr Eigen::Index class_index(Label l) { return l == Label::Normal ? 0 : 1; }

struct EvalReport {
  FeatureKind kind = FeatureKind::Lbp;
  std::int64_t n = 0;
  std::int64_t correct = 0;
  Ratio global_accuracy;
  /// Empty when no sample of that class was evaluated.
  std::optional<Ratio> normal_accuracy;
  std::optional<Ratio> adulterated_accuracy;
  Confusion confusion = Confusion::Zero();
  std::vector<std::string> misclassified_ids;
  std::vector<FoldResult> folds;
};

/// Aggregates folds in the given order; throws std::invalid_argument when empty.
EvalReport build_report(std::vector<FoldResult> folds, FeatureKind kind);

struct EvalOptions {
  FeatureOptions features;
  SolverConfig solver;
  /// Worker threads for folds; results never depend on it.
  unsigned jobs = 1;
};

/// Leave-one-out over precomputed feature vectors, in dataset order.
EvalReport loocv_on_features(std::span<const std::string> ids, std::span<const FeatureVector> features,
                             std::span<const Label> labels, const EvalOptions& opts = {});

/// Resizes every image to target, extracts the requested feature, then runs
/// leave-one-out. Throws std::invalid_argument if any fold's training part
/// would be single-class.
EvalReport loocv(const LabeledDataset& data, FeatureKind kind, Resolution target,
                 const EvalOptions& opts = {});

struct SweepRow {
  Resolution resolution;
  Ratio lbp;
  Ratio gray;
  Ratio concat;
};

struct SweepReport {
  std::vector<SweepRow> rows;
};

/// Widths 50, 75, ..., 300 paired with the 4:3 heights 37, 56, 75, 94, 113,
/// 131, 150, 169, 188, 207, 225.
std::vector<Resolution> default_sweep_grid();

/// LOOCV accuracy for LBP, GRAY and CONCAT at each resolution, in request
/// order. Throws std::invalid_argument on an empty or repeating list.
SweepReport resolution_sweep(const LabeledDataset& data, std::span<const Resolution> resolutions,
                             const EvalOptions& opts = {});

std::string to_json(const EvalReport& r, bool decimal_comma = false);
std::string to_table(const EvalReport& r);
std::string to_json(const SweepReport& r, bool decimal_comma = false);
/// Header `width,height,acc_lbp,acc_gray,acc_concat`, one row per resolution.
std::string to_table(const SweepReport& r);

}  // namespace lbpscreen

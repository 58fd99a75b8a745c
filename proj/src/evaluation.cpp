#include "lbpscreen/evaluation.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

#include "lbpscreen/text_io.hpp"

namespace lbpscreen {

std::string render_percent(const Ratio& r, bool decimal_comma) {
  if (r.denominator <= 0) throw std::invalid_argument("ratio denominator must be positive");
  // Tenths of a percent, half up: floor(1000 * num / den + 1/2).
  const std::int64_t tenths = (2000 * r.numerator + r.denominator) / (2 * r.denominator);
  return std::to_string(tenths / 10) + (decimal_comma ? ',' : '.') + std::to_string(tenths % 10) + '%';
}

EvalReport build_report(std::vector<FoldResult> folds, FeatureKind kind) {
  if (folds.empty()) throw std::invalid_argument("cannot build a report from zero folds");
  EvalReport r;
  r.kind = kind;
  r.n = static_cast<std::int64_t>(folds.size());
  for (const auto& f : folds) {
    ++r.confusion(class_index(f.true_label), class_index(f.predicted_label));
    if (!f.correct()) r.misclassified_ids.push_back(f.held_out_id);
  }
  r.correct = r.confusion.trace();
  r.global_accuracy = {r.correct, r.n};
  const auto per_class = [&](Label l) -> std::optional<Ratio> {
    const auto k = class_index(l);
    const std::int64_t row = r.confusion.row(k).sum();
    if (row == 0) return std::nullopt;
    return Ratio{r.confusion(k, k), row};
  };
  r.normal_accuracy = per_class(Label::Normal);
  r.adulterated_accuracy = per_class(Label::Adulterated);
  r.folds = std::move(folds);
  return r;
}

namespace {

// Runs body(i) for i in [0, n) on up to `jobs` threads. Each index writes its
// own slot, so the schedule cannot change results.
template <typename Body>
void parallel_for(std::size_t n, unsigned jobs, Body body) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<FeatureVector> extract_all(const LabeledDataset& data, FeatureKind kind, Resolution target,
                                       const EvalOptions& opts) {
  std::vector<FeatureVector> out(data.size());
  parallel_for(data.size(), opts.jobs, [&](std::size_t i) {
    out[i] = extract_features(resize_bilinear(data.entries[i].image, target), kind, opts.features);
  });
  return out;
}

}  // namespace

EvalReport loocv_on_features(std::span<const std::string> ids, std::span<const FeatureVector> features,
                             std::span<const Label> labels, const EvalOptions& opts) {
  const std::size_t n = features.size();
  if (ids.size() != n || labels.size() != n) throw std::invalid_argument("ids, features and labels differ in length");
  if (n < 2) throw std::invalid_argument("leave-one-out needs at least 2 samples");
  validate(opts.solver);

  const auto positives = std::count(labels.begin(), labels.end(), Label::Adulterated);
  const auto negatives = static_cast<std::ptrdiff_t>(n) - positives;
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = labels[i] == Label::Adulterated;
    if ((pos ? positives - 1 : positives) == 0 || (pos ? negatives : negatives - 1) == 0) {
      throw std::invalid_argument("fold holding out '" + ids[i] + "' leaves a single-class training set");
    }
  }

  const auto all = TrainingSet::from_samples(features, labels);
  std::vector<FoldResult> folds(n);
  parallel_for(n, opts.jobs, [&](std::size_t i) {
    TrainingSet train;
    train.kind = all.kind;
    train.features.resize(all.size() - 1, all.dimension());
    train.labels.reserve(n - 1);
    Eigen::Index row = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      train.features.row(row++) = all.features.row(static_cast<Eigen::Index>(j));
      train.labels.push_back(labels[j]);
    }
    const auto model = train_csvc(train, opts.solver);
    const double d = decision_value(model, features[i]);
    folds[i] = {ids[i], labels[i], label_for(d), d};
  });
  return build_report(std::move(folds), all.kind);
}

EvalReport loocv(const LabeledDataset& data, FeatureKind kind, Resolution target, const EvalOptions& opts) {
  validate(data);
  validate(target);
  std::vector<std::string> ids;
  std::vector<Label> labels;
  for (const auto& e : data.entries) {
    ids.push_back(e.id);
    labels.push_back(e.label);
  }
  const auto features = extract_all(data, kind, target, opts);
  return loocv_on_features(ids, features, labels, opts);
}

std::vector<Resolution> default_sweep_grid() {
  // Fixed 4:3 pairs; 50x37 and 275x207 do not follow any single rounding of 3w/4.
  constexpr int heights[] = {37, 56, 75, 94, 113, 131, 150, 169, 188, 207, 225};
  std::vector<Resolution> grid;
  for (int k = 0; k < 11; ++k) grid.push_back({50 + 25 * k, heights[k]});
  return grid;
}

SweepReport resolution_sweep(const LabeledDataset& data, std::span<const Resolution> resolutions,
                             const EvalOptions& opts) {
  validate(data);
  if (resolutions.empty()) throw std::invalid_argument("resolution sweep needs at least one resolution");
  std::set<std::pair<int, int>> seen;
  for (const auto& r : resolutions) {
    validate(r);
    if (!seen.insert({r.width, r.height}).second) {
      throw std::invalid_argument("duplicate resolution " + std::to_string(r.width) + "x" + std::to_string(r.height));
    }
  }

  std::vector<std::string> ids;
  std::vector<Label> labels;
  for (const auto& e : data.entries) {
    ids.push_back(e.id);
    labels.push_back(e.label);
  }

  SweepReport out;
  for (const auto& res : resolutions) {
    const auto lbp = extract_all(data, FeatureKind::Lbp, res, opts);
    const auto gray = extract_all(data, FeatureKind::Gray, res, opts);
    std::vector<FeatureVector> both(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) both[i] = concat(lbp[i], gray[i]);
    out.rows.push_back({res, loocv_on_features(ids, lbp, labels, opts).global_accuracy,
                        loocv_on_features(ids, gray, labels, opts).global_accuracy,
                        loocv_on_features(ids, both, labels, opts).global_accuracy});
  }
  return out;
}

namespace {

using nlohmann::ordered_json;

ordered_json ratio_json(const Ratio& r, bool decimal_comma) {
  return {{"correct", r.numerator},
          {"total", r.denominator},
          {"ratio", r.value()},
          {"percent", render_percent(r, decimal_comma)}};
}

ordered_json optional_ratio_json(const std::optional<Ratio>& r, bool decimal_comma) {
  return r ? ratio_json(*r, decimal_comma) : ordered_json(nullptr);
}

}  // namespace

std::string to_json(const EvalReport& r, bool decimal_comma) {
  ordered_json j;
  j["feature_kind"] = std::string(to_string(r.kind));
  j["n"] = r.n;
  j["correct"] = r.correct;
  j["global_accuracy"] = ratio_json(r.global_accuracy, decimal_comma);
  j["per_class_accuracy"] = {{"normal", optional_ratio_json(r.normal_accuracy, decimal_comma)},
                             {"adulterated", optional_ratio_json(r.adulterated_accuracy, decimal_comma)}};
  j["confusion"] = {{"rows", "true label"},
                    {"columns", "predicted label"},
                    {"order", {"normal", "adulterated"}},
                    {"counts", {{r.confusion(0, 0), r.confusion(0, 1)}, {r.confusion(1, 0), r.confusion(1, 1)}}}};
  j["misclassified_ids"] = r.misclassified_ids;
  auto folds = ordered_json::array();
  for (const auto& f : r.folds) {
    folds.push_back({{"held_out_id", f.held_out_id},
                     {"true_label", std::string(to_string(f.true_label))},
                     {"predicted_label", std::string(to_string(f.predicted_label))},
                     {"decision", f.decision}});
  }
  j["folds"] = std::move(folds);
  return j.dump(2) + "\n";
}

std::string to_table(const EvalReport& r) {
  const auto cell = [](const std::optional<Ratio>& x) { return x ? format_real(x->value()) : std::string(); };
  return "kind,n,correct,acc_global,acc_normal,acc_adulterated\n" + std::string(to_string(r.kind)) + ',' +
         std::to_string(r.n) + ',' + std::to_string(r.correct) + ',' + format_real(r.global_accuracy.value()) +
         ',' + cell(r.normal_accuracy) + ',' + cell(r.adulterated_accuracy) + '\n';
}

std::string to_json(const SweepReport& r, bool decimal_comma) {
  auto rows = ordered_json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"width", row.resolution.width},
                    {"height", row.resolution.height},
                    {"acc_lbp", ratio_json(row.lbp, decimal_comma)},
                    {"acc_gray", ratio_json(row.gray, decimal_comma)},
                    {"acc_concat", ratio_json(row.concat, decimal_comma)}});
  }
  ordered_json j;
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string to_table(const SweepReport& r) {
  std::string out = "width,height,acc_lbp,acc_gray,acc_concat\n";
  for (const auto& row : r.rows) {
    out += std::to_string(row.resolution.width) + ',' + std::to_string(row.resolution.height) + ',' +
           format_real(row.lbp.value()) + ',' + format_real(row.gray.value()) + ',' +
           format_real(row.concat.value()) + '\n';
  }
  return out;
}

}  // namespace lbpscreen

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "lbpscreen/evaluation.hpp"

using namespace lbpscreen;

namespace {

// Folds realising a confusion matrix: rows are true normal/adulterated,
// columns predicted normal/adulterated.
std::vector<FoldResult> folds_for(std::int64_t nn, std::int64_t na, std::int64_t an, std::int64_t aa) {
  std::vector<FoldResult> out;
  int k = 0;
  const auto add = [&](std::int64_t count, Label truth, Label pred) {
    for (std::int64_t i = 0; i < count; ++i) {
      out.push_back({"s" + std::to_string(k++), truth, pred, pred == Label::Adulterated ? 1.0 : -1.0});
    }
  };
  add(nn, Label::Normal, Label::Normal);
  add(na, Label::Normal, Label::Adulterated);
  add(an, Label::Adulterated, Label::Normal);
  add(aa, Label::Adulterated, Label::Adulterated);
  return out;
}

LabeledDataset small_synthetic(std::uint64_t seed = 3, int per_class = 5) {
  return generate_synthetic(SyntheticSpec{seed, per_class, 24, 18, 2}).labeled();
}

EvalOptions hard_margin() {
  EvalOptions o;
  o.solver = {1000.0, 100, 1e-6};
  return o;
}

}  // namespace

TEST_CASE("percent rendering rounds half up from the exact ratio") {
  CHECK(render_percent({57, 59}) == "96.6%");
  CHECK(render_percent({23, 24}) == "95.8%");
  CHECK(render_percent({34, 35}) == "97.1%");
  CHECK(render_percent({39, 40}) == "97.5%");
  CHECK(render_percent({19, 20}) == "95.0%");
  CHECK(render_percent({20, 20}) == "100.0%");
  CHECK(render_percent({0, 7}) == "0.0%");
  // 1/8 = 12.5% exactly; 1/16 = 6.25% renders 6.3%.
  CHECK(render_percent({1, 8}) == "12.5%");
  CHECK(render_percent({1, 16}) == "6.3%");
  CHECK(render_percent({1, 16}, true) == "6,3%");
  CHECK_THROWS_AS(render_percent({1, 0}), std::invalid_argument);
}

TEST_CASE("report arithmetic from confusion counts") {
  const auto full = build_report(folds_for(23, 1, 1, 34), FeatureKind::Lbp);
  CHECK(full.n == 59);
  CHECK(full.correct == 57);
  CHECK(render_percent(full.global_accuracy) == "96.6%");
  CHECK(render_percent(*full.normal_accuracy) == "95.8%");
  CHECK(render_percent(*full.adulterated_accuracy) == "97.1%");
  CHECK(full.confusion(0, 1) == 1);
  CHECK(full.confusion(1, 0) == 1);
  CHECK(full.misclassified_ids == std::vector<std::string>{"s23", "s24"});

  const auto balanced = build_report(folds_for(20, 0, 1, 19), FeatureKind::Concat);
  CHECK(render_percent(balanced.global_accuracy) == "97.5%");
  CHECK(render_percent(*balanced.normal_accuracy) == "100.0%");
  CHECK(render_percent(*balanced.adulterated_accuracy) == "95.0%");

  const auto perfect = build_report(folds_for(20, 0, 0, 20), FeatureKind::Gray);
  CHECK(render_percent(perfect.global_accuracy) == "100.0%");
  CHECK(perfect.misclassified_ids.empty());

  const auto one_wrong = build_report(folds_for(0, 0, 1, 0), FeatureKind::Lbp);
  CHECK(render_percent(one_wrong.global_accuracy) == "0.0%");
  CHECK_FALSE(one_wrong.normal_accuracy.has_value());

  CHECK_THROWS_AS(build_report({}, FeatureKind::Lbp), std::invalid_argument);
}

TEST_CASE("report invariants") {
  for (auto counts : {std::array<int, 4>{3, 2, 1, 7}, std::array<int, 4>{0, 5, 5, 0}, std::array<int, 4>{1, 0, 0, 0}}) {
    const auto r = build_report(folds_for(counts[0], counts[1], counts[2], counts[3]), FeatureKind::Lbp);
    CHECK(r.confusion.sum() == r.n);
    CHECK(r.correct == r.confusion.trace());
    CHECK(static_cast<std::int64_t>(r.misclassified_ids.size()) == r.n - r.correct);
    CHECK(r.global_accuracy.value() >= 0);
    CHECK(r.global_accuracy.value() <= 1);
  }
}

TEST_CASE("one fold per entry, in dataset order") {
  const auto data = small_synthetic();
  const auto r = loocv(data, FeatureKind::Lbp, {24, 18}, hard_margin());
  REQUIRE(r.folds.size() == data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(r.folds[i].held_out_id == data.entries[i].id);
    CHECK(r.folds[i].true_label == data.entries[i].label);
    CHECK(r.folds[i].predicted_label == label_for(r.folds[i].decision));
  }
  CHECK(r.kind == FeatureKind::Lbp);
  CHECK(r.n == 10);
}

TEST_CASE("tiny datasets") {
  auto data = small_synthetic(1, 2);
  data.entries.resize(3);
  // Three entries pass validation, but holding out the lone adulterated
  // image leaves only normal ones to train on.
  CHECK_NOTHROW(validate(data));
  try {
    loocv(data, FeatureKind::Lbp, {24, 18});
    FAIL("expected a single-class fold error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("adulterated_000") != std::string::npos);
  }

  auto four = small_synthetic(1, 2);
  const auto r = loocv(four, FeatureKind::Lbp, {24, 18}, hard_margin());
  CHECK(r.n == 4);

  data.entries.resize(2);
  CHECK_THROWS_AS(loocv(data, FeatureKind::Lbp, {24, 18}), std::invalid_argument);
  CHECK_THROWS_AS(loocv(four, FeatureKind::Lbp, {2, 18}), std::invalid_argument);
}

TEST_CASE("resubstitution accuracy bounds leave-one-out accuracy") {
  const auto data = small_synthetic(9, 6);
  for (auto kind : {FeatureKind::Lbp, FeatureKind::Gray}) {
    const auto opts = hard_margin();
    const auto r = loocv(data, kind, {24, 18}, opts);

    std::vector<FeatureVector> xs;
    std::vector<Label> ys;
    for (const auto& e : data.entries) {
      xs.push_back(extract_features(e.image, kind, opts.features));
      ys.push_back(e.label);
    }
    const auto model = train_csvc(TrainingSet::from_samples(xs, ys), opts.solver);
    std::int64_t resub = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) resub += predict(model, xs[i]) == ys[i];
    CHECK(resub >= r.correct);
  }
}

TEST_CASE("jobs never change the report") {
  const auto data = small_synthetic(4, 6);
  auto opts = hard_margin();
  const auto serial = to_json(loocv(data, FeatureKind::Concat, {30, 20}, opts));
  opts.jobs = 3;
  CHECK(to_json(loocv(data, FeatureKind::Concat, {30, 20}, opts)) == serial);
  opts.jobs = 1;
  CHECK(to_json(loocv(data, FeatureKind::Concat, {30, 20}, opts)) == serial);
}

TEST_CASE("synthetic texture is separated by LBP but not by gray levels") {
  const auto data = generate_synthetic(SyntheticSpec{}).labeled();
  const auto lbp = loocv(data, FeatureKind::Lbp, {64, 48});
  const auto gray = loocv(data, FeatureKind::Gray, {64, 48});
  CHECK(lbp.global_accuracy.value() >= 0.95);
  CHECK(gray.global_accuracy.value() <= 0.65);
}

TEST_CASE("sweep") {
  CHECK(default_sweep_grid().size() == 11);
  CHECK(default_sweep_grid().front() == Resolution{50, 37});
  CHECK(default_sweep_grid()[9] == Resolution{275, 207});
  CHECK(default_sweep_grid().back() == Resolution{300, 225});
  for (const auto& r : default_sweep_grid()) CHECK(std::abs(4 * r.height - 3 * r.width) <= 4);

  const auto data = small_synthetic(5, 4);
  const std::vector<Resolution> grid{{20, 15}, {12, 9}};
  const auto a = resolution_sweep(data, grid, hard_margin());
  REQUIRE(a.rows.size() == 2);
  CHECK(a.rows[0].resolution == grid[0]);
  CHECK(a.rows[1].resolution == grid[1]);
  for (const auto& row : a.rows) {
    for (const auto& acc : {row.lbp, row.gray, row.concat}) CHECK(acc.denominator == 8);
  }
  CHECK(a.rows[1].lbp == loocv(data, FeatureKind::Lbp, {12, 9}, hard_margin()).global_accuracy);

  const auto b = resolution_sweep(data, grid, hard_margin());
  CHECK(to_json(a) == to_json(b));
  CHECK(to_table(a) == to_table(b));

  const std::vector<Resolution> dup{{20, 15}, {20, 15}};
  CHECK_THROWS_AS(resolution_sweep(data, dup), std::invalid_argument);
  CHECK_THROWS_AS(resolution_sweep(data, std::vector<Resolution>{}), std::invalid_argument);
}

TEST_CASE("output formats") {
  const auto r = build_report(folds_for(20, 0, 1, 19), FeatureKind::Lbp);
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["feature_kind"] == "LBP");
  CHECK(j["n"] == 40);
  CHECK(j["correct"] == 39);
  CHECK(j["global_accuracy"]["percent"] == "97.5%");
  CHECK(j["global_accuracy"]["ratio"] == 0.975);
  CHECK(j["per_class_accuracy"]["normal"]["percent"] == "100.0%");
  CHECK(j["per_class_accuracy"]["adulterated"]["correct"] == 19);
  CHECK(j["confusion"]["counts"] == nlohmann::json::array({{20, 0}, {1, 19}}));
  CHECK(j["misclassified_ids"] == nlohmann::json::array({"s20"}));
  CHECK(j["folds"].size() == 40);

  const auto comma = nlohmann::json::parse(to_json(r, true));
  CHECK(comma["global_accuracy"]["percent"] == "97,5%");

  CHECK(to_table(r) == "kind,n,correct,acc_global,acc_normal,acc_adulterated\nLBP,40,39,0.97499999999999998,1,0.94999999999999996\n");

  const auto only_adulterated = build_report(folds_for(0, 0, 1, 1), FeatureKind::Gray);
  CHECK(nlohmann::json::parse(to_json(only_adulterated))["per_class_accuracy"]["normal"].is_null());
  CHECK(to_table(only_adulterated) == "kind,n,correct,acc_global,acc_normal,acc_adulterated\nGRAY,2,1,0.5,,0.5\n");

  SweepReport s{{{{50, 37}, {1, 2}, {2, 2}, {0, 2}}}};
  CHECK(to_table(s) == "width,height,acc_lbp,acc_gray,acc_concat\n50,37,0.5,1,0\n");
  const auto sj = nlohmann::json::parse(to_json(s));
  CHECK(sj["rows"][0]["acc_gray"]["percent"] == "100.0%");
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <random>

#include "lbpscreen/text_io.hpp"

using namespace lbpscreen;

TEST_CASE("reals round-trip bit for bit") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double v = k % 3 ? u(rng) : u(rng) * 1e-300;
    CHECK(parse_real(format_real(v)) == v);
  }
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(-2) == "-2");
  CHECK(parse_real(format_real(std::numeric_limits<double>::min())) == std::numeric_limits<double>::min());
}

TEST_CASE("real parse errors") {
  CHECK_THROWS_AS(parse_real(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_real("1.5x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_real("inf"), std::invalid_argument);
  CHECK_THROWS_AS(parse_real(" 1"), std::invalid_argument);
  CHECK_THROWS_AS(format_real(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
}

TEST_CASE("feature vector round trip") {
  std::mt19937 rng(2);
  for (auto kind : {FeatureKind::Lbp, FeatureKind::Gray, FeatureKind::Concat}) {
    Histogram256 h;
    for (int b = 0; b < 256; ++b) h.bins(b) = rng() % 50;
    FeatureVector fv = normalize_l1(h, kind == FeatureKind::Concat ? FeatureKind::Lbp : kind);
    if (kind == FeatureKind::Concat) fv = concat(fv, normalize_l1(h, FeatureKind::Gray));
    const auto line = serialize(fv);
    CHECK(line.rfind(std::string(to_string(kind)) + ",", 0) == 0);
    CHECK(line.find('\n') == std::string::npos);
    const auto back = parse_feature_vector(line);
    CHECK(back.kind == fv.kind);
    CHECK(back.values == fv.values);
    CHECK(parse_feature_vector(line + "\n").values == fv.values);
  }
}

TEST_CASE("feature vector parse errors") {
  CHECK_THROWS_AS(parse_feature_vector("LBP,0.5,0.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_feature_vector("HOG,1"), std::invalid_argument);
  std::string gray = "GRAY";
  for (int k = 0; k < 256; ++k) gray += k == 7 ? ",abc" : ",0";
  CHECK_THROWS_AS(parse_feature_vector(gray), std::invalid_argument);
}

TEST_CASE("model round trip") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0, 1);
  LinearModel m;
  m.kind = FeatureKind::Concat;
  m.weights.resize(512);
  for (Eigen::Index k = 0; k < 512; ++k) m.weights(k) = g(rng);
  m.bias = g(rng);
  const auto line = serialize(m);
  CHECK(line.rfind("512,CONCAT,", 0) == 0);
  CHECK(parse_model(line) == m);

  LinearModel tiny{FeatureKind::Lbp, Eigen::VectorXd::Constant(1, 1.0), -0.5};
  CHECK(serialize(tiny) == "1,LBP,-0.5,1");
}

TEST_CASE("model parse errors") {
  CHECK_THROWS_AS(parse_model("2,LBP,0,1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_model("1,LBP,0,1,2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_model("0,LBP,0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_model("x,LBP,0,1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_model("1,LBP"), std::invalid_argument);
  CHECK_THROWS_AS(parse_model("1,LBP,nan,1"), std::invalid_argument);
}

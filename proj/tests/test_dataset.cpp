#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "lbpscreen/dataset.hpp"
#include "lbpscreen/features.hpp"

using namespace lbpscreen;

namespace {

std::string two_group_manifest() {
  std::string text = "id,path,label,group\n";
  const auto add = [&](const std::string& prefix, int count, const char* label, int group) {
    for (int k = 0; k < count; ++k) {
      const auto id = prefix + std::to_string(k);
      text += id + ",img/" + id + ".pgm," + label + "," + std::to_string(group) + "\n";
    }
  };
  add("g1n", 20, "normal", 1);
  add("g1a", 20, "adulterated", 1);
  add("g2n", 4, "normal", 2);
  add("g2a", 15, "adulterated", 2);
  return text;
}

std::size_t error_line(const std::string& text) {
  try {
    load_manifest(text);
  } catch (const ManifestError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("manifest parsing") {
  const auto m = load_manifest(
      "id,path,label,group\n"
      "a,x/a.pgm,normal,1\n"
      "\n"
      "b, b.ppm ,adulterated,2\r\n");
  REQUIRE(m.size() == 2);
  CHECK(m.entries[0] == ManifestEntry{"a", "x/a.pgm", Label::Normal, 1});
  CHECK(m.entries[1] == ManifestEntry{"b", "b.ppm", Label::Adulterated, 2});
  CHECK(load_manifest("id,path,label,group").size() == 0);
}

TEST_CASE("manifest errors carry the 1-based line") {
  CHECK(error_line("id,path,label\n") == 1);
  CHECK(error_line("") == 1);
  CHECK(error_line("id,path,label,group\na,a.pgm,normal\n") == 2);
  CHECK(error_line("id,path,label,group\na,a.pgm,normal,1,extra\n") == 2);
  CHECK(error_line("id,path,label,group\na,a.pgm,normal,1\n\nb,b.pgm,fake,1\n") == 4);
  CHECK(error_line("id,path,label,group\na,a.pgm,normal,3\n") == 2);
  CHECK(error_line("id,path,label,group\na,a.pgm,normal,1\na,c.pgm,normal,1\n") == 3);
  CHECK(error_line("id,path,label,group\n,a.pgm,normal,1\n") == 2);

  try {
    load_manifest("id,path,label,group\na,a.pgm,Normal,1\n");
    FAIL("expected a manifest error");
  } catch (const ManifestError& e) {
    CHECK(std::string(e.what()) == "manifest line 2: unknown label 'Normal'");
  }
}

TEST_CASE("serialize then parse is the identity") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Manifest m;
    const int n = static_cast<int>(rng() % 12);
    for (int k = 0; k < n; ++k) {
      m.entries.push_back({"s" + std::to_string(trial) + "_" + std::to_string(k), "dir/f" + std::to_string(rng() % 1000) + ".pgm",
                           rng() % 2 ? Label::Adulterated : Label::Normal, static_cast<int>(rng() % 2) + 1});
    }
    CHECK(load_manifest(serialize(m)) == m);
  }
}

TEST_CASE("group filtering") {
  const auto m = load_manifest(two_group_manifest());
  CHECK(m.size() == 59);

  const auto g1 = filter_group(m, 1);
  CHECK(g1.size() == 40);
  const auto g2 = filter_group(m, 2);
  REQUIRE(g2.size() == 19);
  CHECK(std::count_if(g2.entries.begin(), g2.entries.end(),
                      [](const ManifestEntry& e) { return e.label == Label::Normal; }) == 4);
  CHECK(g2.entries.front().id == "g2n0");
  CHECK(g2.entries.back().id == "g2a14");
  CHECK(filter_group(m, 3).size() == 0);
}

TEST_CASE("dataset validation") {
  LabeledDataset d;
  d.entries.push_back({"a", GrayImage(3, 3), Label::Normal, 1});
  d.entries.push_back({"b", GrayImage(3, 3), Label::Adulterated, 1});
  CHECK_THROWS_AS(validate(d), std::invalid_argument);
  d.entries.push_back({"c", GrayImage(3, 3), Label::Adulterated, 1});
  CHECK_NOTHROW(validate(d));
  d.entries[2].id = "a";
  CHECK_THROWS_AS(validate(d), std::invalid_argument);
  d.entries[2].id = "c";
  d.entries[0].label = Label::Adulterated;
  CHECK_THROWS_AS(validate(d), std::invalid_argument);
}

TEST_CASE("SplitMix64 reference outputs") {
  SplitMix64 rng(0);
  CHECK(rng() == 0xE220A8397B1DCDAFull);
  CHECK(rng() == 0x6E789E6AA1B965F4ull);
  CHECK(rng() == 0x06C45D188009454Full);
}

TEST_CASE("box blur") {
  GrayImage flat(5, 4);
  flat.pixels().setConstant(77);
  CHECK(box_blur(flat, 2) == flat);

  const std::uint8_t px[] = {0, 0, 0, 0, 9, 0, 0, 0, 0};
  const auto img = GrayImage::from_row_major(3, 3, px);
  CHECK(box_blur(img, 0) == img);
  // Every 3x3 clamped window contains the center exactly once: 9/9 = 1.
  CHECK((box_blur(img, 1).pixels().array() == 1).all());
}

TEST_CASE("synthetic generator") {
  const SyntheticSpec spec{7, 6, 20, 16, 2};
  const auto a = generate_synthetic(spec);
  const auto b = generate_synthetic(spec);
  REQUIRE(a.images.size() == 12);
  REQUIRE(a.manifest.size() == 12);
  CHECK(a.images == b.images);
  CHECK(a.manifest == b.manifest);

  const auto other = generate_synthetic(SyntheticSpec{8, 6, 20, 16, 2});
  CHECK_FALSE(other.images == a.images);

  CHECK(a.manifest.entries[0] == ManifestEntry{"normal_000", "normal_000.pgm", Label::Normal, 1});
  CHECK(a.manifest.entries[1] == ManifestEntry{"adulterated_000", "adulterated_000.pgm", Label::Adulterated, 1});
  CHECK(a.manifest.entries[11].id == "adulterated_005");

  for (std::size_t k = 0; k < a.images.size(); k += 2) {
    const auto& normal = a.images[k];
    const auto& twin = a.images[k + 1];
    CHECK(normal.width() == 20);
    CHECK(normal.height() == 16);
    CHECK(gray_histogram(normal) == gray_histogram(twin));
    const auto hn = extract_features(normal, FeatureKind::Lbp);
    const auto ht = extract_features(twin, FeatureKind::Lbp);
    CHECK((hn.values - ht.values).lpNorm<1>() > 0);
  }

  const auto labeled = a.labeled();
  CHECK(labeled.size() == 12);
  CHECK(labeled.entries[3].id == "adulterated_001");
  CHECK(labeled.entries[3].image == a.images[3]);
  CHECK_NOTHROW(validate(labeled));
}

TEST_CASE("synthetic parameter bounds") {
  CHECK_THROWS_AS(generate_synthetic(SyntheticSpec{0, 1, 64, 48, 2}), std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic(SyntheticSpec{0, 2, 7, 48, 2}), std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic(SyntheticSpec{0, 2, 64, 48, -1}), std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic(SyntheticSpec{0, 1000, 8, 8, 0}), std::invalid_argument);
}

TEST_CASE("loading images from a manifest") {
  const auto dir = std::filesystem::temp_directory_path() / "lbpscreen_test_dataset";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir / "img");

  GrayImage g(4, 3);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 4; ++x) g(y, x) = static_cast<std::uint8_t>(10 * y + x);
  write_file((dir / "img" / "a.pgm").string(), encode_pgm(g));
  const std::string ppm = "P3 1 1 255 255 0 0";
  write_file((dir / "img" / "b.ppm").string(),
             std::span(reinterpret_cast<const std::uint8_t*>(ppm.data()), ppm.size()));

  const auto m = load_manifest("id,path,label,group\na,img/a.pgm,normal,1\nb,img/b.ppm,adulterated,2\n");
  const auto d = load_images(m, dir);
  REQUIRE(d.size() == 2);
  CHECK(d.entries[0].image == g);
  CHECK(d.entries[1].image(0, 0) == 76);
  CHECK(d.entries[1].group == 2);

  const auto missing = load_manifest("id,path,label,group\nz,img/none.pgm,normal,1\n");
  try {
    load_images(missing, dir);
    FAIL("expected an I/O error");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("none.pgm") != std::string::npos);
  }

  const std::string junk = "P5 2 2 255\n\x01";
  write_file((dir / "img" / "bad.pgm").string(),
             std::span(reinterpret_cast<const std::uint8_t*>(junk.data()), junk.size()));
  CHECK_THROWS_AS(load_images(load_manifest("id,path,label,group\nq,img/bad.pgm,normal,1\n"), dir), ImageFormatError);
  std::filesystem::remove_all(dir);
}

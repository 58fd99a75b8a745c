#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lbpscreen/classifier.hpp"
#include "lbpscreen/image.hpp"

namespace lbpscreen {

struct ManifestEntry {
  std::string id;
  std::string path;
  Label label = Label::Normal;
  int group = 1;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  std::vector<ManifestEntry> entries;

  std::size_t size() const { return entries.size(); }
  friend bool operator==(const Manifest&, const Manifest&) = default;
};

/// Manifest parse failure; line() is 1-based and counts the header.
class ManifestError : public std::runtime_error {
 public:
  ManifestError(const std::string& what, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses `id,path,label,group` CSV. Labels are `normal` or `adulterated`,
/// groups `1` or `2`. Blank lines are skipped.
Manifest load_manifest(std::string_view text);
std::string serialize(const Manifest& m);

/// Entries of one group, original order preserved.
Manifest filter_group(const Manifest& m, int group);

/// An image with its label and group.
struct LabeledImage {
  std::string id;
  GrayImage image;
  Label label = Label::Normal;
  int group = 1;
};

struct LabeledDataset {
  std::vector<LabeledImage> entries;

  std::size_t size() const { return entries.size(); }
};

/// Throws std::invalid_argument when ids repeat, fewer than 3 entries exist,
/// or one label is missing.
void validate(const LabeledDataset& data);

/// Decodes every manifest image, resolving relative paths against base_dir.
/// Pixmaps are converted to grayscale. Throws IoError naming the path of an
/// unreadable file and ImageFormatError for a malformed one.
LabeledDataset load_images(const Manifest& m, const std::filesystem::path& base_dir);

/// SplitMix64: the state advances by 0x9E3779B97F4A7C15 per draw and the
/// output is the state passed through the two xor-shift-multiply rounds
/// (constants 0xBF58476D1CE4E5B9, 0x94D049BB133111EB; shifts 30, 27, 31).
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

struct SyntheticSpec {
  std::uint64_t seed = 0;
  int per_class = 20;
  int width = 64;
  int height = 48;
  int smoothing_radius = 2;
};

void validate(const SyntheticSpec& spec);

struct SyntheticDataset {
  std::vector<GrayImage> images;
  Manifest manifest;

  LabeledDataset labeled() const;
};

/// Seeded stand-in for a two-class texture corpus.
///
/// For k = 0 .. per_class-1 the stream produces, in order:
///   normal_k:      width*height noise bytes (top 8 bits of each draw), box
///                  blurred over a (2r+1)^2 window with clamped edges and
///                  round-half-up averaging;
///   adulterated_k: normal_k's pixels shuffled by Fisher-Yates, walking i from
///                  the last index down to 1 and swapping with draw % (i+1).
/// Each twin therefore has exactly the gray histogram of its partner but none
/// of its spatial correlation. Manifest order is normal_000, adulterated_000,
/// normal_001, ...; every entry is group 1 and its path is `<id>.pgm`.
SyntheticDataset generate_synthetic(const SyntheticSpec& spec);

/// Mean filter used by the generator.
GrayImage box_blur(const GrayImage& img, int radius);

}  // namespace lbpscreen

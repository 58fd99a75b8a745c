#include "lbpscreen/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_set>
#include <utility>

#include "lbpscreen/features.hpp"

namespace lbpscreen {

ManifestError::ManifestError(const std::string& what, std::size_t line)
    : std::runtime_error("manifest line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

}  // namespace

Manifest load_manifest(std::string_view text) {
  Manifest m;
  std::unordered_set<std::string> seen;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;

    const auto fields = split_fields(line);
    if (!header_seen) {
      if (fields.size() != 4 || fields[0] != "id" || fields[1] != "path" || fields[2] != "label" ||
          fields[3] != "group") {
        throw ManifestError("expected header 'id,path,label,group'", line_no);
      }
      header_seen = true;
      continue;
    }
    if (fields.size() < 4) throw ManifestError("missing field (need id,path,label,group)", line_no);
    if (fields.size() > 4) throw ManifestError("too many fields", line_no);
    for (std::size_t f = 0; f < 4; ++f) {
      if (fields[f].empty()) throw ManifestError("missing field (empty column " + std::to_string(f + 1) + ")", line_no);
    }

    ManifestEntry e;
    e.id = fields[0];
    e.path = fields[1];
    if (fields[2] == "normal") {
      e.label = Label::Normal;
    } else if (fields[2] == "adulterated") {
      e.label = Label::Adulterated;
    } else {
      throw ManifestError("unknown label '" + std::string(fields[2]) + "'", line_no);
    }
    if (fields[3] == "1") {
      e.group = 1;
    } else if (fields[3] == "2") {
      e.group = 2;
    } else {
      throw ManifestError("unknown group '" + std::string(fields[3]) + "'", line_no);
    }
    if (!seen.insert(e.id).second) throw ManifestError("duplicate id '" + e.id + "'", line_no);
    m.entries.push_back(std::move(e));
  }
  if (!header_seen) throw ManifestError("expected header 'id,path,label,group'", 1);
  return m;
}

std::string serialize(const Manifest& m) {
  std::string out = "id,path,label,group\n";
  for (const auto& e : m.entries) {
    out += e.id + ',' + e.path + ',' + std::string(to_string(e.label)) + ',' + std::to_string(e.group) + '\n';
  }
  return out;
}

Manifest filter_group(const Manifest& m, int group) {
  Manifest out;
  std::copy_if(m.entries.begin(), m.entries.end(), std::back_inserter(out.entries),
               [group](const ManifestEntry& e) { return e.group == group; });
  return out;
}

void validate(const LabeledDataset& data) {
  if (data.size() < 3) throw std::invalid_argument("dataset needs at least 3 entries");
  std::unordered_set<std::string> ids;
  bool pos = false;
  bool neg = false;
  for (const auto& e : data.entries) {
    if (!ids.insert(e.id).second) throw std::invalid_argument("duplicate sample id '" + e.id + "'");
    (e.label == Label::Adulterated ? pos : neg) = true;
  }
  if (!pos || !neg) throw std::invalid_argument("dataset must contain both labels");
}

LabeledDataset load_images(const Manifest& m, const std::filesystem::path& base_dir) {
  LabeledDataset out;
  out.entries.reserve(m.size());
  for (const auto& e : m.entries) {
    std::filesystem::path p(e.path);
    if (p.is_relative()) p = base_dir / p;
    const auto bytes = read_file(p.string());
    GrayImage img;
    try {
      img = decode_gray(bytes);
    } catch (const ImageFormatError& err) {
      throw ImageFormatError(p.string() + ": " + err.what(), err.offset());
    }
    out.entries.push_back({e.id, std::move(img), e.label, e.group});
  }
  return out;
}

void validate(const SyntheticSpec& spec) {
  if (spec.per_class < 2) throw std::invalid_argument("per_class must be at least 2");
  if (spec.width < 8 || spec.height < 8) throw std::invalid_argument("synthetic images must be at least 8x8");
  if (spec.smoothing_radius < 0) throw std::invalid_argument("smoothing radius must be non-negative");
  if (spec.per_class > 999) throw std::invalid_argument("per_class must be at most 999");
}

GrayImage box_blur(const GrayImage& img, int radius) {
  if (radius == 0) return img;
  const int w = img.width();
  const int h = img.height();
  const int window = (2 * radius + 1) * (2 * radius + 1);
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int sum = 0;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int yy = std::clamp(y + dy, 0, h - 1);
        for (int dx = -radius; dx <= radius; ++dx) sum += img(yy, std::clamp(x + dx, 0, w - 1));
      }
      out(y, x) = static_cast<std::uint8_t>((2 * sum + window) / (2 * window));
    }
  }
  return out;
}

LabeledDataset SyntheticDataset::labeled() const {
  LabeledDataset out;
  for (std::size_t k = 0; k < images.size(); ++k) {
    const auto& e = manifest.entries[k];
    out.entries.push_back({e.id, images[k], e.label, e.group});
  }
  return out;
}

SyntheticDataset generate_synthetic(const SyntheticSpec& spec) {
  validate(spec);
  SplitMix64 rng(spec.seed);
  SyntheticDataset out;
  const auto pixels = static_cast<std::size_t>(spec.width) * static_cast<std::size_t>(spec.height);

  for (int k = 0; k < spec.per_class; ++k) {
    GrayImage noise(spec.width, spec.height);
    for (std::size_t i = 0; i < pixels; ++i) noise.pixels().data()[i] = static_cast<std::uint8_t>(rng() >> 56);
    GrayImage normal = box_blur(noise, spec.smoothing_radius);

    GrayImage twin = normal;
    auto* px = twin.pixels().data();
    for (std::size_t i = pixels - 1; i > 0; --i) std::swap(px[i], px[rng() % (i + 1)]);

    if (!(gray_histogram(normal) == gray_histogram(twin))) {
      throw std::logic_error("synthetic twin does not preserve the gray histogram");
    }

    char suffix[16];
    std::snprintf(suffix, sizeof suffix, "%03d", k);
    for (auto [label, img] : {std::pair{Label::Normal, &normal}, std::pair{Label::Adulterated, &twin}}) {
      std::string id = std::string(to_string(label)) + "_" + suffix;
      out.manifest.entries.push_back({id, id + ".pgm", label, 1});
      out.images.push_back(std::move(*img));
    }
  }
  return out;
}

}  // namespace lbpscreen

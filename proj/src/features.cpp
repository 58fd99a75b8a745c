#include "lbpscreen/features.hpp"

#include <array>
#include <string>

namespace lbpscreen {

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Lbp: return "LBP";
    case FeatureKind::Gray: return "GRAY";
    case FeatureKind::Concat: return "CONCAT";
  }
  return "?";
}

FeatureKind parse_feature_kind(std::string_view token) {
  if (token == "LBP" || token == "lbp") return FeatureKind::Lbp;
  if (token == "GRAY" || token == "gray") return FeatureKind::Gray;
  if (token == "CONCAT" || token == "concat") return FeatureKind::Concat;
  throw std::invalid_argument("unknown feature kind '" + std::string(token) + "'");
}

std::string_view to_string(Comparator cmp) {
  return cmp == Comparator::StrictGreater ? "gt" : "ge";
}

namespace {

// (row offset, column offset) for bits 7 down to 0.
constexpr std::array<std::array<int, 2>, 8> kNeighbors{{
    {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}}};

template <bool Strict>
void encode_interior(const PixelMatrix& px, PixelMatrix& codes) {
  for (Eigen::Index i = 1; i + 1 < px.rows(); ++i) {
    for (Eigen::Index j = 1; j + 1 < px.cols(); ++j) {
      const int center = px(i, j);
      unsigned code = 0;
      for (std::size_t k = 0; k < kNeighbors.size(); ++k) {
        const int g = px(i + kNeighbors[k][0], j + kNeighbors[k][1]);
        const bool bit = Strict ? g > center : g >= center;
        code |= static_cast<unsigned>(bit) << (7 - k);
      }
      codes(i - 1, j - 1) = static_cast<std::uint8_t>(code);
    }
  }
}

}  // namespace

LbpMatrix lbp_transform(const GrayImage& img, Comparator cmp) {
  if (img.width() < 3 || img.height() < 3) {
    throw std::invalid_argument("LBP needs an image of at least 3x3 pixels");
  }
  LbpMatrix out{PixelMatrix(img.height() - 2, img.width() - 2)};
  if (cmp == Comparator::StrictGreater) {
    encode_interior<true>(img.pixels(), out.codes);
  } else {
    encode_interior<false>(img.pixels(), out.codes);
  }
  return out;
}

namespace {

Histogram256 count(const PixelMatrix& m) {
  Histogram256 h;
  for (Eigen::Index k = 0; k < m.size(); ++k) ++h.bins(m.data()[k]);
  return h;
}

}  // namespace

Histogram256 lbp_histogram(const LbpMatrix& m) { return count(m.codes); }

Histogram256 gray_histogram(const GrayImage& img) { return count(img.pixels()); }

FeatureVector extract_features(const GrayImage& img, FeatureKind kind, const FeatureOptions& opts) {
  switch (kind) {
    case FeatureKind::Lbp:
      return normalize(lbp_histogram(lbp_transform(img, opts.comparator)), kind, opts.normalization);
    case FeatureKind::Gray:
      return normalize(gray_histogram(img), kind, opts.normalization);
    case FeatureKind::Concat:
      return concat(extract_features(img, FeatureKind::Lbp, opts),
                    extract_features(img, FeatureKind::Gray, opts));
  }
  throw std::invalid_argument("unknown feature kind");
}

}  // namespace lbpscreen

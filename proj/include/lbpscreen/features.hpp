#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>

#include <Eigen/Core>

#include "lbpscreen/image.hpp"

namespace lbpscreen {

/// Tie rule for neighbor-versus-center thresholding.
///
/// StrictGreater sets a bit only when the neighbor exceeds the center, as the
/// classic OpenCV-style loop does. GreaterEqual sets it on ties too, which is
/// the textbook step function s(x) = [x >= 0].
enum class Comparator { StrictGreater, GreaterEqual };

enum class FeatureKind { Lbp, Gray, Concat };

/// How a 256-bin histogram becomes a feature block.
enum class Normalization { L1, RawCounts };

std::string_view to_string(FeatureKind kind);
FeatureKind parse_feature_kind(std::string_view token);
std::string_view to_string(Comparator cmp);

/// Length of a feature vector of the given kind: 256, or 512 for Concat.
constexpr Eigen::Index feature_length(FeatureKind kind) {
  return kind == FeatureKind::Concat ? 512 : 256;
}

/// Interior LBP codes of an image; (H-2) rows by (W-2) columns.
struct LbpMatrix {
  PixelMatrix codes;

  int width() const { return static_cast<int>(codes.cols()); }
  int height() const { return static_cast<int>(codes.rows()); }
};

struct Histogram256 {
  Eigen::Matrix<std::int64_t, 256, 1> bins = Eigen::Matrix<std::int64_t, 256, 1>::Zero();

  std::int64_t total() const { return bins.sum(); }
  friend bool operator==(const Histogram256& a, const Histogram256& b) { return a.bins == b.bins; }
};

template <typename Scalar>
struct BasicFeatureVector {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  FeatureKind kind = FeatureKind::Lbp;
  Vector values;

  Eigen::Index size() const { return values.size(); }
  friend bool operator==(const BasicFeatureVector& a, const BasicFeatureVector& b) {
    return a.kind == b.kind && a.values.size() == b.values.size() && a.values == b.values;
  }
};

using FeatureVector = BasicFeatureVector<double>;

/// Canonical 3x3 LBP over the image interior.
///
/// Bit layout, most significant first: NW(7), N(6), NE(5), E(4), SE(3), S(2),
/// SW(1), W(0). Border pixels produce no code. Throws std::invalid_argument
/// for images smaller than 3x3.
LbpMatrix lbp_transform(const GrayImage& img, Comparator cmp = Comparator::StrictGreater);

Histogram256 lbp_histogram(const LbpMatrix& m);
Histogram256 gray_histogram(const GrayImage& img);

/// Histogram to a 256-value feature block. L1 divides every bin by the total
/// and throws std::invalid_argument for an empty histogram.
template <typename Scalar = double>
BasicFeatureVector<Scalar> normalize(const Histogram256& h, FeatureKind kind,
                                     Normalization mode = Normalization::L1) {
  if (kind == FeatureKind::Concat) {
    throw std::invalid_argument("a single histogram cannot produce a CONCAT feature");
  }
  const std::int64_t total = h.total();
  if (total <= 0) throw std::invalid_argument("cannot normalize an empty histogram");
  BasicFeatureVector<Scalar> out;
  out.kind = kind;
  out.values = h.bins.template cast<Scalar>();
  if (mode == Normalization::L1) out.values /= static_cast<Scalar>(total);
  return out;
}

template <typename Scalar = double>
BasicFeatureVector<Scalar> normalize_l1(const Histogram256& h, FeatureKind kind) {
  return normalize<Scalar>(h, kind, Normalization::L1);
}

/// LBP block followed by the GRAY block; no renormalization.
template <typename Scalar>
BasicFeatureVector<Scalar> concat(const BasicFeatureVector<Scalar>& lbp,
                                  const BasicFeatureVector<Scalar>& gray) {
  if (lbp.kind != FeatureKind::Lbp || gray.kind != FeatureKind::Gray) {
    throw std::invalid_argument("concat expects an LBP block followed by a GRAY block");
  }
  if (lbp.size() != 256 || gray.size() != 256) {
    throw std::invalid_argument("concat expects two 256-value blocks");
  }
  BasicFeatureVector<Scalar> out;
  out.kind = FeatureKind::Concat;
  out.values.resize(512);
  out.values << lbp.values, gray.values;
  return out;
}

struct FeatureOptions {
  Comparator comparator = Comparator::StrictGreater;
  Normalization normalization = Normalization::L1;
};

/// Full extraction for one image at its current resolution.
FeatureVector extract_features(const GrayImage& img, FeatureKind kind, const FeatureOptions& opts = {});

}  // namespace lbpscreen

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace lbpscreen {

/// Row-major 8-bit raster; rows() is the image height, cols() the width.
using PixelMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Resolution {
  int width = 0;
  int height = 0;

  friend bool operator==(const Resolution&, const Resolution&) = default;
};

/// Throws std::invalid_argument unless both sides are at least 3 pixels.
void validate(const Resolution& r);

class GrayImage {
 public:
  GrayImage() = default;
  /// Zero-filled image; throws std::invalid_argument on a zero or negative side.
  GrayImage(int width, int height);
  explicit GrayImage(PixelMatrix pixels);
  /// Builds from a row-major pixel list of exactly width * height values.
  static GrayImage from_row_major(int width, int height, std::span<const std::uint8_t> pixels);

  int width() const { return static_cast<int>(pixels_.cols()); }
  int height() const { return static_cast<int>(pixels_.rows()); }
  Resolution resolution() const { return {width(), height()}; }

  std::uint8_t operator()(int row, int col) const { return pixels_(row, col); }
  std::uint8_t& operator()(int row, int col) { return pixels_(row, col); }

  const PixelMatrix& pixels() const { return pixels_; }
  PixelMatrix& pixels() { return pixels_; }
  std::span<const std::uint8_t> data() const {
    return {pixels_.data(), static_cast<std::size_t>(pixels_.size())};
  }

  friend bool operator==(const GrayImage& a, const GrayImage& b) {
    return a.pixels_.rows() == b.pixels_.rows() && a.pixels_.cols() == b.pixels_.cols() &&
           a.pixels_ == b.pixels_;
  }

 private:
  PixelMatrix pixels_;
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

class RgbImage {
 public:
  RgbImage(int width, int height);
  RgbImage(int width, int height, std::vector<Rgb> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  const Rgb& at(int row, int col) const { return pixels_[index(row, col)]; }
  Rgb& at(int row, int col) { return pixels_[index(row, col)]; }
  std::span<const Rgb> data() const { return pixels_; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int width_;
  int height_;
  std::vector<Rgb> pixels_;
};

using DecodedImage = std::variant<GrayImage, RgbImage>;

/// Netpbm parse failure; offset() is the byte position where decoding stopped.
class ImageFormatError : public std::runtime_error {
 public:
  ImageFormatError(const std::string& what, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Decodes P2/P5 graymaps and P3/P6 pixmaps with maxval 255.
/// Header fields are whitespace separated; `#` comments are skipped. Binary
/// payloads start after exactly one whitespace byte following maxval.
DecodedImage decode_image(std::span<const std::uint8_t> bytes);

/// Decodes and converts pixmaps to grayscale.
GrayImage decode_gray(std::span<const std::uint8_t> bytes);

/// Binary graymap: the header `P5 <w> <h> 255\n` followed by the row-major payload.
std::vector<std::uint8_t> encode_pgm(const GrayImage& img);

/// BT.601 luma with round-half-up.
std::uint8_t luma(Rgb px);
GrayImage to_grayscale(const RgbImage& img);

/// Bilinear resampling with pixel-center alignment and edge clamping. Any
/// positive target is accepted; feature extraction needs at least 3x3.
GrayImage resize_bilinear(const GrayImage& img, Resolution target);

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace lbpscreen

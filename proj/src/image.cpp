#include "lbpscreen/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

namespace lbpscreen {

void validate(const Resolution& r) {
  if (r.width < 3 || r.height < 3) {
    throw std::invalid_argument("resolution must be at least 3x3, got " + std::to_string(r.width) +
                                "x" + std::to_string(r.height));
  }
}

GrayImage::GrayImage(int width, int height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("image dimensions must be positive");
  }
  pixels_ = PixelMatrix::Zero(height, width);
}

GrayImage::GrayImage(PixelMatrix pixels) : pixels_(std::move(pixels)) {
  if (pixels_.rows() < 1 || pixels_.cols() < 1) {
    throw std::invalid_argument("image dimensions must be positive");
  }
}

GrayImage GrayImage::from_row_major(int width, int height, std::span<const std::uint8_t> pixels) {
  GrayImage img(width, height);
  if (pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("pixel count does not match width * height");
  }
  std::copy(pixels.begin(), pixels.end(), img.pixels_.data());
  return img;
}

RgbImage::RgbImage(int width, int height)
    : RgbImage(width, height,
               std::vector<Rgb>(static_cast<std::size_t>(std::max(width, 0)) *
                                static_cast<std::size_t>(std::max(height, 0)))) {}

RgbImage::RgbImage(int width, int height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("image dimensions must be positive");
  }
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("pixel count does not match width * height");
  }
}

ImageFormatError::ImageFormatError(const std::string& what, std::size_t offset)
    : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}

namespace {

bool is_space(std::uint8_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  // Unsigned decimal header field.
  int read_uint(const char* field) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    long long value = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000) throw ImageFormatError(std::string(field) + " is too large", start);
      ++pos_;
    }
    if (pos_ == start) {
      if (pos_ >= bytes_.size()) {
        throw ImageFormatError(std::string("truncated header: missing ") + field, pos_);
      }
      throw ImageFormatError(std::string("malformed header: expected ") + field, pos_);
    }
    return static_cast<int>(value);
  }

  std::uint8_t next_byte() { return bytes_[pos_++]; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

DecodedImage decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2) throw ImageFormatError("truncated header: missing magic", 0);
  if (bytes[0] != 'P' || bytes[1] < '2' || bytes[1] > '6' || bytes[1] == '4') {
    throw ImageFormatError("malformed header: unsupported magic number", 0);
  }
  const char kind = static_cast<char>(bytes[1]);
  const bool ascii = kind == '2' || kind == '3';
  const bool color = kind == '3' || kind == '6';

  Reader in(bytes);
  in.next_byte();
  in.next_byte();
  if (in.remaining() > 0 && !is_space(bytes[in.pos()]) && bytes[in.pos()] != '#') {
    throw ImageFormatError("malformed header: magic number must be followed by whitespace", 2);
  }

  in.skip_space_and_comments();
  const std::size_t width_at = in.pos();
  const int width = in.read_uint("width");
  const int height = in.read_uint("height");
  if (width == 0 || height == 0) throw ImageFormatError("zero image dimension", width_at);
  in.skip_space_and_comments();
  const std::size_t maxval_at = in.pos();
  const int maxval = in.read_uint("maxval");
  if (maxval != 255) {
    throw ImageFormatError("unsupported maxval " + std::to_string(maxval) + " (only 255)", maxval_at);
  }

  const std::size_t samples = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
                              (color ? 3u : 1u);
  std::vector<std::uint8_t> payload(samples);
  if (ascii) {
    for (auto& s : payload) {
      const std::size_t at = in.pos();
      const int v = in.read_uint("sample");
      if (v > 255) throw ImageFormatError("sample exceeds maxval", at);
      s = static_cast<std::uint8_t>(v);
    }
  } else {
    if (in.remaining() == 0 || !is_space(bytes[in.pos()])) {
      throw ImageFormatError("malformed header: maxval must be followed by one whitespace byte",
                             in.pos());
    }
    in.next_byte();
    if (in.remaining() < samples) {
      throw ImageFormatError("truncated payload: expected " + std::to_string(samples) +
                                 " bytes, found " + std::to_string(in.remaining()),
                             bytes.size());
    }
    for (auto& s : payload) s = in.next_byte();
  }

  if (!color) return GrayImage::from_row_major(width, height, payload);
  std::vector<Rgb> pixels(payload.size() / 3);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    pixels[i] = {payload[3 * i], payload[3 * i + 1], payload[3 * i + 2]};
  }
  return RgbImage(width, height, std::move(pixels));
}

GrayImage decode_gray(std::span<const std::uint8_t> bytes) {
  auto decoded = decode_image(bytes);
  if (auto* gray = std::get_if<GrayImage>(&decoded)) return std::move(*gray);
  return to_grayscale(std::get<RgbImage>(decoded));
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
  const std::string header =
      "P5 " + std::to_string(img.width()) + " " + std::to_string(img.height()) + " 255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const auto data = img.data();
  out.insert(out.end(), data.begin(), data.end());
  return out;
}

std::uint8_t luma(Rgb px) {
  // Integer weights per mille; +500 rounds half up.
  const int scaled = 299 * px.r + 587 * px.g + 114 * px.b;
  return static_cast<std::uint8_t>(std::clamp((scaled + 500) / 1000, 0, 255));
}

GrayImage to_grayscale(const RgbImage& img) {
  GrayImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) out(y, x) = luma(img.at(y, x));
  }
  return out;
}

namespace {

// Source position of a destination index as lo + frac / den, computed exactly:
// s = ((2i + 1) * src - dst) / (2 * dst), clamped to [0, src - 1].
struct Tap {
  int lo;
  int hi;
  std::int64_t frac;
};

std::vector<Tap> taps(int src, int dst) {
  const std::int64_t den = 2 * static_cast<std::int64_t>(dst);
  const std::int64_t max_num = static_cast<std::int64_t>(src - 1) * den;
  std::vector<Tap> out(static_cast<std::size_t>(dst));
  for (int i = 0; i < dst; ++i) {
    const std::int64_t num =
        std::clamp<std::int64_t>((2 * static_cast<std::int64_t>(i) + 1) * src - dst, 0, max_num);
    const int lo = static_cast<int>(num / den);
    out[static_cast<std::size_t>(i)] = {lo, std::min(lo + 1, src - 1), num - lo * den};
  }
  return out;
}

}  // namespace

GrayImage resize_bilinear(const GrayImage& img, Resolution target) {
  if (target.width < 1 || target.height < 1) {
    throw std::invalid_argument("resize target must be at least 1x1");
  }
  if (target == img.resolution()) return img;

  const auto xs = taps(img.width(), target.width);
  const auto ys = taps(img.height(), target.height);
  const std::int64_t dx = 2 * static_cast<std::int64_t>(target.width);
  const std::int64_t dy = 2 * static_cast<std::int64_t>(target.height);
  const std::int64_t scale = dx * dy;
  GrayImage out(target.width, target.height);
  for (int y = 0; y < target.height; ++y) {
    const Tap& ty = ys[static_cast<std::size_t>(y)];
    for (int x = 0; x < target.width; ++x) {
      const Tap& tx = xs[static_cast<std::size_t>(x)];
      const std::int64_t top = (dx - tx.frac) * img(ty.lo, tx.lo) + tx.frac * img(ty.lo, tx.hi);
      const std::int64_t bottom = (dx - tx.frac) * img(ty.hi, tx.lo) + tx.frac * img(ty.hi, tx.hi);
      const std::int64_t v = (dy - ty.frac) * top + ty.frac * bottom;
      // v / scale rounded half up.
      out(y, x) = static_cast<std::uint8_t>(std::clamp<std::int64_t>((2 * v + scale) / (2 * scale), 0, 255));
    }
  }
  return out;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace lbpscreen

#include "lbpscreen/text_io.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace lbpscreen {

std::string format_real(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("cannot serialize a non-finite value");
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, res.ptr};
}

double parse_real(std::string_view token) {
  double v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw std::invalid_argument("invalid number '" + std::string(token) + "'");
  }
  return v;
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string serialize(const FeatureVector& fv) {
  std::string out(to_string(fv.kind));
  for (Eigen::Index k = 0; k < fv.size(); ++k) {
    out += ',';
    out += format_real(fv.values(k));
  }
  return out;
}

FeatureVector parse_feature_vector(std::string_view line) {
  const auto fields = split(line);
  FeatureVector fv;
  fv.kind = parse_feature_kind(fields.front());
  const auto n = static_cast<Eigen::Index>(fields.size() - 1);
  if (n != feature_length(fv.kind)) {
    throw std::invalid_argument("feature vector of kind " + std::string(to_string(fv.kind)) +
                                " needs " + std::to_string(feature_length(fv.kind)) + " values, got " +
                                std::to_string(n));
  }
  fv.values.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) fv.values(k) = parse_real(fields[static_cast<std::size_t>(k) + 1]);
  return fv;
}

std::string serialize(const LinearModel& model) {
  std::string out = std::to_string(model.dimension());
  out += ',';
  out += to_string(model.kind);
  out += ',';
  out += format_real(model.bias);
  for (Eigen::Index k = 0; k < model.dimension(); ++k) {
    out += ',';
    out += format_real(model.weights(k));
  }
  return out;
}

LinearModel parse_model(std::string_view line) {
  const auto fields = split(line);
  if (fields.size() < 3) throw std::invalid_argument("model line needs dimension, kind and bias");
  long long dim = 0;
  const auto d = fields[0];
  const auto res = std::from_chars(d.data(), d.data() + d.size(), dim);
  if (res.ec != std::errc() || res.ptr != d.data() + d.size() || dim < 1) {
    throw std::invalid_argument("invalid model dimension '" + std::string(d) + "'");
  }
  if (fields.size() != static_cast<std::size_t>(dim) + 3) {
    throw std::invalid_argument("model declares dimension " + std::to_string(dim) + " but carries " +
                                std::to_string(fields.size() - 3) + " weights");
  }
  LinearModel m;
  m.kind = parse_feature_kind(fields[1]);
  m.bias = parse_real(fields[2]);
  m.weights.resize(dim);
  for (Eigen::Index k = 0; k < dim; ++k) m.weights(k) = parse_real(fields[static_cast<std::size_t>(k) + 3]);
  return m;
}

}  // namespace lbpscreen

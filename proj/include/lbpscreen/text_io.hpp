#pragma once

#include <string>
#include <string_view>

#include "lbpscreen/classifier.hpp"
#include "lbpscreen/features.hpp"

namespace lbpscreen {

/// 17 significant digits, enough to round-trip any double.
std::string format_real(double v);
double parse_real(std::string_view token);

/// `kind,v0,v1,...` on one line, without a trailing newline.
std::string serialize(const FeatureVector& fv);
FeatureVector parse_feature_vector(std::string_view line);

/// `dimension,kind,bias,w0,...,w{d-1}` on one line, without a trailing newline.
std::string serialize(const LinearModel& model);
LinearModel parse_model(std::string_view line);

}  // namespace lbpscreen

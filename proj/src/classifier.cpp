#include "lbpscreen/classifier.hpp"

namespace lbpscreen {

std::string_view to_string(Label label) {
  return label == Label::Adulterated ? "adulterated" : "normal";
}

Label parse_label(std::string_view token) {
  if (token == "adulterated") return Label::Adulterated;
  if (token == "normal") return Label::Normal;
  throw std::invalid_argument("unknown label '" + std::string(token) + "'");
}

void validate(const SolverConfig& cfg) {
  if (!(cfg.c > 0) || !std::isfinite(cfg.c)) throw std::invalid_argument("C must be positive");
  if (cfg.max_outer_iterations <= 0) {
    throw std::invalid_argument("max_outer_iterations must be positive");
  }
  if (!(cfg.tolerance > 0) || !std::isfinite(cfg.tolerance)) {
    throw std::invalid_argument("tolerance must be positive");
  }
}

}  // namespace lbpscreen

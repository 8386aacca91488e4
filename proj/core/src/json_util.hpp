#pragma once

#include <cmath>

#include <nlohmann/json.hpp>

namespace steerwork::detail {

// JSON has no infinity; beta = +inf is written as the string "inf".
inline nlohmann::json beta_json(double beta) {
  if (std::isinf(beta)) return "inf";
  return beta;
}

}  // namespace steerwork::detail

#include "fieldtrend/rng.hpp"

#include <cmath>
#include <numbers>

namespace fieldtrend {

double SplitMix64::normal() noexcept {
  const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace fieldtrend

#include "steerwork/random.hpp"

#include <cmath>
#include <numbers>

namespace steerwork {

double SplitMix64::normal() {
  // 1 - u lies in (0, 1], keeping the logarithm finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  SplitMix64 mix(master ^ 0x5851f42d4c957f2dULL);
  const std::uint64_t base = mix();
  SplitMix64 child(base + stream * 0xd1342543de82ef95ULL);
  return child();
}

PureState random_pure_state(std::size_t dim, SplitMix64& rng) {
  ComplexVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = Complex(rng.normal(), rng.normal());
  return PureState::normalized(v);
}

}  // namespace steerwork

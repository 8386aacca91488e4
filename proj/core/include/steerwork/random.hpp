#pragma once

#include <cstdint>

#include "steerwork/qmath.hpp"

namespace steerwork {

// SplitMix64 (Steele, Lea, Flood). Small, seedable and splittable: independent
// streams are derived from a master seed by counter, so results never depend
// on the order in which streams are consumed.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller.
  double normal();

 private:
  std::uint64_t state_;
};

// Seed of stream `stream` under master seed `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Haar-random pure state (normalized complex Gaussian vector).
PureState random_pure_state(std::size_t dim, SplitMix64& rng);

}  // namespace steerwork

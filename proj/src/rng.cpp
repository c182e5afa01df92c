#include "volterra/rng.hpp"

#include <cmath>
#include <numbers>

namespace volterra {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t SplitMix64::next_u64() {
  state_ += kGolden;
  return mix(state_);
}

double SplitMix64::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_open_uniform() {
  // (x + 0.5) / 2^53 lies in (0, 1) strictly.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double SplitMix64::next_normal() {
  const double u1 = next_open_uniform();
  const double u2 = next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double SplitMix64::next_exponential(double rate) {
  return -std::log(next_open_uniform()) / rate;
}

std::uint64_t SplitMix64::derive_stream(std::uint64_t seed,
                                        std::uint64_t stream) {
  return mix(mix(seed + kGolden * (stream + 1)) + kGolden);
}

}  // namespace volterra

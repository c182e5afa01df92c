#pragma once

#include <cstdint>

namespace volterra {

/// SplitMix64: a counter-based 64-bit generator (Steele, Lea & Flood).
/// Every draw is a fixed avalanche of an incrementing counter, so a stream
/// is fully determined by its seed and the number of draws consumed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double next_uniform();

  /// Uniform on (0, 1); safe as a log() argument.
  double next_open_uniform();

  /// Standard normal via Box-Muller (consumes two uniforms).
  double next_normal();

  /// Exponential with the given rate.
  double next_exponential(double rate);

  /// Decorrelated seed for stream index `stream` under a base seed.
  /// Used to give each replica its own independent generator.
  static std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t state_;
};

}  // namespace volterra

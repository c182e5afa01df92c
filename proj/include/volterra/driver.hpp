#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "volterra/rng.hpp"

namespace volterra {

enum class DriverKind {
  compound_poisson,
  cp_with_drift,
  cp_with_diffusion,
  deterministic_jumps,
};

enum class JumpLawKind { normal, uniform, two_point };

struct JumpLaw {
  JumpLawKind kind = JumpLawKind::normal;
  double mu = 0.0, sigma = 1.0;   // normal
  double a = 0.0, b = 0.0;        // uniform on [a, b]
  double p = 0.5, x1 = 0.0, x2 = 0.0;  // x1 with prob p, else x2

  double mean() const;
  double variance() const;
  double sample(SplitMix64& rng) const;
};

struct DriverSpec {
  DriverKind kind = DriverKind::compound_poisson;
  double jump_intensity = 0.0;
  JumpLaw jump_law;
  double drift_rate = 0.0;
  double diffusion_vol = 0.0;
  double diffusion_grid_step = 1e-4;
  std::uint64_t seed = 0;
  // deterministic_jumps only
  std::vector<double> jump_times;
  std::vector<double> jump_sizes;

  /// Throws std::invalid_argument on an inconsistent spec.
  void validate() const;
  /// Extra requirements for use as a fractional driver: centered jump law,
  /// finite variance, no drift, no Brownian component.
  void validate_fractional() const;
};

/// Brownian part sampled on a uniform grid, linearly interpolated between
/// samples. samples[i] is the value at begin + i * step.
struct DiffusionSamples {
  double begin = 0.0;
  double step = 0.0;
  std::vector<double> samples;

  double value(double t) const;
};

/// A realized cadlag driver trajectory: sorted jumps plus linear drift and
/// an optional sampled Brownian part. Supports exact X(t), X(t-) and
/// jump queries; X(0) = X(0-) = 0 by construction.
class CadlagPath {
 public:
  CadlagPath(double t_begin, double t_end, std::vector<double> jump_times,
             std::vector<double> jump_sizes, double drift_rate,
             std::optional<DiffusionSamples> diffusion);

  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }
  double drift_rate() const { return drift_rate_; }
  std::span<const double> jump_times() const { return jump_times_; }
  std::span<const double> jump_sizes() const { return jump_sizes_; }
  const std::optional<DiffusionSamples>& diffusion() const {
    return diffusion_;
  }

  /// X(t).
  double value(double t) const;
  /// X(t-).
  double left_value(double t) const;
  /// X(t) - X(t-); zero off the jump set.
  double jump_at(double t) const;
  /// Sup of |X| over [lo, hi]; exact for drift + jumps, grid-resolved for
  /// the Brownian part.
  double sup_norm(double lo, double hi) const;

  /// Compact JSON record {jump_times, jump_sizes, drift_rate, grid_step,
  /// diffusion_samples}.
  std::string to_json() const;
  /// Columns: kind, time, value.
  void write_csv(std::ostream& os) const;

 private:
  double t_begin_, t_end_;
  std::vector<double> jump_times_, jump_sizes_;
  std::vector<double> prefix_;  // prefix_[i] = sum of sizes of jumps < i
  double sum_at_origin_ = 0.0;  // jump sum up to and including time 0
  double drift_rate_;
  std::optional<DiffusionSamples> diffusion_;
};

/// Realizes a driver on [t_begin, t_end]. Identical (spec, horizon) pairs
/// produce identical paths.
CadlagPath simulate(const DriverSpec& spec, double t_begin, double t_end);

/// Two-sided path on [-T_neg, T_pos], L(0) = 0, built from independent
/// one-sided branches: L(t) = L1(t) for t >= 0 and L(t) = -L2((-t)-) for
/// t < 0.
CadlagPath make_two_sided(const DriverSpec& spec_pos,
                          const DriverSpec& spec_neg, double T_neg,
                          double T_pos);

/// Largest |jump| over jump times in [lo, hi]; 0 when there are none.
double sup_jump(const CadlagPath& path, double lo, double hi);

}  // namespace volterra

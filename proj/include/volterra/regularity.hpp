#pragma once

#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include "volterra/driver.hpp"
#include "volterra/kernel.hpp"

namespace volterra {

/// M-evaluation handle: t -> M(t).
using PathEval = std::function<double(double)>;

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LinearFit fit_linear(std::span<const double> xs, std::span<const double> ys);

/// Normalized increment ratios (M(s+h) - M(s)) / F(s+h, s) at one probe
/// time for every h, with the limit estimated two ways: the raw smallest-h
/// ratio and a first-order Richardson extrapolation from the last two.
struct PointwiseProbe {
  double s = 0.0;
  std::vector<double> ratios;
  double raw_last = 0.0;
  double richardson = 0.0;
  double jump_truth = 0.0;  // driver jump at s
};

struct PointwiseReport {
  std::vector<double> h_schedule;
  std::vector<PointwiseProbe> probes;

  /// Columns: probe, h, ratio, truth.
  void write_csv(std::ostream& os) const;
};

PointwiseReport pointwise_ratio_scan(const Kernel& k, const CadlagPath& x,
                                     const PathEval& m_eval,
                                     std::span<const double> probes,
                                     std::span<const double> h_schedule);

/// Per h: sup of |M(t) - M(s)| / F(t, s) over pairs with |t - s| <= h.
/// The pair set always contains a straddle (tau, tau + h(1 - 1e-9)) for
/// every jump tau, plus a low-discrepancy pair stream of size pair_budget.
struct UniformReport {
  std::vector<double> h_schedule;
  std::vector<double> sup_ratios;
  double sup_jump_truth = 0.0;

  /// Columns: h, uniform_ratio, sup_jump.
  void write_csv(std::ostream& os) const;
};

UniformReport uniform_modulus_scan(const Kernel& k, const CadlagPath& x,
                                   const PathEval& m_eval,
                                   std::span<const double> h_schedule,
                                   std::size_t pair_budget);

/// Dyadic modulus-of-continuity fit on a uniform-grid path: computes
/// w(h) = max_{|i-j| dt <= h} |v_i - v_j| for window sizes 4, 8, ...,
/// 4 * 2^(levels-1) grid steps and regresses log w on log h.
struct HolderFit {
  bool degenerate = false;  // constant path: no slope to report
  double slope = 0.0;
  double r2 = 0.0;
  std::vector<double> h;       // window width in time units
  std::vector<double> modulus; // w(h)

  /// Columns: level, h, modulus, slope, r2.
  void write_csv(std::ostream& os) const;
};

HolderFit holder_exponent(std::span<const double> values, double time_span,
                          int dyadic_levels);

}  // namespace volterra

#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "volterra/driver.hpp"

namespace volterra {

/// Fractional path M_d on a grid, split into the on-interval part M1
/// (moving average over [0, t]) and the history part M2 (over [-T, 0]).
struct FracLevyPath {
  double d = 0.0;
  std::vector<double> grid;
  std::vector<double> values;     // m1 + m2 pointwise
  std::vector<double> m1_values;
  std::vector<double> m2_values;
  double truncation_T = 0.0;
  double truncation_bound = 0.0;  // NaN when no moment record was supplied

  /// Columns: t, M, M1, M2.
  void write_csv(std::ostream& os) const;
};

/// Evaluates the moving-average representation
///   M_d(t) = 1/Gamma(d) int [(t-r)_+^{d-1} - (-r)_+^{d-1}] L(r) dr
/// on the grid, truncating the history integral at -T. The driver must be
/// pure-jump and centered (no drift, no Brownian part), so every integral
/// reduces to exact per-segment antiderivatives.
///
/// `second_moment` is E[L(1)^2]; when supplied (> 0) the reported
/// truncation_bound is the tail envelope at delta_max = grid spacing.
FracLevyPath eval_fraclevy(const CadlagPath& l, double d,
                           std::span<const double> grid, double T,
                           double second_moment = 0.0);

/// Conservative bound on the neglected tail's contribution to increments
/// |M(t + delta) - M(t)| for |delta| <= delta_max, using the growth
/// envelope |L(-u)| <= 2 sqrt(E[L(1)^2]) u^(1/2 + eps) with eps = 0.01:
///   bound = 2 sqrt(m2) (1-d) delta_max (t+T)^(d-1/2+eps) / ((1/2-eps-d) Gamma(d)).
/// Linear in delta_max and decreasing in T by construction.
double truncation_tail_bound(double second_moment, double d, double t,
                             double T, double delta_max);

/// Smallest T from {5, 10, 20, ...} with
/// truncation_tail_bound(..., delta_max) <= 1e-3 * sqrt(second_moment).
double default_truncation_T(double second_moment, double d, double t_max,
                            double delta_max);

/// Realized history increment
///   1/Gamma(d) int_{l.t_begin}^{a} [(t+delta-r)^{d-1} - (t-r)^{d-1}] L(r) dr
/// for a <= 0 < t, evaluated exactly per segment. Used to measure how the
/// neglected tail actually moves with delta.
double tail_increment(const CadlagPath& l, double d, double t, double a,
                      double delta);

}  // namespace volterra

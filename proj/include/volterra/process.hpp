#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "volterra/driver.hpp"
#include "volterra/kernel.hpp"
#include "volterra/quadrature.hpp"

namespace volterra {

/// M(t) = int_0^t F(t, r) dX(r), evaluated one time point at a time.
///
/// `eval_direct` sums F(t, tau) * jump over the jump times (exact), adds
/// the drift integral by quadrature and the Brownian part as a grid
/// Riemann-Stieltjes sum.
///
/// `eval_by_parts` returns -Y(t) with Y(t) = int_0^t dF/dr(t, r) X(r) dr.
/// For the piecewise-constant jump component the integral telescopes into
/// exact kernel differences, so the two routes agree to rounding for
/// pure-jump drivers; drift and diffusion parts are quadrature-limited.
double eval_direct(const Kernel& k, const CadlagPath& x, double t,
                   const QuadratureOptions& quad = {});
double eval_by_parts(const Kernel& k, const CadlagPath& x, double t,
                     const QuadratureOptions& quad = {});

/// Y(t) = int_0^t dF/dr(t, r) X(r) dr (the by-parts integrand).
double y_value(const Kernel& k, const CadlagPath& x, double t,
               const QuadratureOptions& quad = {});

enum class EvalMethod { direct, by_parts };

struct VolterraPath {
  std::vector<double> grid;
  std::vector<double> values;
  EvalMethod method = EvalMethod::direct;
  std::string kernel_id;
  std::string driver_id;

  /// Columns: t, value, method.
  void write_csv(std::ostream& os) const;
};

VolterraPath eval_on_grid(const Kernel& k, const CadlagPath& x,
                          std::span<const double> grid, EvalMethod method,
                          const QuadratureOptions& quad = {});

/// Y(t+delta) - Y(t) split into the fresh-interval part J1 and the
/// kernel-shift part J2:
///   J1 = delta * int_0^1 f(t+d, t+d-dv) X(t+d-dv) dv
///   J2 = delta * int_0^{t/d} [f(t+d, t-dv) - f(t, t-dv)] X(t-dv) dv.
struct IncrementDecomposition {
  double t = 0.0;
  double delta = 0.0;
  double j1 = 0.0;
  double j2 = 0.0;
  double total = 0.0;  // j1 + j2 as computed
};

IncrementDecomposition decompose_increment(const Kernel& k,
                                           const CadlagPath& x, double t,
                                           double delta,
                                           const QuadratureOptions& quad = {});

/// int_0^{t/delta} g_delta(t, v) X(t - delta v) dv; converges to
/// -X(t-)/rho as delta drops to 0.
double gdelta_functional(const Kernel& k, const CadlagPath& x, double t,
                         double delta, const QuadratureOptions& quad = {});

/// int_0^1 f_delta(t, v) X(t + delta(1 - v)) dv; converges to X(t)/rho.
double fdelta_functional(const Kernel& k, const CadlagPath& x, double t,
                         double delta, const QuadratureOptions& quad = {});

/// Columns: t, delta, J1, J2, total.
void write_decomposition_csv(std::ostream& os,
                             std::span<const IncrementDecomposition> rows);

}  // namespace volterra

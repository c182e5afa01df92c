#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace volterra {

/// Thrown when panel doubling hits the node cap before successive
/// estimates agree. Carries the offending interval in the message.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  std::size_t max_nodes = std::size_t{1} << 20;
  int panel_order = 16;
};

/// Gauss-Legendre nodes and weights on [-1, 1], computed once per order
/// by Newton iteration and cached.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(
    int order);

/// Integral of a smooth integrand over [a, b]. Fixed-order panels, panel
/// count doubled until successive estimates agree to rel_tol/abs_tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opt = {});

/// Integral over [0, length] of an integrand behaving like u^exponent as
/// u -> 0+ (exponent > -1). The substitution u = w^(1/(1+exponent)) turns
/// a pure power into a constant, so the transformed integrand is regular;
/// it is then handled by `integrate`.
double integrate_power_endpoint(const std::function<double(double)>& f,
                                double length, double exponent,
                                const QuadratureOptions& opt = {});

/// Integral over [a, b], 0 < a < b, for integrands that decay over many
/// decades. Splits [a, b] geometrically and sums per-octave integrals.
double integrate_geometric(const std::function<double(double)>& f, double a,
                           double b, const QuadratureOptions& opt = {});

}  // namespace volterra

#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "volterra/quadrature.hpp"

namespace volterra {

enum class KernelKind { power, power_log, user_defined };

/// Two-argument kernel F(t, r) on {r <= t} together with its partial
/// derivatives and its variation index rho. F must vanish on the diagonal
/// and be strictly positive for r < t. Built-in kernels carry analytic
/// partials; user-defined kernels may supply only F, in which case the
/// partials fall back to adaptive central differences.
class Kernel {
 public:
  using Fn2 = std::function<double(double, double)>;

  static Kernel power(double rho);
  static Kernel power_log(double rho, double eta);
  static Kernel user_defined(double rho, Fn2 eval);
  static Kernel user_defined(double rho, Fn2 eval, Fn2 d_dr, Fn2 d_dt,
                             Fn2 d2_dtdr, Fn2 d2_dr2);

  double index_rho() const { return rho_; }
  KernelKind kind() const { return kind_; }
  const std::string& id() const { return id_; }

  /// F(t, r); requires r <= t.
  double eval(double t, double r) const;
  /// f(t, r) = dF/dr; requires r < t.
  double d_dr(double t, double r) const;
  /// dF/dt; requires r < t.
  double d_dt(double t, double r) const;
  /// d2F/dtdr; requires r < t.
  double d2_dtdr(double t, double r) const;
  /// d2F/dr2; requires r < t.
  double d2_dr2(double t, double r) const;

  // Gap-based access, u = t - r. Near the diagonal the gap must be passed
  // directly: reconstructing it as t - (t - u) loses the digits the
  // singular integrands live on. Built-in kernels are native in u.
  double eval_gap(double t, double u) const;
  double d_dr_gap(double t, double u) const;
  double d_dt_gap(double t, double u) const;
  double d2_dtdr_gap(double t, double u) const;
  double d2_dr2_gap(double t, double u) const;

 private:
  Kernel() = default;

  double rho_ = 0.0;
  double eta_ = 0.0;
  KernelKind kind_ = KernelKind::user_defined;
  std::string id_;
  // stored in gap form: fn(t, u) with u = t - r
  Fn2 eval_, d_dr_, d_dt_, d2_dtdr_, d2_dr2_;
};

/// Residual trace of the diagonal-variation check for one condition.
struct ConditionTrace {
  std::vector<double> residuals;  // one per h, sup over the t-grid
  bool pass = false;
  std::string failure_reason;  // set when evaluation itself failed
};

/// Report of the four diagonal-variation conditions plus the F/(h f)
/// ratio check, over a decreasing h-schedule.
struct SmoothVariationReport {
  std::vector<double> h_schedule;
  ConditionTrace cond_a, cond_b, cond_c, cond_d;
  std::vector<double> ratio_residual;  // |F/(h f) + 1/rho|
  double tol = 0.0;

  bool all_pass() const {
    return cond_a.pass && cond_b.pass && cond_c.pass && cond_d.pass;
  }
  /// Columns: h, res_a, res_b, res_c, res_d, res_eq39.
  void write_csv(std::ostream& os) const;
};

/// Verdict convention shared by the convergence-style reports: the last
/// two residuals must sit below tol and the last three must be
/// non-increasing.
bool converged_verdict(const std::vector<double>& residuals, double tol);

/// Checks the four scaled derivative-ratio conditions of index rho on a
/// t-grid over [t_lo, t_hi] (64 interior points plus the endpoints) for
/// every h in the decreasing schedule.
SmoothVariationReport check_smooth_variation(const Kernel& k, double t_lo,
                                             double t_hi,
                                             const std::vector<double>& h_schedule,
                                             double tol);

/// g_delta(t, v) = (f(t+delta, t-delta v) - f(t, t-delta v)) / f(t+delta, t).
double g_delta(const Kernel& k, double t, double v, double delta);

/// f_delta(t, v) = f(t+delta, t+delta-delta v) / f(t+delta, t), v in [0, 1].
/// v = 0 touches the diagonal and is a domain error.
double f_delta(const Kernel& k, double t, double v, double delta);

/// Residual arrays for the integral limits of g_delta / f_delta along a
/// decreasing delta-schedule (sup over a t-grid).
struct IntegralDiagnostics {
  std::vector<double> delta_schedule;
  // g_delta: (a) tail integral of |g| over [h0/delta, t/delta];
  //          (b) |int_0^{h0/delta} g + 1/rho|;
  //          (c) |int_0^{t/delta} g + 1/rho|;
  //          (d) |int_0^{h0/delta} |g| - 1/rho|.
  // f_delta: (a) |int_0^1 |f| - 1/rho|; (b) |int_0^1 f - 1/rho|;
  //          (c)/(d) unused.
  ConditionTrace cond_a, cond_b, cond_c, cond_d;
  double h0 = 0.0;
  double tol = 0.0;
  void write_csv(std::ostream& os) const;
};

IntegralDiagnostics gdelta_integral_diagnostics(
    const Kernel& k, double t_lo, double t_hi, double h0,
    const std::vector<double>& delta_schedule, double tol,
    const QuadratureOptions& quad = {});

IntegralDiagnostics fdelta_integral_diagnostics(
    const Kernel& k, double t_lo, double t_hi,
    const std::vector<double>& delta_schedule, double tol,
    const QuadratureOptions& quad = {});

/// int_0^V g_delta(t, v) dv with the v^(rho-1) endpoint handled by the
/// power substitution; the long range is split geometrically.
double gdelta_integral(const Kernel& k, double t, double delta, double v_hi,
                       bool absolute_value, const QuadratureOptions& quad = {});

/// int_0^1 f_delta(t, v) dv, same endpoint treatment.
double fdelta_integral(const Kernel& k, double t, double delta,
                       bool absolute_value, const QuadratureOptions& quad = {});

}  // namespace volterra

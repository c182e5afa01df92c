#include "volterra/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace volterra {

namespace {

void require_rho(double rho) {
  if (!(rho > 0.0) || !(rho < 1.0)) {
    std::ostringstream msg;
    msg << "kernel index rho must lie in (0, 1), got " << rho;
    throw std::invalid_argument(msg.str());
  }
}

std::string fmt_id(const char* name, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s(%g)", name, a);
  return buf;
}

std::string fmt_id(const char* name, double a, double b) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s(%g,%g)", name, a, b);
  return buf;
}

// Power-log helpers working in the gap u = t - r, valid on (0, 1).
// With l(u) = -log(u) > 0:
//   F      = u^rho l^eta
//   dF/du  = u^(rho-1) l^(eta-1) (rho l - eta)
//   d2F/du2 = u^(rho-2) [rho(rho-1) l^eta - eta(2rho-1) l^(eta-1)
//             + eta(eta-1) l^(eta-2)]
double plog_value(double u, double rho, double eta) {
  const double l = -std::log(u);
  return std::pow(u, rho) * std::pow(l, eta);
}

double plog_du(double u, double rho, double eta) {
  const double l = -std::log(u);
  return std::pow(u, rho - 1.0) * std::pow(l, eta - 1.0) * (rho * l - eta);
}

double plog_du2(double u, double rho, double eta) {
  const double l = -std::log(u);
  return std::pow(u, rho - 2.0) *
         (rho * (rho - 1.0) * std::pow(l, eta) -
          eta * (2.0 * rho - 1.0) * std::pow(l, eta - 1.0) +
          eta * (eta - 1.0) * std::pow(l, eta - 2.0));
}

}  // namespace

Kernel Kernel::power(double rho) {
  require_rho(rho);
  Kernel k;
  k.rho_ = rho;
  k.kind_ = KernelKind::power;
  k.id_ = fmt_id("power", rho);
  k.eval_ = [rho](double, double u) { return std::pow(u, rho); };
  k.d_dr_ = [rho](double, double u) { return -rho * std::pow(u, rho - 1.0); };
  k.d_dt_ = [rho](double, double u) { return rho * std::pow(u, rho - 1.0); };
  k.d2_dtdr_ = [rho](double, double u) {
    return -rho * (rho - 1.0) * std::pow(u, rho - 2.0);
  };
  k.d2_dr2_ = [rho](double, double u) {
    return rho * (rho - 1.0) * std::pow(u, rho - 2.0);
  };
  return k;
}

Kernel Kernel::power_log(double rho, double eta) {
  require_rho(rho);
  // |log(gap)| vanishes at gap 1, where positivity would break.
  auto guard = [](double u) {
    if (u >= 1.0 - 1e-9) {
      throw std::domain_error(
          "power-log kernel requires t - r < 1 (|log| positivity)");
    }
  };
  Kernel k;
  k.rho_ = rho;
  k.eta_ = eta;
  k.kind_ = KernelKind::power_log;
  k.id_ = fmt_id("power-log", rho, eta);
  k.eval_ = [rho, eta, guard](double, double u) {
    guard(u);
    return plog_value(u, rho, eta);
  };
  k.d_dr_ = [rho, eta, guard](double, double u) {
    guard(u);
    return -plog_du(u, rho, eta);
  };
  k.d_dt_ = [rho, eta, guard](double, double u) {
    guard(u);
    return plog_du(u, rho, eta);
  };
  k.d2_dtdr_ = [rho, eta, guard](double, double u) {
    guard(u);
    return -plog_du2(u, rho, eta);
  };
  k.d2_dr2_ = [rho, eta, guard](double, double u) {
    guard(u);
    return plog_du2(u, rho, eta);
  };
  return k;
}

Kernel Kernel::user_defined(double rho, Fn2 eval) {
  require_rho(rho);
  Kernel k;
  k.rho_ = rho;
  k.kind_ = KernelKind::user_defined;
  k.id_ = fmt_id("user", rho);
  // Adaptive central differences in (t, r); the step shrinks with the gap
  // so probes never cross the diagonal.
  auto f = std::make_shared<Fn2>(std::move(eval));
  auto step1 = [](double gap) {
    return std::min(std::max(1e-7, 1e-4 * gap), 0.25 * gap);
  };
  auto step2 = [](double gap) {
    return std::min(std::max(1e-5, 1e-3 * gap), 0.25 * gap);
  };
  k.eval_ = [f](double t, double u) { return (*f)(t, t - u); };
  k.d_dr_ = [f, step1](double t, double u) {
    const double r = t - u;
    const double h = step1(u);
    return ((*f)(t, r + h) - (*f)(t, r - h)) / (2.0 * h);
  };
  k.d_dt_ = [f, step1](double t, double u) {
    const double r = t - u;
    const double h = step1(u);
    return ((*f)(t + h, r) - (*f)(t - h, r)) / (2.0 * h);
  };
  k.d2_dtdr_ = [f, step2](double t, double u) {
    const double r = t - u;
    const double h = step2(u);
    return ((*f)(t + h, r + h) - (*f)(t + h, r - h) - (*f)(t - h, r + h) +
            (*f)(t - h, r - h)) /
           (4.0 * h * h);
  };
  k.d2_dr2_ = [f, step2](double t, double u) {
    const double r = t - u;
    const double h = step2(u);
    return ((*f)(t, r + h) - 2.0 * (*f)(t, r) + (*f)(t, r - h)) / (h * h);
  };
  return k;
}

Kernel Kernel::user_defined(double rho, Fn2 eval, Fn2 d_dr, Fn2 d_dt,
                            Fn2 d2_dtdr, Fn2 d2_dr2) {
  require_rho(rho);
  Kernel k;
  k.rho_ = rho;
  k.kind_ = KernelKind::user_defined;
  k.id_ = fmt_id("user", rho);
  k.eval_ = [g = std::move(eval)](double t, double u) { return g(t, t - u); };
  k.d_dr_ = [g = std::move(d_dr)](double t, double u) { return g(t, t - u); };
  k.d_dt_ = [g = std::move(d_dt)](double t, double u) { return g(t, t - u); };
  k.d2_dtdr_ = [g = std::move(d2_dtdr)](double t, double u) {
    return g(t, t - u);
  };
  k.d2_dr2_ = [g = std::move(d2_dr2)](double t, double u) {
    return g(t, t - u);
  };
  return k;
}

double Kernel::eval_gap(double t, double u) const {
  if (u < 0.0) throw std::domain_error("kernel eval requires r <= t");
  if (u == 0.0) return 0.0;
  return eval_(t, u);
}

double Kernel::d_dr_gap(double t, double u) const {
  if (!(u > 0.0)) throw std::domain_error("kernel d_dr requires r < t");
  return d_dr_(t, u);
}

double Kernel::d_dt_gap(double t, double u) const {
  if (!(u > 0.0)) throw std::domain_error("kernel d_dt requires r < t");
  return d_dt_(t, u);
}

double Kernel::d2_dtdr_gap(double t, double u) const {
  if (!(u > 0.0)) throw std::domain_error("kernel d2_dtdr requires r < t");
  return d2_dtdr_(t, u);
}

double Kernel::d2_dr2_gap(double t, double u) const {
  if (!(u > 0.0)) throw std::domain_error("kernel d2_dr2 requires r < t");
  return d2_dr2_(t, u);
}

double Kernel::eval(double t, double r) const { return eval_gap(t, t - r); }

double Kernel::d_dr(double t, double r) const { return d_dr_gap(t, t - r); }

double Kernel::d_dt(double t, double r) const { return d_dt_gap(t, t - r); }

double Kernel::d2_dtdr(double t, double r) const {
  return d2_dtdr_gap(t, t - r);
}

double Kernel::d2_dr2(double t, double r) const {
  return d2_dr2_gap(t, t - r);
}

bool converged_verdict(const std::vector<double>& residuals, double tol) {
  const std::size_t n = residuals.size();
  if (n < 3) return false;
  for (double r : residuals) {
    if (!std::isfinite(r)) return false;
  }
  if (!(residuals[n - 1] <= tol && residuals[n - 2] <= tol)) return false;
  // Monotonicity is meaningless once the whole tail sits below tolerance
  // (pure rounding noise), so it is only enforced above that floor.
  if (residuals[n - 3] <= tol) return true;
  return residuals[n - 3] >= residuals[n - 2] &&
         residuals[n - 2] >= residuals[n - 1];
}

namespace {

std::vector<double> make_t_grid(double t_lo, double t_hi) {
  // 64 interior points plus the endpoints.
  std::vector<double> grid;
  grid.reserve(66);
  grid.push_back(t_lo);
  for (int i = 1; i <= 64; ++i) {
    grid.push_back(t_lo + (t_hi - t_lo) * i / 65.0);
  }
  grid.push_back(t_hi);
  return grid;
}

void require_decreasing(const std::vector<double>& xs, const char* what) {
  if (xs.size() < 3) {
    throw std::invalid_argument(std::string(what) +
                                " needs at least three entries");
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0)) {
      throw std::invalid_argument(std::string(what) +
                                  " entries must be positive");
    }
    if (i > 0 && !(xs[i] < xs[i - 1])) {
      throw std::invalid_argument(std::string(what) +
                                  " must be strictly decreasing");
    }
  }
}

// Runs one residual over the grid, returning the sup or recording the
// offending probe and why it could not be evaluated.
template <typename Fn>
double sup_over_grid(const std::vector<double>& grid, double scale_param,
                     Fn&& residual, std::string* reason) {
  double sup = 0.0;
  double t_cur = grid.empty() ? 0.0 : grid.front();
  try {
    for (double t : grid) {
      t_cur = t;
      sup = std::max(sup, residual(t));
    }
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << "at t=" << t_cur << ", h=" << scale_param << ": " << e.what();
    *reason = msg.str();
    return std::numeric_limits<double>::quiet_NaN();
  }
  return sup;
}

}  // namespace

SmoothVariationReport check_smooth_variation(
    const Kernel& k, double t_lo, double t_hi,
    const std::vector<double>& h_schedule, double tol) {
  require_decreasing(h_schedule, "h_schedule");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (!(h_schedule.front() < t_hi - t_lo)) {
    throw std::invalid_argument("h_schedule must stay below the K width");
  }
  const double rho = k.index_rho();
  const auto grid = make_t_grid(t_lo, t_hi);

  SmoothVariationReport rep;
  rep.h_schedule = h_schedule;
  rep.tol = tol;
  for (double h : h_schedule) {
    std::string reason;
    rep.cond_a.residuals.push_back(sup_over_grid(
        grid, h,
        [&](double t) {
          return std::abs(h * k.d_dr_gap(t, h) / k.eval_gap(t, h) + rho);
        },
        &reason));
    if (!reason.empty() && rep.cond_a.failure_reason.empty()) {
      rep.cond_a.failure_reason = reason;
    }
    reason.clear();
    rep.cond_b.residuals.push_back(sup_over_grid(
        grid, h,
        [&](double t) {
          return std::abs(h * k.d_dt_gap(t + h, h) / k.eval_gap(t + h, h) -
                          rho);
        },
        &reason));
    if (!reason.empty() && rep.cond_b.failure_reason.empty()) {
      rep.cond_b.failure_reason = reason;
    }
    reason.clear();
    rep.cond_c.residuals.push_back(sup_over_grid(
        grid, h,
        [&](double t) {
          return std::abs(h * h * k.d2_dtdr_gap(t, h) / k.eval_gap(t, h) +
                          rho * (rho - 1.0));
        },
        &reason));
    if (!reason.empty() && rep.cond_c.failure_reason.empty()) {
      rep.cond_c.failure_reason = reason;
    }
    reason.clear();
    rep.cond_d.residuals.push_back(sup_over_grid(
        grid, h,
        [&](double t) {
          return std::abs(h * h * k.d2_dr2_gap(t, h) / k.eval_gap(t, h) -
                          rho * (rho - 1.0));
        },
        &reason));
    if (!reason.empty() && rep.cond_d.failure_reason.empty()) {
      rep.cond_d.failure_reason = reason;
    }
    reason.clear();
    rep.ratio_residual.push_back(sup_over_grid(
        grid, h,
        [&](double t) {
          return std::abs(k.eval_gap(t, h) / (h * k.d_dr_gap(t, h)) +
                          1.0 / rho);
        },
        &reason));
  }
  for (ConditionTrace* c : {&rep.cond_a, &rep.cond_b, &rep.cond_c, &rep.cond_d}) {
    c->pass = c->failure_reason.empty() && converged_verdict(c->residuals, tol);
  }
  return rep;
}

void SmoothVariationReport::write_csv(std::ostream& os) const {
  os << "h,res_a,res_b,res_c,res_d,res_eq39\n";
  char buf[160];
  for (std::size_t i = 0; i < h_schedule.size(); ++i) {
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", h_schedule[i],
                  cond_a.residuals[i], cond_b.residuals[i],
                  cond_c.residuals[i], cond_d.residuals[i],
                  ratio_residual[i]);
    os << buf;
  }
}

double g_delta(const Kernel& k, double t, double v, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("g_delta: delta must be > 0");
  if (!(v >= 0.0)) throw std::invalid_argument("g_delta: v must be >= 0");
  const double denom = k.d_dr_gap(t + delta, delta);
  if (denom == 0.0) {
    throw std::domain_error(
        "g_delta: f(t+delta, t) = 0 violates the kernel positivity invariant");
  }
  return (k.d_dr_gap(t + delta, delta * (1.0 + v)) -
          k.d_dr_gap(t, delta * v)) /
         denom;
}

double f_delta(const Kernel& k, double t, double v, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("f_delta: delta must be > 0");
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument("f_delta: v must lie in [0, 1]");
  }
  const double denom = k.d_dr_gap(t + delta, delta);
  if (denom == 0.0) {
    throw std::domain_error(
        "f_delta: f(t+delta, t) = 0 violates the kernel positivity invariant");
  }
  // v = 0 sits on the diagonal; built-in kernels have no finite limit there.
  return k.d_dr_gap(t + delta, delta * v) / denom;
}

double gdelta_integral(const Kernel& k, double t, double delta, double v_hi,
                       bool absolute_value, const QuadratureOptions& quad) {
  if (v_hi <= 0.0) return 0.0;
  auto fn = [&](double v) {
    const double g = g_delta(k, t, v, delta);
    return absolute_value ? std::abs(g) : g;
  };
  const double split = std::min(1.0, v_hi);
  double total =
      integrate_power_endpoint(fn, split, k.index_rho() - 1.0, quad);
  if (v_hi > split) total += integrate_geometric(fn, split, v_hi, quad);
  return total;
}

double fdelta_integral(const Kernel& k, double t, double delta,
                       bool absolute_value, const QuadratureOptions& quad) {
  auto fn = [&](double v) {
    const double f = f_delta(k, t, v, delta);
    return absolute_value ? std::abs(f) : f;
  };
  return integrate_power_endpoint(fn, 1.0, k.index_rho() - 1.0, quad);
}

IntegralDiagnostics gdelta_integral_diagnostics(
    const Kernel& k, double t_lo, double t_hi, double h0,
    const std::vector<double>& delta_schedule, double tol,
    const QuadratureOptions& quad) {
  require_decreasing(delta_schedule, "delta_schedule");
  if (!(h0 > 0.0 && h0 <= 1.0)) {
    throw std::invalid_argument("h0 must lie in (0, 1]");
  }
  const double rho = k.index_rho();
  const auto grid = make_t_grid(t_lo, t_hi);
  std::vector<double> grid_above_h0;
  for (double t : grid) {
    if (t >= h0) grid_above_h0.push_back(t);
  }
  if (grid_above_h0.empty()) grid_above_h0.push_back(h0);

  IntegralDiagnostics rep;
  rep.delta_schedule = delta_schedule;
  rep.h0 = h0;
  rep.tol = tol;
  for (double delta : delta_schedule) {
    std::string reason;
    rep.cond_a.residuals.push_back(sup_over_grid(
        grid_above_h0, delta,
        [&](double t) {
          if (t <= h0) return 0.0;  // empty range
          auto fn = [&](double v) { return std::abs(g_delta(k, t, v, delta)); };
          return integrate_geometric(fn, h0 / delta, t / delta, quad);
        },
        &reason));
    if (!reason.empty() && rep.cond_a.failure_reason.empty()) {
      rep.cond_a.failure_reason = reason;
    }
    reason.clear();
    rep.cond_b.residuals.push_back(sup_over_grid(
        grid, delta,
        [&](double t) {
          return std::abs(gdelta_integral(k, t, delta, h0 / delta, false, quad) +
                          1.0 / rho);
        },
        &reason));
    if (!reason.empty() && rep.cond_b.failure_reason.empty()) {
      rep.cond_b.failure_reason = reason;
    }
    reason.clear();
    rep.cond_c.residuals.push_back(sup_over_grid(
        grid_above_h0, delta,
        [&](double t) {
          return std::abs(gdelta_integral(k, t, delta, t / delta, false, quad) +
                          1.0 / rho);
        },
        &reason));
    if (!reason.empty() && rep.cond_c.failure_reason.empty()) {
      rep.cond_c.failure_reason = reason;
    }
    reason.clear();
    rep.cond_d.residuals.push_back(sup_over_grid(
        grid_above_h0, delta,
        [&](double t) {
          return std::abs(gdelta_integral(k, t, delta, h0 / delta, true, quad) -
                          1.0 / rho);
        },
        &reason));
    if (!reason.empty() && rep.cond_d.failure_reason.empty()) {
      rep.cond_d.failure_reason = reason;
    }
  }
  for (ConditionTrace* c : {&rep.cond_a, &rep.cond_b, &rep.cond_c, &rep.cond_d}) {
    c->pass = c->failure_reason.empty() && converged_verdict(c->residuals, tol);
  }
  return rep;
}

IntegralDiagnostics fdelta_integral_diagnostics(
    const Kernel& k, double t_lo, double t_hi,
    const std::vector<double>& delta_schedule, double tol,
    const QuadratureOptions& quad) {
  require_decreasing(delta_schedule, "delta_schedule");
  const double rho = k.index_rho();
  const auto grid = make_t_grid(t_lo, t_hi);

  IntegralDiagnostics rep;
  rep.delta_schedule = delta_schedule;
  rep.tol = tol;
  for (double delta : delta_schedule) {
    std::string reason;
    rep.cond_a.residuals.push_back(sup_over_grid(
        grid, delta,
        [&](double t) {
          return std::abs(fdelta_integral(k, t, delta, true, quad) - 1.0 / rho);
        },
        &reason));
    if (!reason.empty() && rep.cond_a.failure_reason.empty()) {
      rep.cond_a.failure_reason = reason;
    }
    reason.clear();
    rep.cond_b.residuals.push_back(sup_over_grid(
        grid, delta,
        [&](double t) {
          return std::abs(fdelta_integral(k, t, delta, false, quad) -
                          1.0 / rho);
        },
        &reason));
    if (!reason.empty() && rep.cond_b.failure_reason.empty()) {
      rep.cond_b.failure_reason = reason;
    }
  }
  for (ConditionTrace* c : {&rep.cond_a, &rep.cond_b}) {
    c->pass = c->failure_reason.empty() && converged_verdict(c->residuals, tol);
  }
  return rep;
}

void IntegralDiagnostics::write_csv(std::ostream& os) const {
  os << "delta,res_a,res_b,res_c,res_d\n";
  char buf[160];
  for (std::size_t i = 0; i < delta_schedule.size(); ++i) {
    auto at = [&](const ConditionTrace& c) {
      return i < c.residuals.size() ? c.residuals[i]
                                    : std::numeric_limits<double>::quiet_NaN();
    };
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  delta_schedule[i], at(cond_a), at(cond_b), at(cond_c),
                  at(cond_d));
    os << buf;
  }
}

}  // namespace volterra

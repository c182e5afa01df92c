#include "volterra/process.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace volterra {

namespace {

void require_in_horizon(const CadlagPath& x, double t) {
  if (!(t >= 0.0 && t >= x.t_begin() && t <= x.t_end())) {
    throw std::invalid_argument("evaluation time outside [0, horizon]");
  }
}

// Jump component of X restricted to r in [0, t]: piecewise-constant levels
// between consecutive jump times. Calls fn(lo, hi, level) per segment.
template <typename Fn>
void for_each_jump_segment(const CadlagPath& x, double t, Fn&& fn) {
  const auto times = x.jump_times();
  const auto sizes = x.jump_sizes();
  double lo = 0.0;
  double level = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double tau = times[i];
    if (tau <= 0.0) continue;
    if (tau >= t) break;
    if (tau > lo) {
      fn(lo, tau, level);
      lo = tau;
    }
    level += sizes[i];
  }
  if (t > lo) fn(lo, t, level);
}

double drift_integral(const Kernel& k, double t,
                      const QuadratureOptions& quad) {
  // int_0^t F(t, r) dr in the gap variable u = t - r; F ~ u^rho at u = 0.
  return integrate_power_endpoint(
      [&](double u) { return k.eval_gap(t, u); }, t, k.index_rho(), quad);
}

// Integrates fn over [0, v_hi] where fn ~ v^(rho-1) at 0; splits at the
// supplied interior breakpoints and geometrically over long ranges.
double integrate_singular_range(const std::function<double(double)>& fn,
                                double v_hi, double exponent,
                                std::vector<double> breaks,
                                const QuadratureOptions& quad) {
  if (v_hi <= 0.0) return 0.0;
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<double> pts;
  pts.push_back(0.0);
  for (double b : breaks) {
    if (b > 0.0 && b < v_hi) pts.push_back(b);
  }
  pts.push_back(v_hi);

  double total = integrate_power_endpoint(
      [&](double u) { return fn(u); }, pts[1], exponent, quad);
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double a = pts[i], b = pts[i + 1];
    if (b / a > 8.0) {
      total += integrate_geometric(fn, a, b, quad);
    } else {
      total += integrate(fn, a, b, quad);
    }
  }
  return total;
}

}  // namespace

double eval_direct(const Kernel& k, const CadlagPath& x, double t,
                   const QuadratureOptions& quad) {
  require_in_horizon(x, t);
  if (t == 0.0) return 0.0;

  const auto times = x.jump_times();
  const auto sizes = x.jump_sizes();
  double m = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] <= 0.0) continue;
    if (times[i] > t) break;
    m += k.eval(t, times[i]) * sizes[i];
  }

  if (x.drift_rate() != 0.0) {
    m += x.drift_rate() * drift_integral(k, t, quad);
  }

  if (x.diffusion()) {
    // Midpoint Riemann-Stieltjes sum over the sampling grid.
    const auto& d = *x.diffusion();
    const double step = d.step;
    double lo = 0.0;
    while (lo < t) {
      const double cell_end =
          std::floor((lo - d.begin) / step + 1.0 + 1e-12) * step + d.begin;
      const double hi = std::min(t, cell_end);
      if (hi <= lo) break;
      m += k.eval(t, 0.5 * (lo + hi)) * (d.value(hi) - d.value(lo));
      lo = hi;
    }
  }
  return m;
}

double y_value(const Kernel& k, const CadlagPath& x, double t,
               const QuadratureOptions& quad) {
  require_in_horizon(x, t);
  if (t == 0.0) return 0.0;

  // Jump component: the antiderivative of dF/dr in r is F itself, so each
  // constant segment contributes level * (F(t, hi) - F(t, lo)) exactly.
  double y = 0.0;
  for_each_jump_segment(x, t, [&](double lo, double hi, double level) {
    if (level == 0.0) return;
    const double upper = hi == t ? 0.0 : k.eval(t, hi);
    y += level * (upper - k.eval(t, lo));
  });

  if (x.drift_rate() != 0.0) {
    // int_0^t r f(t, r) dr in the gap variable; f ~ -rho u^(rho-1).
    y += x.drift_rate() *
         integrate_power_endpoint(
             [&](double u) { return (t - u) * k.d_dr_gap(t, u); }, t,
             k.index_rho() - 1.0, quad);
  }

  if (x.diffusion()) {
    const auto& d = *x.diffusion();
    const double step = d.step;
    // Last full grid boundary strictly below t; the remaining sliver holds
    // the integrable f singularity and gets the substitution treatment.
    double diag_lo =
        d.begin + std::floor((t - d.begin) / step - 1e-12) * step;
    diag_lo = std::max(0.0, diag_lo);
    const auto& [nodes, weights] = gauss_legendre(8);
    double lo = 0.0;
    while (lo < diag_lo) {
      const double hi =
          std::min(diag_lo,
                   d.begin + std::floor((lo - d.begin) / step + 1.0 + 1e-12) *
                                 step);
      if (hi <= lo) break;
      const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      double acc = 0.0;
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double r = mid + half * nodes[q];
        acc += weights[q] * k.d_dr(t, r) * d.value(r);
      }
      y += half * acc;
      lo = hi;
    }
    if (t > diag_lo) {
      y += integrate_power_endpoint(
          [&](double u) { return k.d_dr_gap(t, u) * d.value(t - u); },
          t - diag_lo, k.index_rho() - 1.0, quad);
    }
  }
  return y;
}

double eval_by_parts(const Kernel& k, const CadlagPath& x, double t,
                     const QuadratureOptions& quad) {
  return -y_value(k, x, t, quad);
}

VolterraPath eval_on_grid(const Kernel& k, const CadlagPath& x,
                          std::span<const double> grid, EvalMethod method,
                          const QuadratureOptions& quad) {
  VolterraPath vp;
  vp.grid.assign(grid.begin(), grid.end());
  vp.method = method;
  vp.kernel_id = k.id();
  {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "jumps:%zu;drift:%g;diffusion:%d",
                  x.jump_times().size(), x.drift_rate(),
                  x.diffusion() ? 1 : 0);
    vp.driver_id = buf;
  }
  vp.values.reserve(grid.size());
  for (double t : grid) {
    vp.values.push_back(method == EvalMethod::direct
                            ? eval_direct(k, x, t, quad)
                            : eval_by_parts(k, x, t, quad));
  }
  return vp;
}

void VolterraPath::write_csv(std::ostream& os) const {
  os << "t,value,method\n";
  const char* name = method == EvalMethod::direct ? "direct" : "by-parts";
  char buf[96];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%s\n", grid[i], values[i],
                  name);
    os << buf;
  }
}

IncrementDecomposition decompose_increment(const Kernel& k,
                                           const CadlagPath& x, double t,
                                           double delta,
                                           const QuadratureOptions& quad) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(t >= 0.0 && t + delta <= x.t_end())) {
    throw std::invalid_argument("decompose_increment needs t + delta inside the horizon");
  }
  const double rho = k.index_rho();
  const auto times = x.jump_times();

  IncrementDecomposition dec;
  dec.t = t;
  dec.delta = delta;

  {
    std::vector<double> breaks;
    for (double tau : times) {
      if (tau > t && tau < t + delta) breaks.push_back((t + delta - tau) / delta);
    }
    auto fn = [&](double v) {
      return k.d_dr_gap(t + delta, delta * v) *
             x.value(t + delta - delta * v);
    };
    dec.j1 = delta *
             integrate_singular_range(fn, 1.0, rho - 1.0, std::move(breaks),
                                      quad);
  }

  if (t > 0.0) {
    std::vector<double> breaks;
    for (double tau : times) {
      if (tau > 0.0 && tau < t) breaks.push_back((t - tau) / delta);
    }
    auto fn = [&](double v) {
      return (k.d_dr_gap(t + delta, delta * (1.0 + v)) -
              k.d_dr_gap(t, delta * v)) *
             x.value(t - delta * v);
    };
    dec.j2 = delta *
             integrate_singular_range(fn, t / delta, rho - 1.0,
                                      std::move(breaks), quad);
  }

  dec.total = dec.j1 + dec.j2;
  return dec;
}

double gdelta_functional(const Kernel& k, const CadlagPath& x, double t,
                         double delta, const QuadratureOptions& quad) {
  if (!(t > 0.0 && t + delta <= x.t_end())) {
    throw std::invalid_argument("gdelta_functional needs 0 < t and t + delta inside the horizon");
  }
  std::vector<double> breaks;
  for (double tau : x.jump_times()) {
    if (tau > 0.0 && tau < t) breaks.push_back((t - tau) / delta);
  }
  auto fn = [&](double v) { return g_delta(k, t, v, delta) * x.value(t - delta * v); };
  return integrate_singular_range(fn, t / delta, k.index_rho() - 1.0,
                                  std::move(breaks), quad);
}

double fdelta_functional(const Kernel& k, const CadlagPath& x, double t,
                         double delta, const QuadratureOptions& quad) {
  if (!(t >= 0.0 && t + delta <= x.t_end())) {
    throw std::invalid_argument("fdelta_functional needs t + delta inside the horizon");
  }
  std::vector<double> breaks;
  for (double tau : x.jump_times()) {
    if (tau > t && tau < t + delta) breaks.push_back(1.0 - (tau - t) / delta);
  }
  auto fn = [&](double v) {
    return f_delta(k, t, v, delta) * x.value(t + delta * (1.0 - v));
  };
  return integrate_singular_range(fn, 1.0, k.index_rho() - 1.0,
                                  std::move(breaks), quad);
}

void write_decomposition_csv(std::ostream& os,
                             std::span<const IncrementDecomposition> rows) {
  os << "t,delta,J1,J2,total\n";
  char buf[160];
  for (const auto& d : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", d.t,
                  d.delta, d.j1, d.j2, d.total);
    os << buf;
  }
}

}  // namespace volterra

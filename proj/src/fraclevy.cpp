#include "volterra/fraclevy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace volterra {

namespace {

constexpr double kLilEps = 0.01;

void require_d(double d) {
  if (!(d > 0.0) || !(d < 0.5)) {
    throw std::invalid_argument(
        "fractional integration parameter d must lie in (0, 0.5)");
  }
}

void require_pure_jump(const CadlagPath& l) {
  if (l.drift_rate() != 0.0 || l.diffusion()) {
    throw std::invalid_argument(
        "fractional evaluation requires a centered pure-jump driver");
  }
}

struct Segment {
  double lo, hi, level;
};

// Piecewise-constant segments of L over [lo, hi] (levels are path values).
std::vector<Segment> segments_between(const CadlagPath& l, double lo,
                                      double hi) {
  std::vector<Segment> segs;
  double cur = lo;
  for (double tau : l.jump_times()) {
    if (tau <= lo) continue;
    if (tau >= hi) break;
    segs.push_back({cur, tau, l.value(cur)});
    cur = tau;
  }
  if (hi > cur) segs.push_back({cur, hi, l.value(cur)});
  return segs;
}

}  // namespace

FracLevyPath eval_fraclevy(const CadlagPath& l, double d,
                           std::span<const double> grid, double T,
                           double second_moment) {
  require_d(d);
  require_pure_jump(l);
  if (!(T > 0.0)) throw std::invalid_argument("truncation T must be > 0");
  if (!(l.t_begin() <= -T)) {
    throw std::invalid_argument("driver horizon must reach back to -T");
  }
  double t_max = 0.0;
  for (double t : grid) {
    if (!(t >= 0.0)) {
      throw std::invalid_argument("fractional grid times must be >= 0");
    }
    t_max = std::max(t_max, t);
  }
  if (!(l.t_end() >= t_max)) {
    throw std::invalid_argument("driver horizon too short for the grid");
  }

  const double inv_gamma_d1 = 1.0 / std::tgamma(d + 1.0);
  const auto hist = segments_between(l, -T, 0.0);
  // (-lo)^d - (-hi)^d per history segment, reused for every grid time.
  std::vector<double> hist_base(hist.size());
  for (std::size_t i = 0; i < hist.size(); ++i) {
    hist_base[i] = std::pow(-hist[i].lo, d) - std::pow(-hist[i].hi, d);
  }

  FracLevyPath out;
  out.d = d;
  out.grid.assign(grid.begin(), grid.end());
  out.truncation_T = T;
  out.m1_values.reserve(grid.size());
  out.m2_values.reserve(grid.size());
  out.values.reserve(grid.size());

  for (double t : grid) {
    // M1: 1/Gamma(d) int_0^t (t-r)^(d-1) L(r) dr, exact per segment since
    // the antiderivative of (t-r)^(d-1) is -(t-r)^d / d.
    double m1 = 0.0;
    for (const auto& s : segments_between(l, 0.0, t)) {
      if (s.level == 0.0) continue;
      m1 += s.level * (std::pow(t - s.lo, d) - std::pow(t - s.hi, d));
    }
    m1 *= inv_gamma_d1;

    // M2: same closed form applied to both power terms over [-T, 0].
    double m2 = 0.0;
    for (std::size_t i = 0; i < hist.size(); ++i) {
      const auto& s = hist[i];
      if (s.level == 0.0) continue;
      const double moving =
          std::pow(t - s.lo, d) - std::pow(t - s.hi, d);
      m2 += s.level * (moving - hist_base[i]);
    }
    m2 *= inv_gamma_d1;

    out.m1_values.push_back(m1);
    out.m2_values.push_back(m2);
    out.values.push_back(m1 + m2);
  }

  if (second_moment > 0.0 && grid.size() >= 2) {
    const double step = (t_max - grid.front()) /
                        static_cast<double>(grid.size() - 1);
    out.truncation_bound =
        truncation_tail_bound(second_moment, d, t_max, T, step);
  } else {
    out.truncation_bound = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

void FracLevyPath::write_csv(std::ostream& os) const {
  os << "t,M,M1,M2\n";
  char buf[128];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", grid[i],
                  values[i], m1_values[i], m2_values[i]);
    os << buf;
  }
}

double truncation_tail_bound(double second_moment, double d, double t,
                             double T, double delta_max) {
  require_d(d);
  if (!(second_moment >= 0.0)) {
    throw std::invalid_argument("second moment must be >= 0");
  }
  if (!(T > 0.0)) throw std::invalid_argument("T must be > 0");
  if (!(delta_max >= 0.0)) throw std::invalid_argument("delta_max must be >= 0");
  // the mean-value step needs the shifted gap t + delta + T to stay positive
  if (!(delta_max < t + T)) {
    throw std::invalid_argument(
        "T too small relative to t: need delta_max < t + T");
  }
  if (!(d < 0.5 - kLilEps)) {
    throw std::invalid_argument(
        "tail envelope integral diverges for d >= 0.49");
  }
  const double envelope = 2.0 * std::sqrt(second_moment);
  const double decay = 0.5 - kLilEps - d;
  return envelope * (1.0 - d) * delta_max * std::pow(t + T, -decay) /
         (decay * std::tgamma(d));
}

double default_truncation_T(double second_moment, double d, double t_max,
                            double delta_max) {
  const double target = 1e-3 * std::sqrt(second_moment);
  double T = 5.0;
  while (truncation_tail_bound(second_moment, d, t_max, T, delta_max) >
             target &&
         T < 1e7) {
    T *= 2.0;
  }
  return T;
}

double tail_increment(const CadlagPath& l, double d, double t, double a,
                      double delta) {
  require_d(d);
  require_pure_jump(l);
  if (!(a <= 0.0 && t > a)) {
    throw std::invalid_argument("tail_increment needs a <= 0 < t");
  }
  if (!(l.t_begin() < a)) {
    throw std::invalid_argument("driver horizon does not reach below a");
  }
  double acc = 0.0;
  for (const auto& s : segments_between(l, l.t_begin(), a)) {
    if (s.level == 0.0) continue;
    const double shifted =
        std::pow(t + delta - s.lo, d) - std::pow(t + delta - s.hi, d);
    const double base = std::pow(t - s.lo, d) - std::pow(t - s.hi, d);
    acc += s.level * (shifted - base);
  }
  return acc / std::tgamma(d + 1.0);
}

}  // namespace volterra

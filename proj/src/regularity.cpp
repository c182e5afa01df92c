#include "volterra/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <stdexcept>

namespace volterra {

LinearFit fit_linear(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("fit_linear needs matching arrays, size >= 2");
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += e * e;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 0.0;
  return fit;
}

PointwiseReport pointwise_ratio_scan(const Kernel& k, const CadlagPath& x,
                                     const PathEval& m_eval,
                                     std::span<const double> probes,
                                     std::span<const double> h_schedule) {
  if (h_schedule.size() < 2) {
    throw std::invalid_argument("h_schedule needs at least two entries");
  }
  for (std::size_t i = 1; i < h_schedule.size(); ++i) {
    if (!(h_schedule[i] < h_schedule[i - 1])) {
      throw std::invalid_argument("h_schedule must be strictly decreasing");
    }
  }
  const double h_max = h_schedule.front();

  PointwiseReport rep;
  rep.h_schedule.assign(h_schedule.begin(), h_schedule.end());
  for (double s : probes) {
    if (!(s > 0.0 && s + h_max <= x.t_end())) {
      throw std::invalid_argument("probe too close to the horizon end");
    }
    PointwiseProbe pr;
    pr.s = s;
    pr.jump_truth = x.jump_at(s);
    const double m_s = m_eval(s);
    for (double h : h_schedule) {
      pr.ratios.push_back((m_eval(s + h) - m_s) / k.eval(s + h, s));
    }
    const std::size_t n = pr.ratios.size();
    pr.raw_last = pr.ratios[n - 1];
    const double h1 = rep.h_schedule[n - 2], h2 = rep.h_schedule[n - 1];
    pr.richardson = pr.ratios[n - 1] +
                    (pr.ratios[n - 1] - pr.ratios[n - 2]) * h2 / (h1 - h2);
    rep.probes.push_back(std::move(pr));
  }
  return rep;
}

void PointwiseReport::write_csv(std::ostream& os) const {
  os << "probe,h,ratio,truth\n";
  char buf[128];
  for (const auto& p : probes) {
    for (std::size_t i = 0; i < h_schedule.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", p.s,
                    h_schedule[i], p.ratios[i], p.jump_truth);
      os << buf;
    }
  }
}

namespace {

double frac(double x) { return x - std::floor(x); }

}  // namespace

UniformReport uniform_modulus_scan(const Kernel& k, const CadlagPath& x,
                                   const PathEval& m_eval,
                                   std::span<const double> h_schedule,
                                   std::size_t pair_budget) {
  if (pair_budget < 1000) {
    throw std::invalid_argument("pair_budget must be at least 1000");
  }
  const double t_end = std::min(1.0, x.t_end());

  UniformReport rep;
  rep.h_schedule.assign(h_schedule.begin(), h_schedule.end());
  rep.sup_jump_truth = sup_jump(x, 0.0, t_end);

  // Golden-ratio pair stream; deterministic and reused for every h.
  constexpr double kPhi = 0.6180339887498949;
  constexpr double kSqrt2m1 = 0.41421356237309503;

  for (double h : h_schedule) {
    double sup = 0.0;
    auto consider = [&](double s, double t) {
      if (!(s > 0.0 && t > s && t <= t_end)) return;
      const double ratio = std::abs(m_eval(t) - m_eval(s)) / k.eval(t, s);
      sup = std::max(sup, ratio);
    };
    for (double tau : x.jump_times()) {
      if (tau <= 0.0 || tau > t_end) continue;
      consider(tau, tau + h * (1.0 - 1e-9));
    }
    for (std::size_t i = 0; i < pair_budget; ++i) {
      const double s = frac(0.5 + kPhi * static_cast<double>(i + 1)) *
                       (t_end - h);
      const double gap = frac(0.5 + kSqrt2m1 * static_cast<double>(i + 1));
      consider(s, s + std::max(gap, 1e-6) * h);
    }
    rep.sup_ratios.push_back(sup);
  }
  return rep;
}

void UniformReport::write_csv(std::ostream& os) const {
  os << "h,uniform_ratio,sup_jump\n";
  char buf[128];
  for (std::size_t i = 0; i < h_schedule.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", h_schedule[i],
                  sup_ratios[i], sup_jump_truth);
    os << buf;
  }
}

namespace {

// max over windows of `len + 1` consecutive samples of (max - min),
// i.e. the grid modulus at lag len. Monotonic-deque sliding window.
double window_modulus(std::span<const double> v, std::size_t len) {
  std::deque<std::size_t> maxq, minq;
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    while (!maxq.empty() && v[maxq.back()] <= v[i]) maxq.pop_back();
    maxq.push_back(i);
    while (!minq.empty() && v[minq.back()] >= v[i]) minq.pop_back();
    minq.push_back(i);
    if (i >= len) {
      if (maxq.front() + len < i) maxq.pop_front();
      if (minq.front() + len < i) minq.pop_front();
      best = std::max(best, v[maxq.front()] - v[minq.front()]);
    }
  }
  return best;
}

}  // namespace

HolderFit holder_exponent(std::span<const double> values, double time_span,
                          int dyadic_levels) {
  if (dyadic_levels < 5) {
    throw std::invalid_argument("dyadic_levels must be at least 5");
  }
  if (!(time_span > 0.0) || values.size() < 2) {
    throw std::invalid_argument("holder_exponent needs a real grid path");
  }
  const std::size_t n = values.size() - 1;
  const std::size_t largest = std::size_t{4} << (dyadic_levels - 1);
  if (largest > n) {
    throw std::invalid_argument(
        "grid does not resolve the requested dyadic levels");
  }
  const double dt = time_span / static_cast<double>(n);

  HolderFit fit;
  for (int lvl = 0; lvl < dyadic_levels; ++lvl) {
    const std::size_t len = std::size_t{4} << lvl;
    const double w = window_modulus(values, len);
    fit.h.push_back(static_cast<double>(len) * dt);
    fit.modulus.push_back(w);
    if (w == 0.0) fit.degenerate = true;
  }
  if (fit.degenerate) return fit;

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < fit.h.size(); ++i) {
    lx.push_back(std::log(fit.h[i]));
    ly.push_back(std::log(fit.modulus[i]));
  }
  const LinearFit lf = fit_linear(lx, ly);
  fit.slope = lf.slope;
  fit.r2 = lf.r2;
  return fit;
}

void HolderFit::write_csv(std::ostream& os) const {
  os << "level,h,modulus,slope,r2\n";
  char buf[160];
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (degenerate) {
      std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,degenerate,degenerate\n",
                    i, h[i], modulus[i]);
    } else {
      std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g\n", i, h[i],
                    modulus[i], slope, r2);
    }
    os << buf;
  }
}

}  // namespace volterra

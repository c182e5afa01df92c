#include "volterra/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace volterra {

double JumpLaw::mean() const {
  switch (kind) {
    case JumpLawKind::normal:
      return mu;
    case JumpLawKind::uniform:
      return 0.5 * (a + b);
    case JumpLawKind::two_point:
      return p * x1 + (1.0 - p) * x2;
  }
  return 0.0;
}

double JumpLaw::variance() const {
  switch (kind) {
    case JumpLawKind::normal:
      return sigma * sigma;
    case JumpLawKind::uniform:
      return (b - a) * (b - a) / 12.0;
    case JumpLawKind::two_point: {
      const double m = mean();
      return p * (x1 - m) * (x1 - m) + (1.0 - p) * (x2 - m) * (x2 - m);
    }
  }
  return 0.0;
}

double JumpLaw::sample(SplitMix64& rng) const {
  switch (kind) {
    case JumpLawKind::normal:
      return mu + sigma * rng.next_normal();
    case JumpLawKind::uniform:
      return a + (b - a) * rng.next_uniform();
    case JumpLawKind::two_point:
      return rng.next_uniform() < p ? x1 : x2;
  }
  return 0.0;
}

void DriverSpec::validate() const {
  if (jump_intensity < 0.0) {
    throw std::invalid_argument("jump_intensity must be >= 0");
  }
  if (diffusion_vol < 0.0) {
    throw std::invalid_argument("diffusion_vol must be >= 0");
  }
  if (jump_law.kind == JumpLawKind::normal && jump_law.sigma < 0.0) {
    throw std::invalid_argument("normal jump law needs sigma >= 0");
  }
  if (jump_law.kind == JumpLawKind::uniform && !(jump_law.a <= jump_law.b)) {
    throw std::invalid_argument("uniform jump law needs a <= b");
  }
  if (jump_law.kind == JumpLawKind::two_point &&
      !(jump_law.p >= 0.0 && jump_law.p <= 1.0)) {
    throw std::invalid_argument("two-point jump law needs p in [0, 1]");
  }
  switch (kind) {
    case DriverKind::compound_poisson:
      if (drift_rate != 0.0 || diffusion_vol != 0.0) {
        throw std::invalid_argument(
            "compound-poisson driver must have zero drift and diffusion");
      }
      break;
    case DriverKind::cp_with_drift:
      if (diffusion_vol != 0.0) {
        throw std::invalid_argument(
            "cp-with-drift driver must have zero diffusion");
      }
      break;
    case DriverKind::cp_with_diffusion:
      if (!(diffusion_grid_step > 0.0)) {
        throw std::invalid_argument("diffusion_grid_step must be > 0");
      }
      break;
    case DriverKind::deterministic_jumps: {
      if (jump_times.size() != jump_sizes.size()) {
        throw std::invalid_argument(
            "deterministic jumps need matching times and sizes");
      }
      if (!std::is_sorted(jump_times.begin(), jump_times.end(),
                          std::less_equal<double>())) {
        throw std::invalid_argument(
            "deterministic jump times must be strictly increasing");
      }
      for (double t : jump_times) {
        if (t == 0.0) {
          throw std::invalid_argument("no jump may sit exactly at time 0");
        }
      }
      break;
    }
  }
}

void DriverSpec::validate_fractional() const {
  validate();
  if (diffusion_vol != 0.0 || kind == DriverKind::cp_with_diffusion) {
    throw std::invalid_argument(
        "fractional driver must have no Brownian component");
  }
  if (drift_rate != 0.0) {
    throw std::invalid_argument(
        "fractional driver must be centered: drift_rate must be 0");
  }
  if (kind != DriverKind::deterministic_jumps && jump_law.mean() != 0.0) {
    throw std::invalid_argument(
        "fractional driver needs a zero-mean jump law");
  }
  if (!std::isfinite(jump_law.variance())) {
    throw std::invalid_argument("fractional driver needs finite jump variance");
  }
}

double DiffusionSamples::value(double t) const {
  if (samples.empty()) return 0.0;
  const double pos = (t - begin) / step;
  const auto n = static_cast<std::ptrdiff_t>(samples.size());
  const auto i = static_cast<std::ptrdiff_t>(std::floor(pos));
  if (i < 0) return samples.front();
  if (i >= n - 1) return samples.back();
  const double frac = pos - static_cast<double>(i);
  return samples[i] + frac * (samples[i + 1] - samples[i]);
}

CadlagPath::CadlagPath(double t_begin, double t_end,
                       std::vector<double> jump_times,
                       std::vector<double> jump_sizes, double drift_rate,
                       std::optional<DiffusionSamples> diffusion)
    : t_begin_(t_begin),
      t_end_(t_end),
      jump_times_(std::move(jump_times)),
      jump_sizes_(std::move(jump_sizes)),
      drift_rate_(drift_rate),
      diffusion_(std::move(diffusion)) {
  if (!(t_end_ > t_begin_)) {
    throw std::invalid_argument("path horizon must have positive length");
  }
  if (jump_times_.size() != jump_sizes_.size()) {
    throw std::invalid_argument("jump times and sizes must match");
  }
  for (std::size_t i = 0; i < jump_times_.size(); ++i) {
    if (i > 0 && !(jump_times_[i] > jump_times_[i - 1])) {
      throw std::invalid_argument("jump times must be strictly increasing");
    }
    if (!(jump_times_[i] > t_begin_ && jump_times_[i] <= t_end_)) {
      throw std::invalid_argument("jump times must lie in (t_begin, t_end]");
    }
  }
  prefix_.resize(jump_times_.size() + 1, 0.0);
  for (std::size_t i = 0; i < jump_sizes_.size(); ++i) {
    prefix_[i + 1] = prefix_[i] + jump_sizes_[i];
  }
  const auto it =
      std::upper_bound(jump_times_.begin(), jump_times_.end(), 0.0);
  sum_at_origin_ = prefix_[static_cast<std::size_t>(
      std::distance(jump_times_.begin(), it))];
}

double CadlagPath::value(double t) const {
  const auto it = std::upper_bound(jump_times_.begin(), jump_times_.end(), t);
  const double jumps = prefix_[static_cast<std::size_t>(
      std::distance(jump_times_.begin(), it))];
  double v = drift_rate_ * t + (jumps - sum_at_origin_);
  if (diffusion_) v += diffusion_->value(t);
  return v;
}

double CadlagPath::left_value(double t) const {
  const auto it = std::lower_bound(jump_times_.begin(), jump_times_.end(), t);
  const double jumps = prefix_[static_cast<std::size_t>(
      std::distance(jump_times_.begin(), it))];
  double v = drift_rate_ * t + (jumps - sum_at_origin_);
  if (diffusion_) v += diffusion_->value(t);
  return v;
}

double CadlagPath::jump_at(double t) const {
  const auto it = std::lower_bound(jump_times_.begin(), jump_times_.end(), t);
  if (it != jump_times_.end() && *it == t) {
    return jump_sizes_[static_cast<std::size_t>(
        std::distance(jump_times_.begin(), it))];
  }
  return 0.0;
}

double CadlagPath::sup_norm(double lo, double hi) const {
  if (!(lo >= t_begin_ && hi <= t_end_ && lo <= hi)) {
    throw std::invalid_argument("sup_norm interval outside the horizon");
  }
  double sup = std::max(std::abs(value(lo)), std::abs(value(hi)));
  const auto first =
      std::upper_bound(jump_times_.begin(), jump_times_.end(), lo);
  for (auto it = first; it != jump_times_.end() && *it <= hi; ++it) {
    sup = std::max(sup, std::abs(value(*it)));
    sup = std::max(sup, std::abs(left_value(*it)));
  }
  if (diffusion_ && !diffusion_->samples.empty()) {
    const double step = diffusion_->step;
    const auto n = static_cast<std::ptrdiff_t>(diffusion_->samples.size());
    auto i0 = static_cast<std::ptrdiff_t>(
        std::ceil((lo - diffusion_->begin) / step));
    for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(i0, 0); i < n; ++i) {
      const double t = diffusion_->begin + step * static_cast<double>(i);
      if (t > hi) break;
      sup = std::max(sup, std::abs(value(t)));
    }
  }
  return sup;
}

std::string CadlagPath::to_json() const {
  nlohmann::json j;
  j["jump_times"] = jump_times_;
  j["jump_sizes"] = jump_sizes_;
  j["drift_rate"] = drift_rate_;
  if (diffusion_) {
    j["grid_step"] = diffusion_->step;
    j["diffusion_samples"] = diffusion_->samples;
  } else {
    j["grid_step"] = nullptr;
    j["diffusion_samples"] = nlohmann::json::array();
  }
  return j.dump();
}

void CadlagPath::write_csv(std::ostream& os) const {
  os << "kind,time,value\n";
  char buf[96];
  std::snprintf(buf, sizeof(buf), "drift,%.17g,%.17g\n", t_begin_,
                drift_rate_);
  os << buf;
  for (std::size_t i = 0; i < jump_times_.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "jump,%.17g,%.17g\n", jump_times_[i],
                  jump_sizes_[i]);
    os << buf;
  }
  if (diffusion_) {
    for (std::size_t i = 0; i < diffusion_->samples.size(); ++i) {
      const double t = diffusion_->begin + diffusion_->step * i;
      std::snprintf(buf, sizeof(buf), "diffusion,%.17g,%.17g\n", t,
                    diffusion_->samples[i]);
      os << buf;
    }
  }
}

CadlagPath simulate(const DriverSpec& spec, double t_begin, double t_end) {
  spec.validate();
  if (!(t_end > t_begin)) {
    throw std::invalid_argument("simulate: horizon must have positive length");
  }

  std::vector<double> times, sizes;
  if (spec.kind == DriverKind::deterministic_jumps) {
    times = spec.jump_times;
    sizes = spec.jump_sizes;
    for (double t : times) {
      if (!(t > t_begin && t <= t_end)) {
        throw std::invalid_argument(
            "deterministic jump times must lie in (t_begin, t_end]");
      }
    }
  } else if (spec.jump_intensity > 0.0) {
    SplitMix64 rng(SplitMix64::derive_stream(spec.seed, 0));
    double t = t_begin;
    while (true) {
      t += rng.next_exponential(spec.jump_intensity);
      if (t > t_end) break;
      times.push_back(t);
      sizes.push_back(spec.jump_law.sample(rng));
    }
  }

  std::optional<DiffusionSamples> diffusion;
  if (spec.kind == DriverKind::cp_with_diffusion && spec.diffusion_vol > 0.0) {
    if (!(t_begin <= 0.0 && t_end >= 0.0)) {
      throw std::invalid_argument(
          "diffusion paths require 0 inside the horizon so that X(0) = 0");
    }
    SplitMix64 rng(SplitMix64::derive_stream(spec.seed, 1));
    DiffusionSamples d;
    d.begin = t_begin;
    d.step = spec.diffusion_grid_step;
    const auto n = static_cast<std::size_t>(
                       std::ceil((t_end - t_begin) / d.step)) +
                   1;
    d.samples.resize(n);
    const double scale = spec.diffusion_vol * std::sqrt(d.step);
    d.samples[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      d.samples[i] = d.samples[i - 1] + scale * rng.next_normal();
    }
    // Pin the sample at t = 0 to zero by shifting the whole bridge.
    const double at_zero = d.value(0.0);
    for (double& s : d.samples) s -= at_zero;
    diffusion = std::move(d);
  }

  const double drift =
      spec.kind == DriverKind::compound_poisson ? 0.0 : spec.drift_rate;
  return CadlagPath(t_begin, t_end, std::move(times), std::move(sizes), drift,
                    std::move(diffusion));
}

CadlagPath make_two_sided(const DriverSpec& spec_pos,
                          const DriverSpec& spec_neg, double T_neg,
                          double T_pos) {
  if (!(T_neg > 0.0 && T_pos > 0.0)) {
    throw std::invalid_argument("make_two_sided: T_neg and T_pos must be > 0");
  }
  if (spec_pos.kind == DriverKind::cp_with_diffusion ||
      spec_neg.kind == DriverKind::cp_with_diffusion) {
    throw std::invalid_argument(
        "two-sided paths do not support a Brownian component");
  }
  if (spec_pos.drift_rate != spec_neg.drift_rate) {
    throw std::invalid_argument(
        "two-sided branches must share one drift rate");
  }
  const CadlagPath pos = simulate(spec_pos, 0.0, T_pos);
  const CadlagPath neg = simulate(spec_neg, 0.0, T_neg);

  // Reflect the negative branch: a jump of L2 at u becomes a jump of L at
  // -u with the same size, matching L(t) = -L2((-t)-) for t < 0.
  std::vector<double> times, sizes;
  const auto neg_times = neg.jump_times();
  const auto neg_sizes = neg.jump_sizes();
  for (std::size_t i = neg_times.size(); i-- > 0;) {
    times.push_back(-neg_times[i]);
    sizes.push_back(neg_sizes[i]);
  }
  times.insert(times.end(), pos.jump_times().begin(), pos.jump_times().end());
  sizes.insert(sizes.end(), pos.jump_sizes().begin(), pos.jump_sizes().end());
  return CadlagPath(-T_neg, T_pos, std::move(times), std::move(sizes),
                    spec_pos.drift_rate, std::nullopt);
}

double sup_jump(const CadlagPath& path, double lo, double hi) {
  const auto times = path.jump_times();
  const auto sizes = path.jump_sizes();
  double sup = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= lo && times[i] <= hi) {
      sup = std::max(sup, std::abs(sizes[i]));
    }
  }
  return sup;
}

}  // namespace volterra

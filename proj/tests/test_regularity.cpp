#include <doctest.h>

#include <cmath>

#include "volterra/process.hpp"
#include "volterra/regularity.hpp"

using namespace volterra;

namespace {

DriverSpec det_spec(std::vector<double> times, std::vector<double> sizes) {
  DriverSpec spec;
  spec.kind = DriverKind::deterministic_jumps;
  spec.jump_times = std::move(times);
  spec.jump_sizes = std::move(sizes);
  return spec;
}

DriverSpec cp_spec(double lambda, std::uint64_t seed) {
  DriverSpec spec;
  spec.kind = DriverKind::compound_poisson;
  spec.jump_intensity = lambda;
  spec.jump_law.kind = JumpLawKind::normal;
  spec.seed = seed;
  return spec;
}

std::vector<double> halving_schedule(double h_min, int count) {
  std::vector<double> h(count);
  for (int i = 0; i < count; ++i) {
    h[count - 1 - i] = h_min * std::pow(2.0, i);
  }
  return h;
}

}  // namespace

TEST_CASE("pointwise ratio is exactly the jump for a single-jump driver") {
  const Kernel k = Kernel::power(0.5);
  const CadlagPath x = simulate(det_spec({0.5}, {-3.0}), 0.0, 1.0);
  PathEval m_eval = [&](double t) { return eval_direct(k, x, t); };
  const auto sched = halving_schedule(1e-5, 11);
  const std::vector<double> probes{0.5};
  const auto rep = pointwise_ratio_scan(k, x, m_eval, probes, sched);
  REQUIRE(rep.probes.size() == 1);
  CHECK(rep.probes[0].jump_truth == -3.0);
  for (double ratio : rep.probes[0].ratios) {
    CHECK(std::abs(ratio - (-3.0)) <= 1e-12 * 3.0);
  }
  CHECK(std::abs(rep.probes[0].richardson - (-3.0)) <= 1e-12 * 3.0);
}

TEST_CASE("pointwise ratio heads to zero off the jump set") {
  const Kernel k = Kernel::power(0.5);
  const CadlagPath x = simulate(det_spec({0.2, 0.6}, {1.0, -2.0}), 0.0, 1.0);
  PathEval m_eval = [&](double t) { return eval_direct(k, x, t); };
  const std::vector<double> probes{0.4, 0.8};
  const auto rep =
      pointwise_ratio_scan(k, x, m_eval, probes, halving_schedule(1e-5, 11));
  const double xsup = x.sup_norm(0.0, 1.0);
  for (const auto& p : rep.probes) {
    CHECK(p.jump_truth == 0.0);
    CHECK(std::abs(p.richardson) <= 5e-2 * (1.0 + xsup));
  }
}

TEST_CASE("pointwise extrapolation recovers jumps on a crowded path") {
  const Kernel k = Kernel::power(0.5);
  const CadlagPath x =
      simulate(det_spec({0.15, 0.4, 0.55, 0.7, 0.85},
                        {1.0, -3.0, 2.0, -1.5, 2.5}),
               0.0, 1.0);
  PathEval m_eval = [&](double t) { return eval_direct(k, x, t); };
  std::vector<double> probes(x.jump_times().begin(), x.jump_times().end());
  const auto rep =
      pointwise_ratio_scan(k, x, m_eval, probes, halving_schedule(1e-5, 11));
  for (const auto& p : rep.probes) {
    CHECK(std::abs(p.richardson - p.jump_truth) <=
          0.05 * std::abs(p.jump_truth));
  }
}

TEST_CASE("probe guards reject out-of-range inputs") {
  const Kernel k = Kernel::power(0.5);
  const CadlagPath x = simulate(det_spec({0.5}, {1.0}), 0.0, 1.0);
  PathEval m_eval = [&](double t) { return eval_direct(k, x, t); };
  const std::vector<double> probes{0.9999};
  CHECK_THROWS_AS(
      pointwise_ratio_scan(k, x, m_eval, probes, halving_schedule(1e-3, 3)),
      std::invalid_argument);
}

TEST_CASE("uniform scan: zero path, single jump, two jumps") {
  const Kernel k = Kernel::power(0.25);
  const std::vector<double> sched{1e-2, 1e-3, 1e-4};

  {
    DriverSpec spec = cp_spec(0.0, 1);
    const CadlagPath x = simulate(spec, 0.0, 1.0);
    PathEval m_eval = [&](double t) { return eval_direct(k, x, t); };
    const auto rep = uniform_modulus_scan(k, x, m_eval, sched, 1000);
    CHECK(rep.sup_jump_truth == 0.0);
    for (double r : rep.sup_ratios) CHECK(r == 0.0);
  }
  {
    const CadlagPath x = simulate(det_spec({0.5}, {1.0}), 0.0, 1.0);
    PathEval m_eval = [&](double t) { return eval_direct(k, x, t); };
    const auto rep = uniform_modulus_scan(k, x, m_eval, sched, 1000);
    CHECK(rep.sup_ratios.back() == doctest::Approx(1.0).epsilon(1e-3));
  }
  {
    const CadlagPath x = simulate(det_spec({0.4, 0.7}, {1.0, -2.0}), 0.0, 1.0);
    PathEval m_eval = [&](double t) { return eval_direct(k, x, t); };
    const auto rep = uniform_modulus_scan(k, x, m_eval, sched, 2000);
    CHECK(std::abs(rep.sup_ratios.back() - 2.0) <= 0.1 * 2.0);
    CHECK(rep.sup_jump_truth == 2.0);
  }
}

TEST_CASE("uniform scan sup is monotone under pair-set enlargement") {
  const Kernel k = Kernel::power(0.5);
  const CadlagPath x = simulate(cp_spec(5.0, 17), 0.0, 1.0);
  PathEval m_eval = [&](double t) { return eval_direct(k, x, t); };
  const std::vector<double> sched{1e-2, 1e-3, 1e-4};
  const auto small = uniform_modulus_scan(k, x, m_eval, sched, 1000);
  const auto large = uniform_modulus_scan(k, x, m_eval, sched, 4000);
  for (std::size_t i = 0; i < sched.size(); ++i) {
    // the golden-ratio stream is a prefix: larger budgets only add pairs
    CHECK(large.sup_ratios[i] >= small.sup_ratios[i]);
  }
}

TEST_CASE("holder exponent: calibration profiles") {
  const std::size_t n = 1 << 14;
  std::vector<double> pow04(n + 1), lin(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    pow04[i] = std::pow(t, 0.4);
    lin[i] = t;
  }
  const auto f1 = holder_exponent(pow04, 1.0, 6);
  CHECK(!f1.degenerate);
  CHECK(std::abs(f1.slope - 0.4) <= 0.02);
  CHECK(f1.r2 >= 0.98);

  const auto f2 = holder_exponent(lin, 1.0, 6);
  CHECK(std::abs(f2.slope - 1.0) <= 0.02);
}

TEST_CASE("holder exponent: constant path reports degenerate") {
  std::vector<double> flat(4097, 3.14);
  const auto fit = holder_exponent(flat, 1.0, 5);
  CHECK(fit.degenerate);
}

TEST_CASE("holder exponent input guards") {
  std::vector<double> v(4097, 0.0);
  CHECK_THROWS_AS(holder_exponent(v, 1.0, 4), std::invalid_argument);
  std::vector<double> tiny(17, 0.0);
  CHECK_THROWS_AS(holder_exponent(tiny, 1.0, 5), std::invalid_argument);
}

TEST_CASE("scaling equivariance of pointwise and uniform limits") {
  const Kernel k = Kernel::power(0.5);
  const CadlagPath x = simulate(det_spec({0.3, 0.6}, {1.0, -0.5}), 0.0, 1.0);
  const CadlagPath x2 = simulate(det_spec({0.3, 0.6}, {2.0, -1.0}), 0.0, 1.0);
  PathEval e1 = [&](double t) { return eval_direct(k, x, t); };
  PathEval e2 = [&](double t) { return eval_direct(k, x2, t); };
  const auto sched = halving_schedule(1e-4, 7);
  const std::vector<double> probes{0.3, 0.6};
  const auto r1 = pointwise_ratio_scan(k, x, e1, probes, sched);
  const auto r2 = pointwise_ratio_scan(k, x2, e2, probes, sched);
  for (std::size_t p = 0; p < r1.probes.size(); ++p) {
    CHECK(r2.probes[p].richardson ==
          doctest::Approx(2.0 * r1.probes[p].richardson).epsilon(1e-10));
  }
  const auto u1 = uniform_modulus_scan(k, x, e1, sched, 1000);
  const auto u2 = uniform_modulus_scan(k, x2, e2, sched, 1000);
  CHECK(u2.sup_ratios.back() ==
        doctest::Approx(2.0 * u1.sup_ratios.back()).epsilon(1e-10));
}

TEST_CASE("linear fit recovers slope and r2 on exact data") {
  std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  std::vector<double> ys{2.0, 4.0, 6.0, 8.0};
  const auto fit = fit_linear(xs, ys);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(0.0));
  CHECK(fit.r2 == doctest::Approx(1.0));
}

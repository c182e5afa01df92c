#include <doctest.h>

#include <cmath>
#include <sstream>

#include "volterra/fraclevy.hpp"
#include "volterra/process.hpp"
#include "volterra/regularity.hpp"

using namespace volterra;

namespace {

DriverSpec cp_centered(double lambda, std::uint64_t seed) {
  DriverSpec spec;
  spec.kind = DriverKind::compound_poisson;
  spec.jump_intensity = lambda;
  spec.jump_law.kind = JumpLawKind::normal;
  spec.seed = seed;
  return spec;
}

std::vector<double> uniform_grid(double hi, std::size_t n) {
  std::vector<double> g(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g[i] = hi * i / n;
  return g;
}

}  // namespace

TEST_CASE("zero driver gives the zero fractional path") {
  const CadlagPath l = make_two_sided(cp_centered(0.0, 1), cp_centered(0.0, 2),
                                      10.0, 1.0);
  const auto path = eval_fraclevy(l, 0.4, uniform_grid(1.0, 32), 10.0);
  for (double v : path.values) CHECK(v == 0.0);
}

TEST_CASE("split consistency and zero at the origin") {
  const CadlagPath l = make_two_sided(cp_centered(10.0, 3), cp_centered(10.0, 4),
                                      10.0, 1.0);
  const auto path = eval_fraclevy(l, 0.25, uniform_grid(1.0, 64), 10.0);
  CHECK(path.values.front() == 0.0);
  CHECK(path.m2_values.front() == 0.0);
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    CHECK(path.values[i] == path.m1_values[i] + path.m2_values[i]);
  }
  std::ostringstream os;
  path.write_csv(os);
  CHECK(os.str().rfind("t,M,M1,M2\n", 0) == 0);
}

TEST_CASE("M1 cross-checks against the dual-route stochastic integral") {
  // M1(t) = 1/Gamma(d+1) * int_0^t (t-r)^d dL, so the power-kernel
  // evaluators scaled by 1/Gamma(d+1) are independent oracles.
  const double d = 0.4;
  const CadlagPath l = make_two_sided(cp_centered(10.0, 5), cp_centered(10.0, 6),
                                      5.0, 1.0);
  const Kernel k = Kernel::power(d);
  const auto grid = uniform_grid(1.0, 16);
  const auto path = eval_fraclevy(l, d, grid, 5.0);
  const double scale = 1.0 / std::tgamma(d + 1.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double direct = scale * eval_direct(k, l, grid[i]);
    const double byparts = scale * eval_by_parts(k, l, grid[i]);
    CHECK(std::abs(path.m1_values[i] - byparts) <=
          1e-10 * (1.0 + std::abs(byparts)));
    CHECK(std::abs(path.m1_values[i] - direct) <=
          1e-10 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("single-jump M1 has the hand-computed value") {
  // unit jump at tau = 0.5: M1(1) = (1 - 0.5)^d / Gamma(d+1)
  const double d = 0.4;
  DriverSpec neg = cp_centered(0.0, 1);
  DriverSpec pos;
  pos.kind = DriverKind::deterministic_jumps;
  pos.jump_times = {0.5};
  pos.jump_sizes = {1.0};
  const CadlagPath l = make_two_sided(pos, neg, 5.0, 1.0);
  const std::vector<double> grid{0.0, 1.0};
  const auto path = eval_fraclevy(l, d, grid, 5.0);
  CHECK(path.m1_values.back() ==
        doctest::Approx(std::pow(0.5, d) / std::tgamma(d + 1.0))
            .epsilon(1e-13));
}

TEST_CASE("M2 closed form for a constant history level") {
  // L = c on [-T, 0): M2(t) = c/Gamma(d+1) * ((t+T)^d - t^d - T^d)
  const double d = 0.4, c = 1.5, T = 10.0;
  const CadlagPath l(-T, 1.0, {-1e-300}, {-c}, 0.0, std::nullopt);
  REQUIRE(l.value(-0.5) == c);
  REQUIRE(l.value(-T + 1e-6) == c);
  const std::vector<double> grid{0.0, 0.25, 1.0};
  const auto path = eval_fraclevy(l, d, grid, T);
  for (std::size_t i = 0; i < path.grid.size(); ++i) {
    const double t = path.grid[i];
    const double closed = c / std::tgamma(d + 1.0) *
                          (std::pow(t + T, d) - std::pow(t, d) -
                           std::pow(T, d));
    CHECK(path.m2_values[i] == doctest::Approx(closed).epsilon(1e-12));
  }
  CHECK(path.m2_values.front() == 0.0);
}

TEST_CASE("M2 segment evaluation agrees with singular quadrature") {
  const double d = 0.3, T = 5.0;
  const CadlagPath l = make_two_sided(cp_centered(0.0, 1), cp_centered(4.0, 9),
                                      T, 1.0);
  REQUIRE(l.jump_times().size() > 2);
  const double t = 0.7;
  const std::vector<double> grid{t};
  const auto path = eval_fraclevy(l, d, grid, T);

  // independent route: u = -r substitution with the endpoint singularity
  // u^(d-1) handled by the power substitution, split at the jump times
  std::vector<double> breaks;
  for (double tau : l.jump_times()) {
    if (tau < 0.0 && tau > -T) breaks.push_back(-tau);
  }
  std::sort(breaks.begin(), breaks.end());
  auto fn = [&](double u) {
    return (std::pow(t + u, d - 1.0) - std::pow(u, d - 1.0)) * l.value(-u);
  };
  QuadratureOptions quad;
  quad.rel_tol = 1e-12;
  double total = integrate_power_endpoint(fn, breaks.front(), d - 1.0, quad);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    total += integrate(fn, breaks[i], breaks[i + 1], quad);
  }
  total += integrate(fn, breaks.back(), T, quad);
  total /= std::tgamma(d);
  CHECK(path.m2_values.front() ==
        doctest::Approx(total).epsilon(1e-9));
}

TEST_CASE("truncation bound: zero at zero, linear in delta, decreasing in T") {
  const double m2 = 2.0, d = 0.25, t = 1.0;
  CHECK(truncation_tail_bound(m2, d, t, 10.0, 0.0) == 0.0);
  const double b1 = truncation_tail_bound(m2, d, t, 10.0, 0.01);
  const double b2 = truncation_tail_bound(m2, d, t, 10.0, 0.02);
  CHECK(std::abs(b2 / b1 - 2.0) <= 1e-12);
  CHECK(truncation_tail_bound(m2, d, t, 100.0, 0.01) < b1);
  // the envelope integral diverges as d approaches 1/2
  CHECK_THROWS_AS(truncation_tail_bound(m2, 0.495, t, 10.0, 0.01),
                  std::invalid_argument);
  // increments larger than the t + T margin are out of scope
  CHECK_THROWS_AS(truncation_tail_bound(m2, d, 0.5, 1.0, 2.0),
                  std::invalid_argument);
}

TEST_CASE("default truncation depth meets the bound target") {
  const double m2 = 10.0, d = 0.25;
  const double T = default_truncation_T(m2, d, 1.0, 1.0 / 16384.0);
  CHECK(truncation_tail_bound(m2, d, 1.0, T, 1.0 / 16384.0) <=
        1e-3 * std::sqrt(m2));
}

TEST_CASE("realized tail increments scale at least like delta^d") {
  const CadlagPath l = make_two_sided(cp_centered(10.0, 21),
                                      cp_centered(10.0, 22), 50.0, 1.0);
  for (double a : {-5.0, -10.0}) {
    std::vector<double> lx, ly;
    for (double delta : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const double inc = std::abs(tail_increment(l, 0.25, 1.0, a, delta));
      REQUIRE(inc > 0.0);
      lx.push_back(std::log(delta));
      ly.push_back(std::log(inc));
    }
    const auto fit = fit_linear(lx, ly);
    CHECK(fit.slope >= 0.25);
    // the proof-side rate is linear in delta
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(0.15));
  }
}

TEST_CASE("distributional sanity: sample mean of M_d(1) is centered") {
  const double d = 0.25;
  const int n = 1000;
  double sum = 0.0, sumsq = 0.0;
  for (int r = 0; r < n; ++r) {
    const CadlagPath l =
        make_two_sided(cp_centered(10.0, 1000 + 2 * r),
                       cp_centered(10.0, 1001 + 2 * r), 10.0, 1.0);
    const std::vector<double> grid{0.0, 1.0};
    const auto path = eval_fraclevy(l, d, grid, 10.0);
    const double v = path.values.back();
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / n;
  const double sd = std::sqrt((sumsq - n * mean * mean) / (n - 1));
  CHECK(std::abs(mean) <= 4.0 * sd / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("fractional evaluation rejects bad inputs") {
  const CadlagPath l = make_two_sided(cp_centered(1.0, 1), cp_centered(1.0, 2),
                                      10.0, 1.0);
  const std::vector<double> grid{0.0, 1.0};
  const std::vector<double> long_grid{0.0, 2.0};
  CHECK_THROWS_AS(eval_fraclevy(l, 0.6, grid, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(eval_fraclevy(l, 0.25, grid, 20.0),
                  std::invalid_argument);  // horizon too short
  CHECK_THROWS_AS(eval_fraclevy(l, 0.25, long_grid, 10.0),
                  std::invalid_argument);  // grid beyond the driver
}

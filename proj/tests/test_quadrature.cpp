#include <doctest.h>

#include <cmath>

#include "volterra/quadrature.hpp"

using namespace volterra;

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
  const auto& [nodes, weights] = gauss_legendre(16);
  REQUIRE(nodes.size() == 16);
  // order-16 rule is exact through degree 31
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    acc += weights[i] * std::pow(nodes[i], 30);
  }
  CHECK(acc == doctest::Approx(2.0 / 31.0).epsilon(1e-13));
}

TEST_CASE("integrate handles smooth integrands to tight tolerance") {
  const double got = integrate([](double x) { return std::sin(x); }, 0.0, 2.0);
  CHECK(std::abs(got - (1.0 - std::cos(2.0))) < 1e-12);
}

TEST_CASE("power-endpoint substitution is exact for pure powers") {
  for (double d : {0.25, 0.4, 0.5, 0.75}) {
    const double got = integrate_power_endpoint(
        [d](double u) { return std::pow(u, d - 1.0); }, 1.0, d - 1.0);
    CHECK(std::abs(got - 1.0 / d) < 1e-13 * (1.0 / d));
  }
}

TEST_CASE("power-endpoint handles singular-times-smooth integrands") {
  // int_0^1 u^(-1/2) cos(u) du, reference from 30-digit quadrature
  const double ref = 1.8090484758005441;
  const double got = integrate_power_endpoint(
      [](double u) { return std::cos(u) / std::sqrt(u); }, 1.0, -0.5);
  CHECK(std::abs(got - ref) < 1e-9);
}

TEST_CASE("geometric splitting integrates decaying tails") {
  // int_1^1e6 v^(-1.75) dv = (1 - 1e6^(-0.75)) / 0.75
  const double ref = (1.0 - std::pow(1e6, -0.75)) / 0.75;
  const double got = integrate_geometric(
      [](double v) { return std::pow(v, -1.75); }, 1.0, 1e6);
  CHECK(std::abs(got - ref) < 1e-9 * ref);
}

TEST_CASE("zero-length and zero integrands cost nothing") {
  CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
  CHECK(integrate([](double) { return 0.0; }, 0.0, 1.0) == 0.0);
  CHECK(integrate_power_endpoint([](double) { return 1.0; }, 0.0, -0.5) == 0.0);
}

TEST_CASE("node cap raises QuadratureError") {
  QuadratureOptions opt;
  opt.max_nodes = 64;
  opt.rel_tol = 1e-16;
  opt.abs_tol = 0.0;
  // A kink keeps successive panel estimates from agreeing at 1e-16.
  CHECK_THROWS_AS(
      integrate([](double x) { return std::abs(x - 0.3141); }, 0.0, 1.0, opt),
      QuadratureError);
}

TEST_CASE("invalid arguments are rejected") {
  CHECK_THROWS_AS(integrate_power_endpoint([](double) { return 1.0; }, 1.0,
                                           -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate_geometric([](double) { return 1.0; }, 0.0, 1.0),
                  std::invalid_argument);
}

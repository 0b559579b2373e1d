#include <doctest.h>

#include <array>
#include <cmath>

#include "oracles.hpp"
#include "stablecos/cos_engine.hpp"
#include "stablecos/errors.hpp"
#include "stablecos/presets.hpp"
#include "stablecos/transform_refs.hpp"

using namespace stablecos;

namespace {

const MarketSpec kMarket(100.0, 0.1, 0.0, 1.0);
const KouModel kBlackScholes(0.2, 0.5, 10.0, 5.0, 0.0);

// e^{-rT} E[(S_T - K)^+] by quadrature against the lognormal density.
double lognormal_call_quad(double k) {
  const double s = 0.2, mu = 0.1 - 0.5 * s * s;
  auto f = [&](double x) {
    const double z = (x - mu) / s;
    const double density = std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * M_PI));
    return (100.0 * std::exp(x) - k) * density;
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  return std::exp(-0.1) * ts.integrate(f, std::log(k / 100.0), mu + 12 * s);
}

}  // namespace

TEST_CASE("Fourier integral pricer reproduces Black-Scholes") {
  for (double k : {80.0, 95.0, 100.0, 110.0, 130.0}) {
    CAPTURE(k);
    const double ftm = price_fourier_integral(kBlackScholes, kMarket, k, IntegralConfig{});
    CHECK(std::abs(ftm - oracle::bs_call(100, k, 0.1, 0.0, 0.2, 1.0)) < 1e-9);
    CHECK(std::abs(ftm - lognormal_call_quad(k)) < 1e-9);
  }
}

TEST_CASE("Fourier integral pricer is insensitive to the damping") {
  const Profile& p = profile("kou");
  IntegralConfig a, b;
  a.damping = 1.1;
  b.damping = 1.8;
  CHECK(std::abs(price_fourier_integral(p.model, kMarket, 105.0, a) -
                 price_fourier_integral(p.model, kMarket, 105.0, b)) < 1e-9);
}

TEST_CASE("Carr-Madan FFT") {
  const std::vector<double> strikes = {80.0, 92.5, 100.0, 117.0};
  const auto prices = price_carr_madan(kBlackScholes, kMarket, strikes, CarrMadanConfig{});
  REQUIRE(prices.size() == strikes.size());
  for (std::size_t i = 0; i < strikes.size(); ++i) {
    CAPTURE(strikes[i]);
    const double exact = oracle::bs_call(100, strikes[i], 0.1, 0.0, 0.2, 1.0);
    CHECK(std::abs(prices[i] - exact) < 1e-3);
  }
  // on-grid strike needs no interpolation
  CHECK(std::abs(prices[2] - oracle::bs_call(100, 100, 0.1, 0.0, 0.2, 1.0)) < 1e-8);
}

TEST_CASE("Carr-Madan input validation") {
  const std::vector<double> k = {100.0};
  CarrMadanConfig cfg;
  cfg.grid_size = 1000;
  CHECK_THROWS_AS(price_carr_madan(kBlackScholes, kMarket, k, cfg), ValidationError);
  cfg = CarrMadanConfig{};
  cfg.damping = -0.5;
  CHECK_THROWS_AS(price_carr_madan(kBlackScholes, kMarket, k, cfg), ValidationError);

  // grid spans |ln(K/S0)| < pi / eta; coarse spacing shrinks it
  cfg = CarrMadanConfig{};
  cfg.spacing = 2.0;
  const std::vector<double> far = {100.0 * std::exp(2.0)};
  CHECK_THROWS_AS(price_carr_madan(kBlackScholes, kMarket, far, cfg), DomainError);

  // damping outside the analyticity strip
  cfg = CarrMadanConfig{};
  cfg.damping = 9.5;
  CHECK_THROWS_AS(price_carr_madan(profile("kou").model, kMarket, k, cfg), DomainError);

  CHECK(price_carr_madan(kBlackScholes, kMarket, std::vector<double>{}, CarrMadanConfig{}).empty());
}

TEST_CASE("Fourier integral input validation") {
  IntegralConfig cfg;
  cfg.damping = 0.9;
  CHECK_THROWS_AS(price_fourier_integral(kBlackScholes, kMarket, 100.0, cfg), ValidationError);
  CHECK_THROWS_AS(price_fourier_integral(kBlackScholes, kMarket, -5.0, IntegralConfig{}),
                  ValidationError);
  cfg = IntegralConfig{};
  cfg.damping = 6.0;
  CHECK_THROWS_AS(price_fourier_integral(profile("cgmy1").model, kMarket, 100.0, cfg),
                  DomainError);
}

TEST_CASE("four-point natural cubic spline") {
  const std::array<double, 4> xs = {0.0, 1.0, 2.5, 3.0};
  const std::array<double, 4> line = {1.0, 3.0, 6.0, 7.0};
  CHECK(natural_cubic_spline4(xs, line, 1.7) == doctest::Approx(4.4));
  const std::array<double, 4> ys = {0.3, -1.0, 2.0, 0.5};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(natural_cubic_spline4(xs, ys, xs[i]) == doctest::Approx(ys[i]).epsilon(1e-14));
  }
  // smooth data is recovered between nodes; the natural end conditions
  // cost O(h^2)
  const std::array<double, 4> h = {0.0, 0.1, 0.2, 0.3};
  std::array<double, 4> e;
  for (std::size_t i = 0; i < 4; ++i) e[i] = std::exp(h[i]);
  CHECK(natural_cubic_spline4(h, e, 0.15) == doctest::Approx(std::exp(0.15)).epsilon(1e-3));
}

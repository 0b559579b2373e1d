#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "stablecos/errors.hpp"
#include "stablecos/models.hpp"
#include "stablecos/presets.hpp"
#include "stablecos/special_functions.hpp"

using namespace stablecos;

namespace {

const MarketSpec kMarket(100.0, 0.1, 0.0, 1.0);

double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("characteristic functions satisfy the basic axioms") {
  for (const Profile& p : profiles()) {
    CAPTURE(p.name);
    CHECK(std::abs(char_fn(p.model, kMarket, 0.0) - 1.0) < 1e-14);

    // martingale identity
    const Complex at_minus_i = char_fn(p.model, kMarket, Complex(0.0, -1.0));
    CHECK(std::abs(at_minus_i - std::exp(kMarket.rate() * kMarket.maturity())) < 1e-10);

    for (double u = -60.0; u <= 60.0; u += 0.37) {
      const Complex f = char_fn(p.model, kMarket, u);
      CHECK(std::abs(f) <= 1.0 + 1e-14);
      CHECK(std::abs(char_fn(p.model, kMarket, -u) - std::conj(f)) < 1e-14);
    }
  }
}

TEST_CASE("martingale identity holds with dividends and other maturities") {
  for (double t : {0.1, 0.5, 5.0}) {
    const MarketSpec mkt(80.0, 0.03, 0.02, t);
    for (const Profile& p : profiles()) {
      CAPTURE(p.name);
      CAPTURE(t);
      const Complex v = char_fn(p.model, mkt, Complex(0.0, -1.0));
      CHECK(std::abs(v - std::exp(0.01 * t)) < 1e-10);
    }
  }
}

TEST_CASE("Kou without jumps is the Black-Scholes characteristic function") {
  const KouModel bs(0.25, 0.4, 10.0, 5.0, 0.0);
  const double s = 0.25, t = 1.0, mu = 0.1 - 0.5 * s * s;
  for (double u = -30.0; u <= 30.0; u += 0.5) {
    const Complex expected = std::exp(Complex(-0.5 * s * s * u * u * t, mu * u * t));
    CHECK(std::abs(char_fn(bs, kMarket, u) - expected) < 1e-14);
  }
}

TEST_CASE("CGMY log-CF matches the textbook power form away from cancellation") {
  const CgmyModel m(1.0, 5.0, 5.0, 1.5);
  const double y = 1.5, g = 5.0, mm = 5.0, t = 1.0;
  const double gam = std::tgamma(-y);
  const double drift =
      0.1 - gam * (std::pow(mm - 1.0, y) - std::pow(mm, y) + std::pow(g + 1.0, y) - std::pow(g, y));
  for (double u : {0.5, 2.0, 7.0, 25.0, -3.0}) {
    const Complex iu(0.0, u);
    const Complex expected =
        iu * drift * t +
        t * gam * (std::pow(mm - iu, y) - std::pow(mm, y) + std::pow(g + iu, y) - std::pow(g, y));
    CAPTURE(u);
    CHECK(rel_err(log_char_fn(m, kMarket, u), expected) < 1e-12);
  }
}

TEST_CASE("Heston CF decays and stays finite for large arguments") {
  const Profile& p = profile("heston");
  for (double u : {100.0, 1e3, 1e4}) {
    const Complex f = char_fn(p.model, kMarket, u);
    CHECK(std::isfinite(f.real()));
    CHECK(std::abs(f) < 1e-3);
  }
}

TEST_CASE("cumulants agree with closed forms") {
  SUBCASE("kou") {
    const KouModel k(0.16, 0.4, 10.0, 5.0, 5.0);
    const double l = 5.0, p = 0.4, e1 = 10.0, e2 = 5.0;
    const Cumulants c = cumulants(k, kMarket);
    const double c2 = 0.16 * 0.16 + 2.0 * l * (p / (e1 * e1) + (1 - p) / (e2 * e2));
    const double c4 = 24.0 * l * (p / std::pow(e1, 4) + (1 - p) / std::pow(e2, 4));
    CHECK(c.c2 == doctest::Approx(c2).epsilon(1e-10));
    CHECK(c.c4 == doctest::Approx(c4).epsilon(1e-10));
  }
  SUBCASE("cgmy") {
    for (double y : {0.5, 1.5, 1.98}) {
      CAPTURE(y);
      const CgmyModel m(1.0, 5.0, 7.0, y);
      const Cumulants c = cumulants(m, kMarket);
      const double c2 = std::tgamma(2 - y) * (std::pow(7.0, y - 2) + std::pow(5.0, y - 2));
      const double c4 = std::tgamma(4 - y) * (std::pow(7.0, y - 4) + std::pow(5.0, y - 4));
      CHECK(c.c2 == doctest::Approx(c2).epsilon(1e-10));
      CHECK(c.c4 == doctest::Approx(c4).epsilon(1e-10));
    }
  }
  SUBCASE("heston variance") {
    // Var X_T = a^2 Var I + b^2 Var v_T + 2ab Cov(I, v_T) + (1 - rho^2) E I, I = int_0^T v,
    // from the CIR moments; a = kappa rho / sigma - 1/2, b = rho / sigma.
    const double k = 0.85, th = 0.09, s = 0.1, r = -0.7, v0 = 0.0625, t = 1.0;
    auto mean_v = [&](double u) { return th + (v0 - th) * std::exp(-k * u); };
    auto var_v = [&](double u) {
      return v0 * s * s / k * (std::exp(-k * u) - std::exp(-2 * k * u)) +
             th * s * s / (2 * k) * std::pow(1 - std::exp(-k * u), 2);
    };
    const double var_i = 2.0 * oracle::integrate(
                                   [&](double u) {
                                     return oracle::integrate(
                                         [&](double w) { return std::exp(-k * (w - u)) * var_v(u); },
                                         u, t, 4);
                                   },
                                   0.0, t, 8);
    const double cov_iv = oracle::integrate([&](double u) { return std::exp(-k * (t - u)) * var_v(u); }, 0.0, t);
    const double mean_i = oracle::integrate(mean_v, 0.0, t);
    const double a = k * r / s - 0.5, b = r / s;
    const double c2 = a * a * var_i + b * b * var_v(t) + 2 * a * b * cov_iv + (1 - r * r) * mean_i;
    CHECK(cumulants(HestonModel(k, th, s, r, v0), kMarket).c2 == doctest::Approx(c2).epsilon(1e-10));
  }
}

TEST_CASE("cumulants agree with finite differences of the CGF") {
  for (const Profile& p : profiles()) {
    CAPTURE(p.name);
    const Cumulants c = cumulants(p.model, kMarket);
    CHECK(c.c1 == doctest::Approx(oracle::fd_cumulant(p.model, kMarket, 1, 1e-3)).epsilon(1e-7));
    CHECK(c.c2 == doctest::Approx(oracle::fd_cumulant(p.model, kMarket, 2, 1e-3)).epsilon(1e-5));
    // fourth differences lose digits; only a coarse cross-check
    CHECK(c.c4 == doctest::Approx(oracle::fd_cumulant(p.model, kMarket, 4, 2e-2)).epsilon(5e-2));
  }
}

TEST_CASE("truncation range") {
  const Cumulants c{0.05, 0.04, 0.0016};
  const TruncationRange r = truncation_range(c, 10.0);
  const double half = 10.0 * std::sqrt(0.04 + 0.04);
  CHECK(r.a == doctest::Approx(0.05 - half));
  CHECK(r.b == doctest::Approx(0.05 + half));
  CHECK(truncation_range(c, 12.0).width() > r.width());
  CHECK(r.shifted(0.3).a == doctest::Approx(r.a + 0.3));
  CHECK_THROWS_AS(truncation_range(c, 0.0), ValidationError);
  CHECK_THROWS_AS(truncation_range(c, -1.0), ValidationError);
  CHECK_THROWS_AS(truncation_range(Cumulants{0.0, 0.0, 0.0}, 10.0), ValidationError);

  // wider for longer maturities
  for (const Profile& p : profiles()) {
    const auto short_t = truncation_range(cumulants(p.model, kMarket.with_maturity(0.1)), 10);
    const auto long_t = truncation_range(cumulants(p.model, kMarket.with_maturity(5.0)), 10);
    CHECK(long_t.width() > short_t.width());
  }
}

TEST_CASE("analyticity strips and domain errors") {
  const KouModel kou(0.16, 0.4, 10.0, 5.0, 5.0);
  CHECK(analyticity_strip(kou).lower == -10.0);
  CHECK(analyticity_strip(kou).upper == 5.0);
  const CgmyModel cgmy(1.0, 4.0, 6.0, 1.5);
  CHECK(analyticity_strip(cgmy).lower == -6.0);
  CHECK(analyticity_strip(cgmy).upper == 4.0);
  CHECK(analyticity_strip(profile("heston").model).contains(-50.0));

  CHECK_THROWS_AS(char_fn(kou, kMarket, Complex(1.0, 5.5)), DomainError);
  CHECK_THROWS_AS(char_fn(kou, kMarket, Complex(1.0, -10.0)), DomainError);
  CHECK_NOTHROW(char_fn(kou, kMarket, Complex(1.0, -9.9)));
  CHECK_THROWS_AS(char_fn(cgmy, kMarket, Complex(0.0, 4.0)), DomainError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(MarketSpec(-1.0, 0.1, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(MarketSpec(100.0, 0.1, 0.0, 0.0), ValidationError);
  CHECK_THROWS_AS(HestonModel(-0.85, 0.09, 0.1, -0.7, 0.06), ValidationError);
  CHECK_THROWS_AS(HestonModel(0.85, 0.09, 0.1, -1.5, 0.06), ValidationError);
  CHECK_THROWS_AS(HestonModel(0.85, 0.09, 0.0, -0.7, 0.06), ValidationError);
  CHECK_THROWS_AS(KouModel(0.16, 1.5, 10.0, 5.0, 5.0), ValidationError);
  CHECK_THROWS_AS(KouModel(0.16, 0.4, 1.0, 5.0, 5.0), ValidationError);  // no finite mean
  CHECK_THROWS_AS(KouModel(0.16, 0.4, 10.0, 5.0, -1.0), ValidationError);
  CHECK_THROWS_AS(CgmyModel(1.0, 5.0, 5.0, 1.0), ValidationError);
  CHECK_THROWS_AS(CgmyModel(1.0, 5.0, 5.0, 0.0), ValidationError);
  CHECK_THROWS_AS(CgmyModel(1.0, 5.0, 5.0, 2.0), ValidationError);
  CHECK_THROWS_AS(CgmyModel(1.0, 5.0, 1.0, 1.5), ValidationError);
  CHECK_THROWS_AS(CgmyModel(-1.0, 5.0, 5.0, 1.5), ValidationError);
}

TEST_CASE("Lanczos gamma") {
  for (double x : {0.3, 1.0, 2.5, 7.2, 20.0, -0.5, -1.5, -1.98, -0.02, -2.7}) {
    CAPTURE(x);
    CHECK(lanczos_gamma(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-4.0, 6.0), im(-5.0, 5.0);
  for (int i = 0; i < 50; ++i) {
    const Complex z(re(rng), im(rng));
    CAPTURE(z);
    CHECK(rel_err(lanczos_gamma(z + 1.0), z * lanczos_gamma(z)) < 1e-12);
    CHECK(rel_err(lanczos_gamma(std::conj(z)), std::conj(lanczos_gamma(z))) < 1e-14);
  }
}

TEST_CASE("complex expm1 and log1p keep small-argument accuracy") {
  const Complex z(1e-10, -2e-10);
  CHECK(rel_err(stablecos::expm1(z), z + 0.5 * z * z) < 1e-15);
  CHECK(std::abs(stablecos::log1p(z) - (z - 0.5 * z * z)) < 1e-25);
  for (Complex w : {Complex(0.7, 1.3), Complex(-2.0, 0.5), Complex(3.0, -4.0)}) {
    CHECK(rel_err(stablecos::expm1(w), std::exp(w) - 1.0) < 1e-14);
    CHECK(rel_err(stablecos::log1p(w), std::log(1.0 + w)) < 1e-14);
  }
}

TEST_CASE("power_increment") {
  // base^y * ((1 + z/base)^y - 1) = (base + z)^y - base^y
  for (Complex z : {Complex(0.0, 1e-6), Complex(0.0, 3.0), Complex(2.0, -7.0)}) {
    const Complex got = power_increment(5.0, z, 1.98);
    const Complex want = std::pow(5.0 + z, 1.98) - std::pow(5.0, 1.98);
    CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  }
  // y b^(y-1) z + y (y-1)/2 b^(y-2) z^2 for tiny z
  const Complex z(0.0, 1e-9);
  const Complex series = 1.5 * std::sqrt(5.0) * z + 0.375 / std::sqrt(5.0) * z * z;
  CHECK(std::abs(power_increment(5.0, z, 1.5) - series) < 1e-24);
}

TEST_CASE("compensated summation") {
  CompensatedSum s;
  for (double v : {1.0, 1e100, 1.0, -1e100}) s.add(v);
  CHECK(s.value() == 2.0);

  CompensatedSum t;
  for (int i = 0; i < 1000000; ++i) t.add(0.1);
  CHECK(std::abs(t.value() - 100000.0) < 1e-9);
}

#include "stablecos/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace stablecos {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

std::complex<double> lanczos_gamma(std::complex<double> z) {
  using std::numbers::pi;
  if (z.real() < 0.5) {
    // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
    return pi / (std::sin(pi * z) * lanczos_gamma(1.0 - z));
  }
  z -= 1.0;
  std::complex<double> x = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
    x += kLanczosCoeffs[i] / (z + static_cast<double>(i));
  }
  const std::complex<double> t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

double lanczos_gamma(double x) {
  return lanczos_gamma(std::complex<double>(x, 0.0)).real();
}

std::complex<double> log1p(std::complex<double> z) {
  const double x = z.real();
  const double y = z.imag();
  // |1 + z|^2 - 1 = 2x + x^2 + y^2
  const double re = 0.5 * std::log1p(2.0 * x + x * x + y * y);
  const double im = std::atan2(y, 1.0 + x);
  return {re, im};
}

std::complex<double> expm1(std::complex<double> z) {
  const double x = z.real();
  const double y = z.imag();
  const double half_sin = std::sin(0.5 * y);
  // cos(y) - 1 = -2 sin^2(y/2)
  const double re = std::expm1(x) * std::cos(y) - 2.0 * half_sin * half_sin;
  const double im = std::exp(x) * std::sin(y);
  return {re, im};
}

std::complex<double> power_increment(double base, std::complex<double> z, double y) {
  return std::pow(base, y) * expm1(y * log1p(z / base));
}

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    carry_ += (sum_ - t) + x;
  } else {
    carry_ += (x - t) + sum_;
  }
  sum_ = t;
}

}  // namespace stablecos

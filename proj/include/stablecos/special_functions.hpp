#pragma once

#include <complex>

namespace stablecos {

/// Gamma function by the Lanczos approximation (g = 7, 9 terms), with the
/// reflection formula for Re(z) < 1/2. Relative accuracy ~1e-15.
std::complex<double> lanczos_gamma(std::complex<double> z);
double lanczos_gamma(double x);

/// log(1 + z) and exp(z) - 1 without cancellation for small |z|.
std::complex<double> log1p(std::complex<double> z);
std::complex<double> expm1(std::complex<double> z);

/// (base + z)^y - base^y for base > 0, evaluated as
/// base^y * expm1(y * log1p(z / base)). Principal branch.
std::complex<double> power_increment(double base, std::complex<double> z, double y);

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace stablecos

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stablecos/models.hpp"

namespace stablecos {

/// FFT pricer over the log-strike grid k_j = -pi/eta + j * 2 pi / (N eta),
/// k = ln(K / S0). K = S0 lands exactly on the grid.
struct CarrMadanConfig {
  std::size_t grid_size = std::size_t{1} << 16;
  double damping = 0.75;
  double spacing = 0.01;  // eta, frequency step
};

struct IntegralConfig {
  double damping = 1.1;
  double upper_limit = 5000.0;
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
};

/// European call prices by FFT inversion of the damped call transform,
/// Simpson-weighted, then natural cubic spline through the four nearest
/// grid points.
std::vector<double> price_carr_madan(const ModelSpec& model, const MarketSpec& market,
                                     std::span<const double> strikes,
                                     const CarrMadanConfig& config);

/// European call price as the Fourier integral of the damped payoff
/// transform against the characteristic function, by adaptive
/// Gauss-Kronrod quadrature on [0, upper_limit] (Hermitian symmetry).
double price_fourier_integral(const ModelSpec& model, const MarketSpec& market, double strike,
                              const IntegralConfig& config);

/// Natural cubic spline through four points, evaluated at x.
double natural_cubic_spline4(std::span<const double, 4> xs, std::span<const double, 4> ys,
                             double x);

}  // namespace stablecos

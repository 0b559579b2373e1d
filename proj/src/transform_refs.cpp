#include "stablecos/transform_refs.hpp"

#include <fftw3.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <utility>

#include "stablecos/errors.hpp"

namespace stablecos {

namespace {

constexpr Complex kI{0.0, 1.0};

struct FftwFree {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

FftwBuffer make_buffer(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer(p);
}

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void forward_fft(fftw_complex* in, fftw_complex* out, std::size_t n) {
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

void require_strip(const ModelSpec& model, double im, const char* who) {
  if (!analyticity_strip(model).contains(im)) {
    std::ostringstream os;
    os << who << ": damping puts Im(u) = " << im << " outside the analyticity strip of the "
       << model_kind(model) << " model";
    throw DomainError(os.str());
  }
}

}  // namespace

double natural_cubic_spline4(std::span<const double, 4> xs, std::span<const double, 4> ys,
                             double x) {
  const double h0 = xs[1] - xs[0];
  const double h1 = xs[2] - xs[1];
  const double h2 = xs[3] - xs[2];
  const double r1 = 6.0 * ((ys[2] - ys[1]) / h1 - (ys[1] - ys[0]) / h0);
  const double r2 = 6.0 * ((ys[3] - ys[2]) / h2 - (ys[2] - ys[1]) / h1);
  // [2(h0+h1)  h1      ] [m1]   [r1]
  // [h1        2(h1+h2)] [m2] = [r2]
  const double d11 = 2.0 * (h0 + h1);
  const double d22 = 2.0 * (h1 + h2);
  const double det = d11 * d22 - h1 * h1;
  const double m1 = (r1 * d22 - h1 * r2) / det;
  const double m2 = (d11 * r2 - h1 * r1) / det;
  const double m[4] = {0.0, m1, m2, 0.0};

  std::size_t i = 0;
  if (x > xs[1]) i = 1;
  if (x > xs[2]) i = 2;
  const double h = xs[i + 1] - xs[i];
  const double t0 = xs[i + 1] - x;
  const double t1 = x - xs[i];
  return m[i] * t0 * t0 * t0 / (6.0 * h) + m[i + 1] * t1 * t1 * t1 / (6.0 * h) +
         (ys[i] / h - m[i] * h / 6.0) * t0 + (ys[i + 1] / h - m[i + 1] * h / 6.0) * t1;
}

std::vector<double> price_carr_madan(const ModelSpec& model, const MarketSpec& market,
                                     std::span<const double> strikes,
                                     const CarrMadanConfig& config) {
  const std::size_t n = config.grid_size;
  if (n < 8 || (n & (n - 1)) != 0) throw ValidationError("FFT grid size must be a power of two");
  if (!(config.damping > 0.0)) throw ValidationError("Carr-Madan damping must be positive");
  if (!(config.spacing > 0.0)) throw ValidationError("Carr-Madan spacing must be positive");
  const double alpha = config.damping;
  require_strip(model, -(alpha + 1.0), "Carr-Madan");

  const double eta = config.spacing;
  const double lambda = 2.0 * std::numbers::pi / (static_cast<double>(n) * eta);
  const double beta = std::numbers::pi / eta;  // k_0 = -beta
  const double discount = std::exp(-market.rate() * market.maturity());

  auto in = make_buffer(n);
  auto out = make_buffer(n);
  const auto signed_n = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < signed_n; ++j) {
    const double v = static_cast<double>(j) * eta;
    const Complex phi = std::exp(log_char_fn(model, market, Complex(v, -(alpha + 1.0))));
    const Complex psi =
        discount * phi / Complex(alpha * alpha + alpha - v * v, (2.0 * alpha + 1.0) * v);
    // Simpson weights 1, 4, 2, 4, ..., scaled by eta / 3.
    const double simpson = (j == 0) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    const Complex x = std::polar(1.0, v * beta) * psi * (simpson * eta / 3.0);
    in[j][0] = x.real();
    in[j][1] = x.imag();
  }
  forward_fft(in.get(), out.get(), n);

  auto grid_k = [&](std::size_t j) { return -beta + lambda * static_cast<double>(j); };
  auto grid_price = [&](std::size_t j) {
    return market.spot() * std::exp(-alpha * grid_k(j)) / std::numbers::pi * out[j][0];
  };

  std::vector<double> prices;
  prices.reserve(strikes.size());
  for (double strike : strikes) {
    if (!(strike > 0.0)) throw ValidationError("strike must be positive");
    const double k = std::log(strike / market.spot());
    const double pos = (k + beta) / lambda;
    if (!(pos >= 1.0) || !(pos <= static_cast<double>(n) - 3.0)) {
      std::ostringstream os;
      os << "strike " << strike << " outside the Carr-Madan log-strike grid";
      throw DomainError(os.str());
    }
    const auto j0 = static_cast<std::size_t>(std::floor(pos));
    const std::size_t first = j0 - 1;
    double xs[4], ys[4];
    for (std::size_t i = 0; i < 4; ++i) {
      xs[i] = grid_k(first + i);
      ys[i] = grid_price(first + i);
    }
    const double value = natural_cubic_spline4(xs, ys, k);
    if (!std::isfinite(value)) throw ComputationError("non-finite Carr-Madan price");
    prices.push_back(value);
  }
  return prices;
}

double price_fourier_integral(const ModelSpec& model, const MarketSpec& market, double strike,
                              const IntegralConfig& config) {
  if (!(strike > 0.0)) throw ValidationError("strike must be positive");
  if (!(config.damping > 1.0)) throw ValidationError("Fourier integral damping must exceed 1");
  if (!(config.upper_limit > 0.0)) throw ValidationError("integration bound must be positive");
  const double alpha = config.damping;
  require_strip(model, -alpha, "Fourier integral");

  const double x = std::log(market.spot() / strike);
  auto integrand = [&](double u) {
    const Complex z(-u, -alpha);
    const Complex payoff = strike / (Complex(alpha, -u) * Complex(alpha - 1.0, -u));
    return (payoff * std::exp(kI * z * x + log_char_fn(model, market, z))).real();
  };

  // Geometric panels 0, 1/2, 1, 2, 4, ... so that integrands concentrated
  // near the origin are resolved before the long flat tail.
  std::vector<std::pair<double, double>> panels;
  for (double lo = 0.0, hi = std::min(0.5, config.upper_limit); lo < config.upper_limit;
       lo = hi, hi = std::min(2.0 * hi, config.upper_limit)) {
    panels.emplace_back(lo, hi);
  }

  // GSL reports through status codes; its default handler aborts.
  [[maybe_unused]] static const gsl_error_handler_t* previous = gsl_set_error_handler_off();

  constexpr std::size_t kMaxIntervals = 2000;
  std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)> workspace(
      gsl_integration_workspace_alloc(kMaxIntervals), &gsl_integration_workspace_free);
  gsl_function fn;
  fn.function = [](double u, void* params) {
    return (*static_cast<decltype(integrand)*>(params))(u);
  };
  fn.params = &integrand;

  const double panel_abs_tol = config.abs_tol / static_cast<double>(panels.size());
  double integral = 0.0;
  for (const auto& [lo, hi] : panels) {
    double value = 0.0;
    double error = 0.0;
    const int status = gsl_integration_qag(&fn, lo, hi, panel_abs_tol, config.rel_tol,
                                           kMaxIntervals, GSL_INTEG_GAUSS31, workspace.get(),
                                           &value, &error);
    if (status != GSL_SUCCESS || !std::isfinite(value)) {
      std::ostringstream os;
      os << "Fourier integral quadrature did not converge on [" << lo << ", " << hi
         << "]: " << gsl_strerror(status) << " (error estimate " << error << ")";
      throw ComputationError(os.str());
    }
    integral += value;
  }
  return std::exp(-market.rate() * market.maturity()) / std::numbers::pi * integral;
}

}  // namespace stablecos

#pragma once

#include <complex>
#include <limits>
#include <string>
#include <variant>

namespace stablecos {

using Complex = std::complex<double>;

/// Spot, continuously-compounded rate and dividend yield, maturity in years.
class MarketSpec {
 public:
  MarketSpec(double spot, double rate, double dividend, double maturity);

  double spot() const noexcept { return spot_; }
  double rate() const noexcept { return rate_; }
  double dividend() const noexcept { return dividend_; }
  double maturity() const noexcept { return maturity_; }

  MarketSpec with_maturity(double maturity) const;

 private:
  double spot_;
  double rate_;
  double dividend_;
  double maturity_;
};

class HestonModel {
 public:
  HestonModel(double kappa, double theta, double sigma, double rho, double v0);

  double kappa() const noexcept { return kappa_; }
  double theta() const noexcept { return theta_; }
  double sigma() const noexcept { return sigma_; }
  double rho() const noexcept { return rho_; }
  double v0() const noexcept { return v0_; }

 private:
  double kappa_, theta_, sigma_, rho_, v0_;
};

/// Double-exponential jump diffusion.
class KouModel {
 public:
  KouModel(double sigma, double p, double eta1, double eta2, double lambda);

  double sigma() const noexcept { return sigma_; }
  double p() const noexcept { return p_; }
  double eta1() const noexcept { return eta1_; }
  double eta2() const noexcept { return eta2_; }
  double lambda() const noexcept { return lambda_; }

 private:
  double sigma_, p_, eta1_, eta2_, lambda_;
};

class CgmyModel {
 public:
  CgmyModel(double c, double g, double m, double y);

  double c() const noexcept { return c_; }
  double g() const noexcept { return g_; }
  double m() const noexcept { return m_; }
  double y() const noexcept { return y_; }
  /// Gamma(-Y), cached at construction.
  double gamma_neg_y() const noexcept { return gamma_neg_y_; }

 private:
  double c_, g_, m_, y_;
  double gamma_neg_y_;
};

using ModelSpec = std::variant<HestonModel, KouModel, CgmyModel>;

std::string model_kind(const ModelSpec& model);

/// Open interval of Im(u) on which the characteristic function is analytic.
struct AnalyticStrip {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double im) const noexcept { return im > lower && im < upper; }
};

AnalyticStrip analyticity_strip(const ModelSpec& model);

/// log phi_T(u) for X_T = ln(S_T / S_0), drift-corrected so that
/// phi_T(-i) = exp((r - q) T). No strip check.
Complex log_char_fn(const ModelSpec& model, const MarketSpec& market, Complex u);

/// phi_T(u). Throws DomainError when Im(u) is outside the analyticity strip.
Complex char_fn(const ModelSpec& model, const MarketSpec& market, Complex u);

struct Cumulants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c4 = 0.0;
};

/// First, second and fourth cumulants of X_T, from the Taylor coefficients
/// of log phi_T at the origin. c2 and c4 are floored at zero.
Cumulants cumulants(const ModelSpec& model, const MarketSpec& market);

struct TruncationRange {
  double a = 0.0;
  double b = 0.0;

  double width() const noexcept { return b - a; }
  TruncationRange shifted(double dx) const noexcept { return {a + dx, b + dx}; }
};

/// [c1 - L sqrt(c2 + sqrt(c4)), c1 + L sqrt(c2 + sqrt(c4))].
TruncationRange truncation_range(const Cumulants& c, double width_multiplier);

}  // namespace stablecos

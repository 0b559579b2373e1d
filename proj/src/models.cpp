#include "stablecos/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stablecos/errors.hpp"
#include "stablecos/special_functions.hpp"

namespace stablecos {

namespace {

constexpr Complex kI{0.0, 1.0};

void require(bool ok, const char* what) {
  if (!ok) throw ValidationError(what);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Complex heston_log_cf(const HestonModel& h, const MarketSpec& mkt, Complex u) {
  const double t = mkt.maturity();
  const double s2 = h.sigma() * h.sigma();
  const Complex iu = kI * u;
  const Complex zeta = -0.5 * (iu + u * u);
  const Complex gamma = h.kappa() - kI * (h.rho() * h.sigma()) * u;
  const Complex xi = std::sqrt(gamma * gamma - 2.0 * s2 * zeta);
  const Complex decay = -expm1(-xi * t);  // 1 - exp(-xi t)
  const Complex denom = 2.0 * xi - (xi - gamma) * decay;

  const Complex drift = iu * ((mkt.rate() - mkt.dividend()) * t);
  const Complex variance = 2.0 * zeta * decay * h.v0() / denom;
  const Complex mean_reversion =
      -(h.kappa() * h.theta() / s2) * (2.0 * std::log(denom / (2.0 * xi)) + (xi - gamma) * t);
  return drift + variance + mean_reversion;
}

double kou_drift(const KouModel& k, const MarketSpec& mkt) {
  const double jump_mean = k.p() * k.eta1() / (k.eta1() - 1.0) +
                           (1.0 - k.p()) * k.eta2() / (k.eta2() + 1.0) - 1.0;
  return mkt.rate() - mkt.dividend() - 0.5 * k.sigma() * k.sigma() - k.lambda() * jump_mean;
}

Complex kou_log_cf(const KouModel& k, const MarketSpec& mkt, Complex u) {
  const double t = mkt.maturity();
  const Complex iu = kI * u;
  const Complex jumps = k.p() * k.eta1() / (k.eta1() - iu) +
                        (1.0 - k.p()) * k.eta2() / (k.eta2() + iu) - 1.0;
  return iu * kou_drift(k, mkt) * t - 0.5 * k.sigma() * k.sigma() * u * u * t +
         k.lambda() * t * jumps;
}

double cgmy_drift(const CgmyModel& m, const MarketSpec& mkt) {
  const double y = m.y();
  const double jumps = std::pow(m.m(), y) * std::expm1(y * std::log1p(-1.0 / m.m())) +
                       std::pow(m.g(), y) * std::expm1(y * std::log1p(1.0 / m.g()));
  return mkt.rate() - mkt.dividend() - m.c() * m.gamma_neg_y() * jumps;
}

Complex cgmy_log_cf(const CgmyModel& m, const MarketSpec& mkt, Complex u) {
  const double t = mkt.maturity();
  const Complex iu = kI * u;
  // (M - iu)^Y - M^Y + (G + iu)^Y - G^Y
  const Complex jumps = power_increment(m.m(), -iu, m.y()) + power_increment(m.g(), iu, m.y());
  return iu * cgmy_drift(m, mkt) * t + m.c() * t * m.gamma_neg_y() * jumps;
}

struct TaylorCoefficients {
  Complex a1, a2, a4;
};

// Coefficients of log phi around 0 by the trapezoidal rule on |u| = radius.
TaylorCoefficients contour_taylor(const ModelSpec& model, const MarketSpec& market,
                                  double radius) {
  constexpr int kNodes = 64;
  Complex s1{}, s2{}, s4{};
  for (int j = 0; j < kNodes; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / kNodes;
    const Complex f = log_char_fn(model, market, std::polar(radius, theta));
    s1 += f * std::polar(1.0, -theta);
    s2 += f * std::polar(1.0, -2.0 * theta);
    s4 += f * std::polar(1.0, -4.0 * theta);
  }
  const double r2 = radius * radius;
  return {s1 / (kNodes * radius), s2 / (kNodes * r2), s4 / (kNodes * r2 * r2)};
}

Cumulants to_cumulants(const TaylorCoefficients& t) {
  // log phi(u) = sum_n c_n (iu)^n / n!
  return {t.a1.imag(), -2.0 * t.a2.real(), 24.0 * t.a4.real()};
}

}  // namespace

MarketSpec::MarketSpec(double spot, double rate, double dividend, double maturity)
    : spot_(spot), rate_(rate), dividend_(dividend), maturity_(maturity) {
  require(std::isfinite(spot) && spot > 0.0, "spot must be positive");
  require(std::isfinite(rate), "rate must be finite");
  require(std::isfinite(dividend), "dividend must be finite");
  require(std::isfinite(maturity) && maturity > 0.0, "maturity must be positive");
}

MarketSpec MarketSpec::with_maturity(double maturity) const {
  return MarketSpec(spot_, rate_, dividend_, maturity);
}

HestonModel::HestonModel(double kappa, double theta, double sigma, double rho, double v0)
    : kappa_(kappa), theta_(theta), sigma_(sigma), rho_(rho), v0_(v0) {
  require(std::isfinite(kappa) && kappa > 0.0, "heston kappa must be positive");
  require(std::isfinite(theta) && theta >= 0.0, "heston theta must be non-negative");
  require(std::isfinite(sigma) && sigma > 0.0, "heston sigma must be positive");
  require(std::isfinite(rho) && rho >= -1.0 && rho <= 1.0, "heston rho must lie in [-1, 1]");
  require(std::isfinite(v0) && v0 >= 0.0, "heston v0 must be non-negative");
}

KouModel::KouModel(double sigma, double p, double eta1, double eta2, double lambda)
    : sigma_(sigma), p_(p), eta1_(eta1), eta2_(eta2), lambda_(lambda) {
  require(std::isfinite(sigma) && sigma > 0.0, "kou sigma must be positive");
  require(std::isfinite(p) && p >= 0.0 && p <= 1.0, "kou p must lie in [0, 1]");
  require(std::isfinite(eta1) && eta1 > 1.0, "kou eta1 must exceed 1");
  require(std::isfinite(eta2) && eta2 > 0.0, "kou eta2 must be positive");
  require(std::isfinite(lambda) && lambda >= 0.0, "kou lambda must be non-negative");
}

CgmyModel::CgmyModel(double c, double g, double m, double y)
    : c_(c), g_(g), m_(m), y_(y), gamma_neg_y_(0.0) {
  require(std::isfinite(c) && c > 0.0, "cgmy C must be positive");
  require(std::isfinite(g) && g > 0.0, "cgmy G must be positive");
  require(std::isfinite(m) && m > 1.0, "cgmy M must exceed 1");
  require(std::isfinite(y) && y < 2.0, "cgmy Y must be below 2");
  require(y != 0.0 && y != 1.0, "cgmy Y must not be 0 or 1");
  gamma_neg_y_ = lanczos_gamma(-y);
}

std::string model_kind(const ModelSpec& model) {
  return std::visit(Overloaded{[](const HestonModel&) { return std::string("heston"); },
                               [](const KouModel&) { return std::string("kou"); },
                               [](const CgmyModel&) { return std::string("cgmy"); }},
                    model);
}

AnalyticStrip analyticity_strip(const ModelSpec& model) {
  return std::visit(Overloaded{[](const HestonModel&) { return AnalyticStrip{}; },
                               [](const KouModel& k) { return AnalyticStrip{-k.eta1(), k.eta2()}; },
                               [](const CgmyModel& c) { return AnalyticStrip{-c.m(), c.g()}; }},
                    model);
}

Complex log_char_fn(const ModelSpec& model, const MarketSpec& market, Complex u) {
  return std::visit(
      Overloaded{[&](const HestonModel& h) { return heston_log_cf(h, market, u); },
                 [&](const KouModel& k) { return kou_log_cf(k, market, u); },
                 [&](const CgmyModel& c) { return cgmy_log_cf(c, market, u); }},
      model);
}

Complex char_fn(const ModelSpec& model, const MarketSpec& market, Complex u) {
  const AnalyticStrip strip = analyticity_strip(model);
  if (!strip.contains(u.imag())) {
    std::ostringstream os;
    os << "Im(u) = " << u.imag() << " outside the analyticity strip (" << strip.lower << ", "
       << strip.upper << ") of the " << model_kind(model) << " characteristic function";
    throw DomainError(os.str());
  }
  return std::exp(log_char_fn(model, market, u));
}

Cumulants cumulants(const ModelSpec& model, const MarketSpec& market) {
  const AnalyticStrip strip = analyticity_strip(model);
  double radius = std::min({0.5, -0.25 * strip.lower, 0.25 * strip.upper});

  Cumulants outer = to_cumulants(contour_taylor(model, market, radius));
  for (int halving = 0; halving < 8; ++halving) {
    const Cumulants inner = to_cumulants(contour_taylor(model, market, 0.5 * radius));
    const double scale = std::max(std::abs(outer.c2), 1e-12);
    if (std::abs(inner.c2 - outer.c2) <= 1e-9 * scale) break;
    outer = inner;
    radius *= 0.5;
  }

  if (!std::isfinite(outer.c1) || !std::isfinite(outer.c2) || !std::isfinite(outer.c4)) {
    throw ComputationError("non-finite cumulant for the " + model_kind(model) + " model");
  }
  outer.c2 = std::max(outer.c2, 0.0);
  outer.c4 = std::max(outer.c4, 0.0);
  return outer;
}

TruncationRange truncation_range(const Cumulants& c, double width_multiplier) {
  require(std::isfinite(width_multiplier) && width_multiplier > 0.0, "L must be positive");
  const double spread = c.c2 + std::sqrt(std::max(c.c4, 0.0));
  if (!(spread > 0.0) || !std::isfinite(spread)) {
    throw ValidationError("degenerate truncation range: c2 + sqrt(c4) must be positive");
  }
  const double half_width = width_multiplier * std::sqrt(spread);
  return {c.c1 - half_width, c.c1 + half_width};
}

}  // namespace stablecos

#include "stablecos/cos_engine.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>

#include "stablecos/errors.hpp"
#include "stablecos/special_functions.hpp"

namespace stablecos {

namespace {

constexpr Complex kI{0.0, 1.0};

void validate_config(const CosConfig& config) {
  if (config.n_terms < 1) throw ValidationError("N must be a positive integer");
  if (!(config.range_width > 0.0) || !std::isfinite(config.range_width)) {
    throw ValidationError("L must be positive");
  }
  if (config.damping && !std::isfinite(*config.damping)) {
    throw ValidationError("alpha must be finite");
  }
}

}  // namespace

OptionSpec::OptionSpec(double strike, OptionKind kind) : strike_(strike), kind_(kind) {
  if (!(strike > 0.0) || !std::isfinite(strike)) throw ValidationError("strike must be positive");
}

std::string to_string(CosVariant v) {
  switch (v) {
    case CosVariant::Direct: return "direct";
    case CosVariant::Stable: return "stable";
    case CosVariant::PutCallParity: return "parity";
  }
  return "unknown";
}

std::string to_string(OptionKind k) { return k == OptionKind::Call ? "call" : "put"; }

double chi(double u, double v, double c, double d, double a) {
  if (u == 0.0) {
    if (v == 0.0) return d - c;
    return std::exp(v * c) * std::expm1(v * (d - c)) / v;
  }
  if (v == 0.0) return (std::sin(u * (d - a)) - std::sin(u * (c - a))) / u;

  const double ec = std::exp(v * c);
  const double ed = std::exp(v * d);
  const double pc = u * (c - a);
  const double pd = u * (d - a);
  return (-v * ec * std::cos(pc) - u * ec * std::sin(pc) + v * ed * std::cos(pd) +
          u * ed * std::sin(pd)) /
         (v * v + u * u);
}

double payoff_coeff_call(double u, double alpha, const TruncationRange& range, double strike) {
  const auto [a, b] = range;
  if (b <= 0.0) return 0.0;
  const double c = std::max(a, 0.0);
  return 2.0 * strike / (b - a) * (chi(u, 1.0 - alpha, c, b, a) - chi(u, -alpha, c, b, a));
}

double payoff_coeff_put(double u, double alpha, const TruncationRange& range, double strike) {
  const auto [a, b] = range;
  if (a >= 0.0) return 0.0;
  const double d = std::min(b, 0.0);
  return 2.0 * strike / (b - a) * (-chi(u, 1.0 - alpha, a, d, a) + chi(u, -alpha, a, d, a));
}

PricingContext make_context(const ModelSpec& model, const MarketSpec& market,
                            const OptionSpec& option, double range_width, double damping) {
  const AnalyticStrip strip = analyticity_strip(model);
  if (!strip.contains(-damping)) {
    std::ostringstream os;
    os << "alpha = " << damping << " outside the analyticity strip of the " << model_kind(model)
       << " model";
    throw ConfigError(os.str());
  }
  PricingContext ctx;
  ctx.log_moneyness = std::log(market.spot() / option.strike());
  ctx.range = truncation_range(cumulants(model, market), range_width).shifted(ctx.log_moneyness);
  ctx.discount = std::exp(-market.rate() * market.maturity());
  ctx.damping = damping;
  ctx.damping_scale = std::exp(damping * ctx.log_moneyness);
  return ctx;
}

std::vector<double> cos_terms(const ModelSpec& model, const MarketSpec& market,
                              const OptionSpec& option, const PricingContext& ctx, int n_terms) {
  const double a = ctx.range.a;
  const double width = ctx.range.width();
  const double x = ctx.log_moneyness;
  const double alpha = ctx.damping;
  const double density_scale = 2.0 * ctx.damping_scale / width;
  const bool is_call = option.kind() == OptionKind::Call;

  std::vector<double> terms(static_cast<std::size_t>(n_terms));
#pragma omp parallel for schedule(static) if (n_terms >= 4096)
  for (int n = 0; n < n_terms; ++n) {
    const double u = n * std::numbers::pi / width;
    const Complex phi = std::exp(log_char_fn(model, market, Complex(u, -alpha)));
    const double density_coeff = density_scale * (std::polar(1.0, u * (x - a)) * phi).real();
    const double payoff_coeff = is_call ? payoff_coeff_call(u, alpha, ctx.range, option.strike())
                                        : payoff_coeff_put(u, alpha, ctx.range, option.strike());
    terms[static_cast<std::size_t>(n)] = density_coeff * payoff_coeff;
  }
  terms[0] *= 0.5;
  return terms;
}

double damped_cos_price(const ModelSpec& model, const MarketSpec& market,
                        const OptionSpec& option, const PricingContext& ctx, int n_terms) {
  CompensatedSum sum;
  for (double t : cos_terms(model, market, option, ctx, n_terms)) sum.add(t);
  const double value = 0.5 * ctx.range.width() * ctx.discount * sum.value();
  if (!std::isfinite(value)) {
    throw ComputationError("non-finite COS price for the " + model_kind(model) + " model");
  }
  return value;
}

double effective_damping(const OptionSpec& option, const CosConfig& config) {
  switch (config.variant) {
    case CosVariant::Direct:
    case CosVariant::PutCallParity:
      return 0.0;
    case CosVariant::Stable:
      return config.damping.value_or(option.kind() == OptionKind::Call ? kDefaultCallDamping
                                                                       : 0.0);
  }
  return 0.0;
}

PriceResult price(const ModelSpec& model, const MarketSpec& market, const OptionSpec& option,
                  const CosConfig& config) {
  validate_config(config);
  const double alpha = effective_damping(option, config);
  if (config.variant == CosVariant::Stable && option.kind() == OptionKind::Call && alpha <= 1.0) {
    throw ConfigError("alpha must exceed 1 for stable call pricing");
  }
  if (config.variant == CosVariant::PutCallParity && option.kind() == OptionKind::Put) {
    throw ConfigError("the parity variant prices calls; price puts with stable or direct");
  }

  PriceResult result;
  result.variant = config.variant;
  result.n_terms = config.n_terms;
  result.range_width = config.range_width;
  result.damping = alpha;

  if (config.variant == CosVariant::PutCallParity) {
    const OptionSpec put(option.strike(), OptionKind::Put);
    const PricingContext ctx = make_context(model, market, put, config.range_width, 0.0);
    const double put_value = damped_cos_price(model, market, put, ctx, config.n_terms);
    result.range = ctx.range;
    result.price = put_value +
                   market.spot() * std::exp(-market.dividend() * market.maturity()) -
                   option.strike() * ctx.discount;
    return result;
  }

  const PricingContext ctx = make_context(model, market, option, config.range_width, alpha);
  result.range = ctx.range;
  result.price = damped_cos_price(model, market, option, ctx, config.n_terms);
  return result;
}

std::vector<PriceResult> price_strikes(const ModelSpec& model, const MarketSpec& market,
                                       std::span<const double> strikes, OptionKind kind,
                                       const CosConfig& config) {
  const auto n = static_cast<std::ptrdiff_t>(strikes.size());
  std::vector<PriceResult> results(strikes.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      results[static_cast<std::size_t>(i)] =
          price(model, market, OptionSpec(strikes[static_cast<std::size_t>(i)], kind), config);
    } catch (...) {
#pragma omp critical(stablecos_price_strikes)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace stablecos

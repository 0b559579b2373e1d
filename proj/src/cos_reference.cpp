#include <cmath>
#include <numbers>

#include "stablecos/cos_engine.hpp"
#include "stablecos/errors.hpp"
#include "stablecos/special_functions.hpp"

namespace stablecos::reference {

namespace {

double serial_sum(const ModelSpec& model, const MarketSpec& market, const OptionSpec& option,
                  const PricingContext& ctx, int n_terms) {
  const double a = ctx.range.a;
  const double width = ctx.range.width();
  CompensatedSum sum;
  for (int n = 0; n < n_terms; ++n) {
    const double u = n * std::numbers::pi / width;
    const Complex phi = std::exp(log_char_fn(model, market, Complex(u, -ctx.damping)));
    const double density_coeff =
        2.0 * ctx.damping_scale / width *
        (std::polar(1.0, u * (ctx.log_moneyness - a)) * phi).real();
    const double payoff_coeff = option.kind() == OptionKind::Call
                                    ? payoff_coeff_call(u, ctx.damping, ctx.range, option.strike())
                                    : payoff_coeff_put(u, ctx.damping, ctx.range, option.strike());
    double term = density_coeff * payoff_coeff;
    if (n == 0) term *= 0.5;
    sum.add(term);
  }
  return 0.5 * width * ctx.discount * sum.value();
}

}  // namespace

PriceResult price(const ModelSpec& model, const MarketSpec& market, const OptionSpec& option,
                  const CosConfig& config) {
  if (config.n_terms < 1) throw ValidationError("N must be a positive integer");
  const double alpha = effective_damping(option, config);
  if (config.variant == CosVariant::Stable && option.kind() == OptionKind::Call && alpha <= 1.0) {
    throw ConfigError("alpha must exceed 1 for stable call pricing");
  }

  PriceResult result;
  result.variant = config.variant;
  result.n_terms = config.n_terms;
  result.range_width = config.range_width;
  result.damping = alpha;

  if (config.variant == CosVariant::PutCallParity) {
    if (option.kind() == OptionKind::Put) {
      throw ConfigError("the parity variant prices calls; price puts with stable or direct");
    }
    const OptionSpec put(option.strike(), OptionKind::Put);
    const PricingContext ctx = make_context(model, market, put, config.range_width, 0.0);
    result.range = ctx.range;
    result.price = serial_sum(model, market, put, ctx, config.n_terms) +
                   market.spot() * std::exp(-market.dividend() * market.maturity()) -
                   option.strike() * ctx.discount;
    return result;
  }
  const PricingContext ctx = make_context(model, market, option, config.range_width, alpha);
  result.range = ctx.range;
  result.price = serial_sum(model, market, option, ctx, config.n_terms);
  return result;
}

}  // namespace stablecos::reference

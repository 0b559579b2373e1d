#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stablecos/models.hpp"

namespace stablecos {

enum class OptionKind { Call, Put };

class OptionSpec {
 public:
  OptionSpec(double strike, OptionKind kind);

  double strike() const noexcept { return strike_; }
  OptionKind kind() const noexcept { return kind_; }

 private:
  double strike_;
  OptionKind kind_;
};

enum class CosVariant { Direct, Stable, PutCallParity };

std::string to_string(CosVariant v);
std::string to_string(OptionKind k);

/// Tunables of one COS evaluation. `damping` unset means 1.1 for Stable
/// calls and 0 otherwise; Direct always uses 0.
struct CosConfig {
  int n_terms = 128;
  double range_width = 10.0;
  std::optional<double> damping;
  CosVariant variant = CosVariant::Stable;
};

constexpr double kDefaultCallDamping = 1.1;

/// Conditioning state of one evaluation: log-moneyness x = ln(S0/K), the
/// truncation range of ln(S_T/K), the discount factor and exp(alpha x).
struct PricingContext {
  double log_moneyness = 0.0;
  TruncationRange range;
  double discount = 1.0;
  double damping = 0.0;
  double damping_scale = 1.0;
};

struct PriceResult {
  double price = 0.0;
  CosVariant variant = CosVariant::Stable;
  int n_terms = 0;
  double range_width = 0.0;
  double damping = 0.0;
  TruncationRange range;
};

/// Integral of exp(v y) cos(u (y - a)) over [c, d] in closed form.
double chi(double u, double v, double c, double d, double a);

/// Cosine coefficient of exp(-alpha y) K (e^y - 1)^+ on range.
double payoff_coeff_call(double u, double alpha, const TruncationRange& range, double strike);

/// Cosine coefficient of exp(-alpha y) K (1 - e^y)^+ on range.
double payoff_coeff_put(double u, double alpha, const TruncationRange& range, double strike);

/// Builds the context for one option: cumulants of X_T recentred at x so the
/// range covers ln(S_T / K).
PricingContext make_context(const ModelSpec& model, const MarketSpec& market,
                            const OptionSpec& option, double range_width, double damping);

/// Damped COS sum for any damping inside the strip. No variant rules;
/// damping = 0 is the classic expansion.
double damped_cos_price(const ModelSpec& model, const MarketSpec& market,
                        const OptionSpec& option, const PricingContext& ctx, int n_terms);

/// Products A(u_n) V(u_n), n = 0..N-1, with the n = 0 term halved.
/// Evaluated in parallel; element order is fixed.
std::vector<double> cos_terms(const ModelSpec& model, const MarketSpec& market,
                              const OptionSpec& option, const PricingContext& ctx, int n_terms);

double effective_damping(const OptionSpec& option, const CosConfig& config);

/// Validates the configuration and prices by the selected variant.
PriceResult price(const ModelSpec& model, const MarketSpec& market, const OptionSpec& option,
                  const CosConfig& config);

/// One price per strike, strikes evaluated concurrently.
std::vector<PriceResult> price_strikes(const ModelSpec& model, const MarketSpec& market,
                                       std::span<const double> strikes, OptionKind kind,
                                       const CosConfig& config);

namespace reference {

/// Serial straight-line evaluation of the same estimator, kept as the
/// baseline for the parallel kernels.
PriceResult price(const ModelSpec& model, const MarketSpec& market, const OptionSpec& option,
                  const CosConfig& config);

}  // namespace reference

}  // namespace stablecos

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "stablecos/cos_engine.hpp"
#include "stablecos/models.hpp"
#include "stablecos/transform_refs.hpp"

namespace stablecos {

struct MethodSettings {
  double range_width;
  int n_terms;
};

/// A named benchmark model with its tuned COS settings and the damping
/// used by the transform pricers.
struct Profile {
  std::string name;
  ModelSpec model;
  MarketSpec market;
  double stable_damping;
  MethodSettings stable;
  MethodSettings parity;
  std::optional<MethodSettings> direct;  // unset: classic COS is unusable here
  double fourier_damping;
  double carr_madan_damping;
  // Width for the N = 60000 parity reference. At least the parity L, and
  // wide enough that the range truncation error is below 1e-13 (Heston
  // at L = 7 is still 5e-10 short).
  double reference_width;

  CosConfig config(CosVariant variant) const;
  IntegralConfig integral_config() const;
  CarrMadanConfig carr_madan_config() const;
};

/// heston, kou, cgmy1, cgmy2 (S0 = 100, r = 0.1, q = 0, T = 1).
std::span<const Profile> profiles();

/// Throws ValidationError("unknown model profile ...") for unknown names.
const Profile& profile(std::string_view name);

}  // namespace stablecos

#include "stablecos/presets.hpp"

#include <array>

#include "stablecos/errors.hpp"

namespace stablecos {

namespace {

const MarketSpec kMarket(100.0, 0.1, 0.0, 1.0);

// Direct COS on CGMY (Y = 1.98) has no tuned row; run it at L = 10 with
// the stable N to exhibit the cancellation.
constexpr MethodSettings kCancellationDemo{10.0, 80};

const std::array<Profile, 4>& all_profiles() {
  static const std::array<Profile, 4> kProfiles = {
      Profile{"heston", HestonModel(0.85, 0.30 * 0.30, 0.1, -0.7, 0.25 * 0.25), kMarket, 1.1,
              {7.0, 110}, {7.0, 110}, MethodSettings{7.0, 110}, 1.1, 0.75, 10.0},
      Profile{"kou", KouModel(0.16, 0.4, 10.0, 5.0, 5.0), kMarket, 1.1,
              {7.0, 140}, {11.0, 210}, MethodSettings{10.0, 210}, 1.1, 0.75, 11.0},
      Profile{"cgmy1", CgmyModel(1.0, 5.0, 5.0, 1.5), kMarket, 1.001,
              {10.0, 50}, {10.0, 50}, MethodSettings{13.0, 80}, 1.1, 0.75, 10.0},
      Profile{"cgmy2", CgmyModel(1.0, 5.0, 5.0, 1.98), kMarket, 1.001,
              {17.0, 80}, {10.0, 70}, std::nullopt, 1.015, 0.1, 10.0},
  };
  return kProfiles;
}

}  // namespace

CosConfig Profile::config(CosVariant variant) const {
  CosConfig cfg;
  cfg.variant = variant;
  switch (variant) {
    case CosVariant::Stable:
      cfg.range_width = stable.range_width;
      cfg.n_terms = stable.n_terms;
      cfg.damping = stable_damping;
      break;
    case CosVariant::PutCallParity:
      cfg.range_width = parity.range_width;
      cfg.n_terms = parity.n_terms;
      break;
    case CosVariant::Direct: {
      const MethodSettings s = direct.value_or(kCancellationDemo);
      cfg.range_width = s.range_width;
      cfg.n_terms = s.n_terms;
      break;
    }
  }
  return cfg;
}

IntegralConfig Profile::integral_config() const {
  IntegralConfig cfg;
  cfg.damping = fourier_damping;
  return cfg;
}

CarrMadanConfig Profile::carr_madan_config() const {
  CarrMadanConfig cfg;
  cfg.damping = carr_madan_damping;
  return cfg;
}

std::span<const Profile> profiles() { return all_profiles(); }

const Profile& profile(std::string_view name) {
  for (const Profile& p : all_profiles()) {
    if (p.name == name) return p;
  }
  throw ValidationError("unknown model profile '" + std::string(name) + "'");
}

}  // namespace stablecos

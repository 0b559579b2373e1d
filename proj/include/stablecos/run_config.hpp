#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "stablecos/cos_engine.hpp"
#include "stablecos/models.hpp"

namespace stablecos {

enum class OutputFormat { Plain, Csv, Json };

OutputFormat output_format_from_string(std::string_view s);
CosVariant cos_variant_from_string(std::string_view s);

/// Flat key/value settings, as read from a config file or collected from
/// command-line flags. Keys mirror the flag names.
using KeyValues = std::map<std::string, std::string>;

/// Fully resolved settings for one pricing run.
struct RunConfig {
  std::string profile;
  ModelSpec model;
  MarketSpec market;
  OptionSpec option;
  CosConfig cos;
  std::optional<std::filesystem::path> output;
  OutputFormat format = OutputFormat::Plain;
};

/// Recognised keys: profile method kind strike spot rate dividend maturity
/// N L alpha output format, and the model parameters kappa theta sigma rho
/// v0 (heston), sigma p eta1 eta2 lambda (kou), C G M Y (cgmy).
bool is_known_key(std::string_view key);

/// `key=value` lines, `#` comments, blank lines ignored. Errors carry the
/// line number.
KeyValues parse_config_text(std::string_view text, std::string_view source = "config");
KeyValues parse_config_file(const std::filesystem::path& path);

/// Flags override the file, the file overrides the profile's defaults.
RunConfig resolve_run_config(const KeyValues& file, const KeyValues& flags);

/// resolve_run_config(parse_config_file(path), {}).
RunConfig load_config(const std::filesystem::path& path);

}  // namespace stablecos

#include "stablecos/run_config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stablecos/errors.hpp"
#include "stablecos/presets.hpp"

namespace stablecos {

namespace {

constexpr std::array<std::string_view, 25> kKnownKeys = {
    "profile", "method", "kind",  "strike", "spot",   "rate", "dividend", "maturity", "N",
    "L",       "alpha",  "output", "format", "kappa", "theta", "sigma",   "rho",      "v0",
    "p",       "eta1",   "eta2",  "lambda", "C",      "G",    "M"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(const KeyValues& kv, const std::string& key) {
  const std::string& text = kv.at(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError(key + ": malformed number '" + text + "'");
}

int parse_positive_int(const KeyValues& kv, const std::string& key) {
  const std::string& text = kv.at(key);
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used == text.size() && v >= 1 && v <= 100'000'000) return static_cast<int>(v);
  } catch (const std::exception&) {
  }
  throw ValidationError(key + ": must be a positive integer (got '" + text + "')");
}

double real_or(const KeyValues& kv, const std::string& key, double fallback) {
  return kv.contains(key) ? parse_real(kv, key) : fallback;
}

// Rethrows model validation failures with the offending profile named.
ModelSpec override_model(const ModelSpec& base, const KeyValues& kv) {
  return std::visit(
      [&](const auto& m) -> ModelSpec {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, HestonModel>) {
          return HestonModel(real_or(kv, "kappa", m.kappa()), real_or(kv, "theta", m.theta()),
                             real_or(kv, "sigma", m.sigma()), real_or(kv, "rho", m.rho()),
                             real_or(kv, "v0", m.v0()));
        } else if constexpr (std::is_same_v<T, KouModel>) {
          return KouModel(real_or(kv, "sigma", m.sigma()), real_or(kv, "p", m.p()),
                          real_or(kv, "eta1", m.eta1()), real_or(kv, "eta2", m.eta2()),
                          real_or(kv, "lambda", m.lambda()));
        } else {
          return CgmyModel(real_or(kv, "C", m.c()), real_or(kv, "G", m.g()),
                           real_or(kv, "M", m.m()), real_or(kv, "Y", m.y()));
        }
      },
      base);
}

void reject_foreign_model_keys(const ModelSpec& model, const KeyValues& kv) {
  static const std::map<std::string, std::vector<std::string>> kByKind = {
      {"heston", {"kappa", "theta", "sigma", "rho", "v0"}},
      {"kou", {"sigma", "p", "eta1", "eta2", "lambda"}},
      {"cgmy", {"C", "G", "M", "Y"}}};
  const auto& allowed = kByKind.at(model_kind(model));
  for (const auto& [kind, keys] : kByKind) {
    for (const auto& key : keys) {
      if (kv.contains(key) && std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw ValidationError(key + ": not a parameter of the " + model_kind(model) + " model");
      }
    }
  }
}

}  // namespace

OutputFormat output_format_from_string(std::string_view s) {
  if (s == "plain") return OutputFormat::Plain;
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ValidationError("format: expected csv, json or plain (got '" + std::string(s) + "')");
}

CosVariant cos_variant_from_string(std::string_view s) {
  if (s == "stable") return CosVariant::Stable;
  if (s == "parity") return CosVariant::PutCallParity;
  if (s == "direct") return CosVariant::Direct;
  throw ValidationError("method: expected stable, parity or direct (got '" + std::string(s) +
                        "')");
}

bool is_known_key(std::string_view key) {
  return key == "Y" ||
         std::find(kKnownKeys.begin(), kKnownKeys.end(), key) != kKnownKeys.end();
}

KeyValues parse_config_text(std::string_view text, std::string_view source) {
  KeyValues kv;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ValidationError(where + "expected key=value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ValidationError(where + "empty key");
    if (!is_known_key(key)) throw ValidationError(where + "unknown key '" + key + "'");
    if (value.empty()) throw ValidationError(where + "empty value for '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

KeyValues parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path.filename().string());
}

RunConfig resolve_run_config(const KeyValues& file, const KeyValues& flags) {
  KeyValues kv = file;
  for (const auto& [key, value] : flags) {
    if (!is_known_key(key)) throw ValidationError("unknown key '" + key + "'");
    kv[key] = value;
  }

  const Profile& base = profile(kv.contains("profile") ? kv.at("profile") : "heston");
  reject_foreign_model_keys(base.model, kv);
  ModelSpec model = override_model(base.model, kv);
  const MarketSpec market(real_or(kv, "spot", base.market.spot()),
                          real_or(kv, "rate", base.market.rate()),
                          real_or(kv, "dividend", base.market.dividend()),
                          real_or(kv, "maturity", base.market.maturity()));

  OptionKind kind = OptionKind::Call;
  if (kv.contains("kind")) {
    const std::string& k = kv.at("kind");
    if (k == "put") {
      kind = OptionKind::Put;
    } else if (k != "call") {
      throw ValidationError("kind: expected call or put (got '" + k + "')");
    }
  }
  const OptionSpec option(real_or(kv, "strike", 100.0), kind);

  const CosVariant variant =
      kv.contains("method") ? cos_variant_from_string(kv.at("method")) : CosVariant::Stable;
  CosConfig cos = base.config(variant);
  if (kv.contains("N")) cos.n_terms = parse_positive_int(kv, "N");
  if (kv.contains("L")) {
    cos.range_width = parse_real(kv, "L");
    if (!(cos.range_width > 0.0)) throw ValidationError("L: must be positive");
  }
  if (kv.contains("alpha")) cos.damping = parse_real(kv, "alpha");
  if (variant == CosVariant::Stable && kind == OptionKind::Put && !kv.contains("alpha")) {
    cos.damping.reset();  // puts default to alpha = 0
  }

  RunConfig cfg{base.name, std::move(model), market, option, cos, std::nullopt,
                OutputFormat::Plain};
  if (kv.contains("output")) cfg.output = kv.at("output");
  if (kv.contains("format")) cfg.format = output_format_from_string(kv.at("format"));
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  return resolve_run_config(parse_config_file(path), {});
}

}  // namespace stablecos

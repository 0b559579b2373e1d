#include "stablecos/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "stablecos/errors.hpp"
#include "stablecos/transform_refs.hpp"

namespace stablecos {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs body(i) for i in [0, n) concurrently; rethrows the first failure.
template <class Body>
void parallel_cells(std::size_t n, Body&& body) {
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(stablecos_harness_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<std::string> labels_of(std::span<const double> xs, int digits = 13) {
  std::vector<std::string> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(format_significant(x, digits));
  return out;
}

}  // namespace

std::string to_string(PricingMethod m) {
  switch (m) {
    case PricingMethod::StableCos: return "Stable_Cos";
    case PricingMethod::PutCallCos: return "Put-Call_Cos";
    case PricingMethod::DirectCos: return "Direct_Cos";
    case PricingMethod::FourierIntegral: return "FTM";
    case PricingMethod::CarrMadan: return "FFT";
  }
  return "unknown";
}

PricingMethod pricing_method_from_string(std::string_view name) {
  for (auto m : {PricingMethod::StableCos, PricingMethod::PutCallCos, PricingMethod::DirectCos,
                 PricingMethod::FourierIntegral, PricingMethod::CarrMadan}) {
    if (to_string(m) == name) return m;
  }
  if (name == "stable") return PricingMethod::StableCos;
  if (name == "parity") return PricingMethod::PutCallCos;
  if (name == "direct") return PricingMethod::DirectCos;
  if (name == "ftm") return PricingMethod::FourierIntegral;
  if (name == "fft") return PricingMethod::CarrMadan;
  throw ValidationError("unknown pricing method '" + std::string(name) + "'");
}

CosVariant cos_variant(PricingMethod m) {
  switch (m) {
    case PricingMethod::StableCos: return CosVariant::Stable;
    case PricingMethod::PutCallCos: return CosVariant::PutCallParity;
    case PricingMethod::DirectCos: return CosVariant::Direct;
    default: throw ValidationError(to_string(m) + " is not a COS method");
  }
}

std::string to_string(CellFlag f) {
  switch (f) {
    case CellFlag::Ok: return "ok";
    case CellFlag::Skipped: return "skipped";
    case CellFlag::CancellationRegime: return "cancellation_regime";
    case CellFlag::NonFinite: return "non_finite";
  }
  return "unknown";
}

std::size_t ExperimentResult::cell_count() const {
  std::size_t n = axes.empty() ? 0 : 1;
  for (const Axis& a : axes) n *= a.labels.size();
  return n;
}

std::size_t ExperimentResult::index(std::span<const std::size_t> coords) const {
  if (coords.size() != axes.size()) throw ValidationError("coordinate rank mismatch");
  std::size_t idx = 0;
  for (std::size_t k = 0; k < axes.size(); ++k) {
    if (coords[k] >= axes[k].labels.size()) throw ValidationError("coordinate out of range");
    idx = idx * axes[k].labels.size() + coords[k];
  }
  return idx;
}

double ExperimentResult::at(std::initializer_list<std::size_t> coords) const {
  return values.at(index(std::span(coords.begin(), coords.size())));
}

CellFlag ExperimentResult::flag_at(std::initializer_list<std::size_t> coords) const {
  return flags.at(index(std::span(coords.begin(), coords.size())));
}

void ExperimentResult::check_shape() const {
  if (values.size() != cell_count() || flags.size() != cell_count()) {
    throw ComputationError("experiment '" + id + "' matrix does not match its axes");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) && flags[i] == CellFlag::Ok) {
      throw ComputationError("experiment '" + id + "' has an unflagged non-finite cell");
    }
  }
}

ReferenceSet::ReferenceSet(std::map<std::string, double> values) : values_(std::move(values)) {
  for (const char* name : {"heston", "kou", "cgmy1", "cgmy2"}) {
    if (!values_.contains(name)) {
      throw ValidationError(std::string("reference set lacks an entry for ") + name);
    }
  }
  if (values_.size() != 4) throw ValidationError("reference set must hold exactly four entries");
}

double ReferenceSet::at(const std::string& profile) const {
  const auto it = values_.find(profile);
  if (it == values_.end()) throw ValidationError("no reference value for '" + profile + "'");
  return it->second;
}

double recompute_reference(const Profile& profile, const MarketSpec& market, double strike) {
  CosConfig cfg = profile.config(CosVariant::PutCallParity);
  cfg.n_terms = kReferenceTerms;
  cfg.range_width = profile.reference_width;
  return price(profile.model, market, OptionSpec(strike, OptionKind::Call), cfg).price;
}

ExperimentResult run_strike_table(std::span<const Profile* const> models,
                                  std::span<const double> strikes,
                                  std::span<const PricingMethod> methods) {
  ExperimentResult result;
  result.id = "strike_table";
  Axis model_axis{"model", {}};
  for (const Profile* p : models) model_axis.labels.push_back(p->name);
  Axis method_axis{"method", {}};
  for (PricingMethod m : methods) method_axis.labels.push_back(to_string(m));
  result.axes = {model_axis, Axis{"strike", labels_of(strikes)}, method_axis};

  const std::size_t n_models = models.size();
  const std::size_t n_strikes = strikes.size();
  const std::size_t n_methods = methods.size();
  result.values.assign(n_models * n_strikes * n_methods, kNaN);
  result.flags.assign(result.values.size(), CellFlag::Ok);

  // The FFT prices a whole strike grid at once.
  std::vector<std::vector<double>> fft_prices(n_models);
  const bool wants_fft =
      std::find(methods.begin(), methods.end(), PricingMethod::CarrMadan) != methods.end();
  if (wants_fft && n_strikes > 0) {
    for (std::size_t i = 0; i < n_models; ++i) {
      const Profile& p = *models[i];
      fft_prices[i] = price_carr_madan(p.model, p.market, strikes, p.carr_madan_config());
    }
  }

  parallel_cells(result.values.size(), [&](std::size_t cell) {
    const std::size_t i = cell / (n_strikes * n_methods);
    const std::size_t j = (cell / n_methods) % n_strikes;
    const PricingMethod method = methods[cell % n_methods];
    const Profile& p = *models[i];
    const double strike = strikes[j];
    double& value = result.values[cell];
    CellFlag& flag = result.flags[cell];

    switch (method) {
      case PricingMethod::CarrMadan:
        value = fft_prices[i][j];
        return;
      case PricingMethod::FourierIntegral:
        value = price_fourier_integral(p.model, p.market, strike, p.integral_config());
        return;
      default:
        break;
    }
    const bool quarantined = method == PricingMethod::DirectCos && !p.direct.has_value();
    try {
      value = price(p.model, p.market, OptionSpec(strike, OptionKind::Call),
                    p.config(cos_variant(method)))
                  .price;
    } catch (const ComputationError&) {
      if (!quarantined) throw;
      value = kNaN;
    }
    if (quarantined) flag = CellFlag::CancellationRegime;
  });

  result.metadata["maturity"] = "1";
  result.metadata["option"] = "call";
  result.check_shape();
  return result;
}

ExperimentResult convergence_curve(const Profile& profile, const MarketSpec& market,
                                   std::span<const int> n_values, PricingMethod method,
                                   double reference, double strike) {
  ExperimentResult result;
  result.id = "convergence_" + profile.name + "_" + to_string(method);
  std::vector<std::string> n_labels;
  for (int n : n_values) n_labels.push_back(std::to_string(n));
  result.axes = {Axis{"N", n_labels}};
  result.value_name = "log10_abs_error";
  result.values.assign(n_values.size(), kNaN);
  result.flags.assign(n_values.size(), CellFlag::Ok);

  const CosVariant variant = cos_variant(method);
  parallel_cells(n_values.size(), [&](std::size_t i) {
    CosConfig cfg = profile.config(variant);
    cfg.n_terms = n_values[i];
    const double value =
        price(profile.model, market, OptionSpec(strike, OptionKind::Call), cfg).price;
    const double err = std::abs(value - reference);
    result.values[i] = std::log10(err);
    if (!std::isfinite(result.values[i])) result.flags[i] = CellFlag::NonFinite;
  });

  result.metadata["model"] = profile.name;
  result.metadata["method"] = to_string(method);
  result.metadata["maturity"] = format_significant(market.maturity());
  result.metadata["strike"] = format_significant(strike);
  result.metadata["reference"] = format_significant(reference, 15);
  result.check_shape();
  return result;
}

ExperimentResult run_convergence(const Profile& profile, std::span<const int> n_values,
                                 PricingMethod method, const ReferenceSet& reference,
                                 const ConvergenceOptions& options) {
  const double stored = reference.at(profile.name);
  const double recomputed = recompute_reference(profile, profile.market, options.strike);
  const double mismatch = std::abs(recomputed - stored);
  const bool ok = mismatch <= options.reference_tolerance;
  if (!ok && options.check == ReferenceCheck::Enforce) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "reference recomputation mismatch for %s: stored %.15g, recomputed %.15g, "
                  "|diff| = %.3g > %.3g",
                  profile.name.c_str(), stored, recomputed, mismatch,
                  options.reference_tolerance);
    throw ComputationError(buf);
  }
  ExperimentResult result =
      convergence_curve(profile, profile.market, n_values, method, stored, options.strike);
  result.metadata["reference_recomputed"] = format_significant(recomputed, 15);
  result.metadata["reference_mismatch"] = format_significant(mismatch, 3);
  result.metadata["reference_check"] = ok ? "pass" : "fail";
  return result;
}

ExperimentResult run_stability_surface(const Profile& profile, std::span<const double> alphas,
                                       std::span<const double> widths, double strike,
                                       double maturity, int n_terms) {
  if (alphas.empty() || widths.empty()) throw ValidationError("stability grids must not be empty");
  const MarketSpec market = profile.market.with_maturity(maturity);
  const OptionSpec option(strike, OptionKind::Call);

  ExperimentResult result;
  result.id = "stability_" + profile.name;
  result.axes = {Axis{"alpha", labels_of(alphas)}, Axis{"L", labels_of(widths)}};
  result.values.assign(alphas.size() * widths.size(), kNaN);
  result.flags.assign(result.values.size(), CellFlag::Ok);

  parallel_cells(result.values.size(), [&](std::size_t cell) {
    CosConfig cfg;
    cfg.variant = CosVariant::Stable;
    cfg.damping = alphas[cell / widths.size()];
    cfg.range_width = widths[cell % widths.size()];
    cfg.n_terms = n_terms;
    try {
      result.values[cell] = price(profile.model, market, option, cfg).price;
    } catch (const ComputationError&) {
      result.flags[cell] = CellFlag::NonFinite;
    }
  });

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < result.values.size(); ++i) {
    if (result.flags[i] != CellFlag::Ok) continue;
    lo = std::min(lo, result.values[i]);
    hi = std::max(hi, result.values[i]);
  }
  result.metadata["model"] = profile.name;
  result.metadata["strike"] = format_significant(strike);
  result.metadata["maturity"] = format_significant(maturity);
  result.metadata["N"] = std::to_string(n_terms);
  result.metadata["max_minus_min"] = format_significant(hi - lo, 6);
  result.check_shape();
  return result;
}

ExperimentResult run_l_sweep(const Profile& profile, std::span<const double> widths,
                             double strike, double maturity) {
  if (widths.empty()) throw ValidationError("L grid must not be empty");
  const MarketSpec market = profile.market.with_maturity(maturity);
  const OptionSpec option(strike, OptionKind::Call);
  constexpr CosVariant kVariants[] = {CosVariant::Stable, CosVariant::PutCallParity};

  ExperimentResult result;
  result.id = "l_sweep_" + profile.name;
  result.axes = {Axis{"L", labels_of(widths)},
                 Axis{"method", {to_string(PricingMethod::StableCos),
                                 to_string(PricingMethod::PutCallCos)}}};
  result.values.assign(widths.size() * 2, kNaN);
  result.flags.assign(result.values.size(), CellFlag::Ok);

  parallel_cells(result.values.size(), [&](std::size_t cell) {
    CosConfig cfg = profile.config(kVariants[cell % 2]);
    cfg.range_width = widths[cell / 2];
    try {
      result.values[cell] = price(profile.model, market, option, cfg).price;
    } catch (const ComputationError&) {
      result.flags[cell] = CellFlag::NonFinite;
    }
  });

  result.metadata["model"] = profile.name;
  result.metadata["strike"] = format_significant(strike);
  result.metadata["maturity"] = format_significant(maturity);
  result.check_shape();
  return result;
}

std::vector<double> table_strikes() { return linspace(80.0, 120.0, 9); }

std::vector<double> stability_alpha_grid() { return linspace(1.0001, 1.2, 21); }

std::vector<double> stability_width_grid(const Profile& profile) {
  if (profile.name == "cgmy2") return linspace(17.0, 25.0, 13);
  return linspace(6.0, 18.0, 13);
}

std::vector<int> convergence_n_grid() {
  std::vector<int> ns;
  for (int n = 10; n <= 300; n += 10) ns.push_back(n);
  return ns;
}

std::string format_significant(double value, int digits) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<double> linspace(double start, double stop, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {start};
  std::vector<double> out(count);
  const double step = (stop - start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + step * static_cast<double>(i);
  out.back() = stop;
  return out;
}

void write_csv(const ExperimentResult& result, std::ostream& out) {
  result.check_shape();
  for (const Axis& a : result.axes) out << csv_escape(a.name) << ',';
  out << csv_escape(result.value_name) << ",flag\r\n";

  std::vector<std::size_t> coords(result.axes.size(), 0);
  for (std::size_t cell = 0; cell < result.values.size(); ++cell) {
    std::size_t rem = cell;
    for (std::size_t k = result.axes.size(); k-- > 0;) {
      coords[k] = rem % result.axes[k].labels.size();
      rem /= result.axes[k].labels.size();
    }
    for (std::size_t k = 0; k < coords.size(); ++k) {
      out << csv_escape(result.axes[k].labels[coords[k]]) << ',';
    }
    out << format_significant(result.values[cell]) << ',' << to_string(result.flags[cell])
        << "\r\n";
  }
}

void write_csv(const ExperimentResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  write_csv(result, out);
  if (!out) throw ValidationError("write failure on " + path.string());
}

std::string to_json(const ExperimentResult& result, double wall_clock_seconds) {
  nlohmann::ordered_json j;
  j["id"] = result.id;
  j["value"] = result.value_name;
  for (const Axis& a : result.axes) {
    j["axes"].push_back({{"name", a.name}, {"labels", a.labels}});
  }
  j["metadata"] = result.metadata;
  j["wall_clock_seconds"] = wall_clock_seconds;
  j["library_version"] = STABLECOS_VERSION;

  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  j["generated_at"] = stamp;
  return j.dump(2);
}

void write_sidecar(const ExperimentResult& result, double wall_clock_seconds,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  out << to_json(result, wall_clock_seconds) << '\n';
  if (!out) throw ValidationError("write failure on " + path.string());
}

}  // namespace stablecos

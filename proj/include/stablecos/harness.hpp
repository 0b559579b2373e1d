#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stablecos/cos_engine.hpp"
#include "stablecos/presets.hpp"

namespace stablecos {

enum class PricingMethod { StableCos, PutCallCos, DirectCos, FourierIntegral, CarrMadan };

std::string to_string(PricingMethod m);
PricingMethod pricing_method_from_string(std::string_view name);
CosVariant cos_variant(PricingMethod m);  // throws for non-COS methods

enum class CellFlag { Ok, Skipped, CancellationRegime, NonFinite };

std::string to_string(CellFlag f);

struct Axis {
  std::string name;
  std::vector<std::string> labels;
};

/// Dense result tensor over the axes (row-major, last axis fastest) with a
/// per-cell flag. `value_name` is "price" or "log10_abs_error".
struct ExperimentResult {
  std::string id;
  std::vector<Axis> axes;
  std::string value_name = "price";
  std::vector<double> values;
  std::vector<CellFlag> flags;
  std::map<std::string, std::string> metadata;

  std::size_t cell_count() const;
  std::size_t index(std::span<const std::size_t> coords) const;
  double at(std::initializer_list<std::size_t> coords) const;
  CellFlag flag_at(std::initializer_list<std::size_t> coords) const;
  /// Throws if values/flags sizes disagree with the axes.
  void check_shape() const;
};

/// Reference prices at K = 100, T = 1 keyed by profile name.
class ReferenceSet {
 public:
  explicit ReferenceSet(std::map<std::string, double> values);

  double at(const std::string& profile) const;
  const std::map<std::string, double>& values() const noexcept { return values_; }

 private:
  std::map<std::string, double> values_;
};

/// Parity COS with N = 60000 at the profile's reference width.
constexpr int kReferenceTerms = 60000;
double recompute_reference(const Profile& profile, const MarketSpec& market, double strike = 100.0);

ExperimentResult run_strike_table(std::span<const Profile* const> models,
                                  std::span<const double> strikes,
                                  std::span<const PricingMethod> methods);

enum class ReferenceCheck { Enforce, Report };

struct ConvergenceOptions {
  double strike = 100.0;
  double reference_tolerance = 5e-13;
  ReferenceCheck check = ReferenceCheck::Enforce;
};

/// log10 |price(N) - reference| for each N. The stored reference is first
/// recomputed; a mismatch throws (Enforce) or is recorded in metadata
/// (Report).
ExperimentResult run_convergence(const Profile& profile, std::span<const int> n_values,
                                 PricingMethod method, const ReferenceSet& reference,
                                 const ConvergenceOptions& options = {});

/// Same curve against an explicit reference value, for other maturities.
ExperimentResult convergence_curve(const Profile& profile, const MarketSpec& market,
                                   std::span<const int> n_values, PricingMethod method,
                                   double reference, double strike = 100.0);

/// Stable COS call prices over damping x width. Metadata carries
/// "max_minus_min".
ExperimentResult run_stability_surface(const Profile& profile, std::span<const double> alphas,
                                       std::span<const double> widths, double strike,
                                       double maturity, int n_terms);

/// Stable and parity COS call prices for each L.
ExperimentResult run_l_sweep(const Profile& profile, std::span<const double> widths,
                             double strike, double maturity);

/// Long-format CSV: one column per axis, then the value and its flag.
void write_csv(const ExperimentResult& result, std::ostream& out);
void write_csv(const ExperimentResult& result, const std::filesystem::path& path);

/// JSON sidecar: id, axes, metadata, wall-clock seconds, library version.
void write_sidecar(const ExperimentResult& result, double wall_clock_seconds,
                   const std::filesystem::path& path);
std::string to_json(const ExperimentResult& result, double wall_clock_seconds);

/// Default experiment grids: strikes 80..120 step 5; 21 damping points over
/// [1.0001, 1.2]; 13 widths over [6, 18] ([17, 25] for the fat-tailed
/// cgmy2); N = 10, 20, ..., 300 for convergence curves.
std::vector<double> table_strikes();
std::vector<double> stability_alpha_grid();
std::vector<double> stability_width_grid(const Profile& profile);
std::vector<int> convergence_n_grid();

/// Helpers shared with the CLI.
std::string format_significant(double value, int digits = 13);
std::string csv_escape(const std::string& field);
std::vector<double> linspace(double start, double stop, std::size_t count);

}  // namespace stablecos

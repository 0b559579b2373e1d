// stablecos command-line front end: price, reproduce, sweep.
#include <chrono>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stablecos/cos_engine.hpp"
#include "stablecos/errors.hpp"
#include "stablecos/golden.hpp"
#include "stablecos/harness.hpp"
#include "stablecos/presets.hpp"
#include "stablecos/run_config.hpp"

namespace fs = std::filesystem;
using namespace stablecos;

namespace {

constexpr double kTable5CosTolerance = 5e-10;
constexpr double kTable5FtmTolerance = 1e-8;
constexpr double kTable5FftTolerance = 1e-3;
constexpr double kTable6Tolerance = 5e-13;

// Raw string flags; they are validated by the run-config layer so that
// diagnostics name the key.
class FlagSet {
 public:
  void add(CLI::App& app, const std::string& names, const std::string& key,
           const std::string& help) {
    auto& b = bindings_.emplace_back(Binding{key, {}, nullptr});
    b.option = app.add_option(names, b.value, help);
  }

  KeyValues collect() const {
    KeyValues kv;
    for (const auto& b : bindings_) {
      if (b.option->count() > 0) kv[b.key] = b.value;
    }
    return kv;
  }

 private:
  struct Binding {
    std::string key;
    std::string value;
    CLI::Option* option;
  };
  std::deque<Binding> bindings_;
};

void add_pricing_flags(CLI::App& app, FlagSet& flags) {
  flags.add(app, "--profile", "profile", "heston, kou, cgmy1 or cgmy2");
  flags.add(app, "--method", "method", "stable, parity or direct");
  flags.add(app, "--kind", "kind", "call or put");
  flags.add(app, "--strike", "strike", "strike price");
  flags.add(app, "--maturity", "maturity", "time to maturity in years");
  flags.add(app, "--alpha", "alpha", "damping factor (stable method)");
  flags.add(app, "-N,--terms", "N", "number of cosine terms");
  flags.add(app, "-L,--width", "L", "truncation width multiplier");
  flags.add(app, "--format", "format", "csv, json or plain");
}

std::string fixed10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  return buf;
}

// Writes to the path, or to stdout when none is given.
void emit(const std::optional<fs::path>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw Error("cannot write " + path->string());
  out << text;
  if (!out) throw Error("write failed for " + path->string());
}

int cmd_price(const std::string& config_path, const KeyValues& flags) {
  const KeyValues file = config_path.empty() ? KeyValues{} : parse_config_file(config_path);
  const RunConfig cfg = resolve_run_config(file, flags);

  const PriceResult r = price(cfg.model, cfg.market, cfg.option, cfg.cos);

  std::ostringstream out;
  switch (cfg.format) {
    case OutputFormat::Plain:
      out << fixed10(r.price) << "\n"
          << "method=" << to_string(r.variant) << " profile=" << cfg.profile
          << " kind=" << to_string(cfg.option.kind())
          << " strike=" << format_significant(cfg.option.strike())
          << " maturity=" << format_significant(cfg.market.maturity()) << " N=" << r.n_terms
          << " L=" << format_significant(r.range_width)
          << " alpha=" << format_significant(r.damping) << "\n";
      break;
    case OutputFormat::Csv:
      out << "profile,method,kind,strike,maturity,N,L,alpha,price\r\n"
          << csv_escape(cfg.profile) << ',' << to_string(r.variant) << ','
          << to_string(cfg.option.kind()) << ',' << format_significant(cfg.option.strike())
          << ',' << format_significant(cfg.market.maturity()) << ',' << r.n_terms << ','
          << format_significant(r.range_width) << ',' << format_significant(r.damping) << ','
          << format_significant(r.price) << "\r\n";
      break;
    case OutputFormat::Json: {
      nlohmann::ordered_json j;
      j["profile"] = cfg.profile;
      j["method"] = to_string(r.variant);
      j["kind"] = to_string(cfg.option.kind());
      j["strike"] = cfg.option.strike();
      j["maturity"] = cfg.market.maturity();
      j["N"] = r.n_terms;
      j["L"] = r.range_width;
      j["alpha"] = r.damping;
      j["range"] = {r.range.a, r.range.b};
      j["price"] = r.price;
      out << j.dump(2) << "\n";
      break;
    }
  }
  emit(cfg.output, out.str());
  return 0;
}

// ---- reproduce ------------------------------------------------------------

struct Timed {
  ExperimentResult result;
  double seconds;
};

template <class F>
Timed timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentResult r = f();
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  return {std::move(r), dt.count()};
}

void save(Timed t, const std::string& stem, const fs::path& dir) {
  t.result.id = stem;
  write_csv(t.result, dir / (stem + ".csv"));
  write_sidecar(t.result, t.seconds, dir / (stem + ".json"));
  std::cout << "wrote " << (dir / (stem + ".csv")).string() << "\n";
}

std::vector<const Profile*> all_profiles() {
  std::vector<const Profile*> ps;
  for (const Profile& p : profiles()) ps.push_back(&p);
  return ps;
}

int reproduce_table5(const fs::path& dir, const fs::path& data_dir) {
  const auto models = all_profiles();
  const auto strikes = table_strikes();
  const std::vector<PricingMethod> methods = {
      PricingMethod::StableCos, PricingMethod::PutCallCos, PricingMethod::DirectCos,
      PricingMethod::FourierIntegral, PricingMethod::CarrMadan};
  Timed t = timed([&] { return run_strike_table(models, strikes, methods); });
  const auto golden = load_strike_table_golden(data_dir / "table5.csv");

  bool all_pass = true;
  for (PricingMethod m : methods) {
    if (m == PricingMethod::CarrMadan) continue;
    const double tol =
        m == PricingMethod::FourierIntegral ? kTable5FtmTolerance : kTable5CosTolerance;
    const auto tally = compare_with_golden(t.result, golden, tol).at(m);
    const bool pass = tally.passed == tally.checked;
    all_pass = all_pass && pass;
    std::printf("%-13s %2d/%-2d %s  max |err| %.2e  (tol %.0e)\n", to_string(m).c_str(),
                tally.passed, tally.checked, pass ? "PASS" : "FAIL", tally.max_abs_error, tol);
    for (const auto& f : tally.failures) {
      std::printf("  %s K=%s: %.10f vs %.10f\n", f.cell.model.c_str(),
                  format_significant(f.cell.strike).c_str(), f.computed, f.cell.price);
    }
  }
  // The golden FFT column has its own off-grid interpolation error, so
  // ours is checked against the Stable_Cos prices instead.
  int fft_passed = 0;
  double fft_max = 0.0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t j = 0; j < strikes.size(); ++j) {
      const double err = std::abs(t.result.at({i, j, 4}) - t.result.at({i, j, 0}));
      fft_max = std::max(fft_max, err);
      fft_passed += err <= kTable5FftTolerance;
    }
  }
  const int fft_checked = static_cast<int>(models.size() * strikes.size());
  all_pass = all_pass && fft_passed == fft_checked;
  std::printf("%-13s %2d/%-2d %s  max |FFT - Stable_Cos| %.2e  (tol %.0e)\n",
              to_string(PricingMethod::CarrMadan).c_str(), fft_passed, fft_checked,
              fft_passed == fft_checked ? "PASS" : "FAIL", fft_max, kTable5FftTolerance);
  save(std::move(t), "table5", dir);
  std::cout << "table5: " << (all_pass ? "PASS" : "FAIL") << "\n";
  return 0;
}

int reproduce_table6(const fs::path& dir, const fs::path& data_dir) {
  const ReferenceSet stored = load_reference_set(data_dir / "table6.csv");
  const auto models = all_profiles();
  Timed t = timed([&] {
    ExperimentResult r;
    r.id = "table6";
    Axis axis{"model", {}};
    for (const Profile* p : models) {
      axis.labels.push_back(p->name);
      r.values.push_back(recompute_reference(*p, p->market));
      r.flags.push_back(CellFlag::Ok);
    }
    r.axes = {axis};
    r.metadata["method"] = to_string(PricingMethod::PutCallCos);
    r.metadata["N"] = std::to_string(kReferenceTerms);
    r.metadata["strike"] = "100";
    r.metadata["maturity"] = "1";
    return r;
  });

  int passed = 0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const double want = stored.at(models[i]->name);
    const double err = std::abs(t.result.values[i] - want);
    const bool pass = err <= kTable6Tolerance;
    passed += pass;
    std::printf("%-7s %.13f  stored %.13f  |err| %.2e  %s\n", models[i]->name.c_str(),
                t.result.values[i], want, err, pass ? "PASS" : "FAIL");
  }
  std::printf("table6: %d/%zu PASS at %.0e\n", passed, models.size(), kTable6Tolerance);
  save(std::move(t), "table6", dir);
  return 0;
}

int reproduce_stability(const std::string& target, double maturity, const fs::path& dir) {
  const auto alphas = stability_alpha_grid();
  for (const Profile& p : profiles()) {
    const auto widths = stability_width_grid(p);
    Timed t = timed([&] {
      return run_stability_surface(p, alphas, widths, 80.0, maturity, p.stable.n_terms);
    });
    std::cout << p.name << " max-min " << t.result.metadata.at("max_minus_min") << "\n";
    save(std::move(t), target + "_" + p.name, dir);
  }
  return 0;
}

int reproduce_convergence_all(const fs::path& dir, const fs::path& data_dir) {
  const ReferenceSet stored = load_reference_set(data_dir / "table6.csv");
  const auto ns = convergence_n_grid();
  ConvergenceOptions opts;
  opts.check = ReferenceCheck::Report;
  for (const Profile& p : profiles()) {
    for (PricingMethod m :
         {PricingMethod::StableCos, PricingMethod::PutCallCos, PricingMethod::DirectCos}) {
      Timed t = timed([&] { return run_convergence(p, ns, m, stored, opts); });
      if (m == PricingMethod::StableCos) {
        std::cout << p.name << " reference check " << t.result.metadata.at("reference_check")
                  << " (|diff| " << t.result.metadata.at("reference_mismatch") << ")\n";
      }
      save(std::move(t), "fig4_" + p.name + "_" + to_string(m), dir);
    }
  }
  return 0;
}

int reproduce_maturity_convergence(const std::string& target, const std::string& name,
                                   double maturity, const fs::path& dir) {
  const Profile& p = profile(name);
  const MarketSpec market = p.market.with_maturity(maturity);
  const double reference = recompute_reference(p, market);
  const auto ns = convergence_n_grid();
  for (PricingMethod m : {PricingMethod::StableCos, PricingMethod::PutCallCos}) {
    Timed t = timed([&] { return convergence_curve(p, market, ns, m, reference); });
    save(std::move(t), target + "_" + to_string(m), dir);
  }
  return 0;
}

int reproduce_l_sweep(const fs::path& dir) {
  for (const Profile& p : profiles()) {
    const auto widths = stability_width_grid(p);
    Timed t = timed([&] { return run_l_sweep(p, widths, 100.0, 1.0); });
    save(std::move(t), "fig7_" + p.name, dir);
  }
  return 0;
}

int cmd_reproduce(const std::string& target, const fs::path& dir, const fs::path& data_dir) {
  static const std::vector<std::string> kTargets = {"table5", "table6", "fig1", "fig2", "fig3",
                                                    "fig4",   "fig5",   "fig6", "fig7"};
  if (std::find(kTargets.begin(), kTargets.end(), target) == kTargets.end()) {
    throw ValidationError("unknown target '" + target +
                          "' (expected table5, table6 or fig1..fig7)");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string());

  if (target == "table5") return reproduce_table5(dir, data_dir);
  if (target == "table6") return reproduce_table6(dir, data_dir);
  if (target == "fig1") return reproduce_stability(target, 1.0, dir);
  if (target == "fig2") return reproduce_stability(target, 0.1, dir);
  if (target == "fig3") return reproduce_stability(target, 5.0, dir);
  if (target == "fig4") return reproduce_convergence_all(dir, data_dir);
  if (target == "fig5") return reproduce_maturity_convergence(target, "cgmy1", 5.0, dir);
  if (target == "fig6") return reproduce_maturity_convergence(target, "cgmy2", 0.1, dir);
  return reproduce_l_sweep(dir);
}

// ---- sweep ----------------------------------------------------------------

struct SweepArgs {
  std::string experiment;
  std::string profile = "heston";
  std::string method = "stable";
  std::optional<double> strike;
  double maturity = 1.0;
  std::optional<int> n_terms;
  double alpha_min = 1.0001, alpha_max = 1.2;
  std::size_t alpha_points = 21;
  std::optional<double> width_min, width_max;
  std::size_t width_points = 13;
  std::vector<int> n_values;
  std::string reference_check = "enforce";
  std::optional<std::string> output;
  std::string format = "csv";
};

std::string render_plain(const ExperimentResult& r) {
  std::ostringstream out;
  std::vector<std::size_t> coords(r.axes.size(), 0);
  for (std::size_t cell = 0; cell < r.cell_count(); ++cell) {
    std::size_t rem = cell;
    for (std::size_t k = r.axes.size(); k-- > 0;) {
      coords[k] = rem % r.axes[k].labels.size();
      rem /= r.axes[k].labels.size();
    }
    for (std::size_t k = 0; k < r.axes.size(); ++k) {
      out << r.axes[k].name << '=' << r.axes[k].labels[coords[k]] << ' ';
    }
    out << r.value_name << '=' << format_significant(r.values[cell]);
    if (r.flags[cell] != CellFlag::Ok) out << " [" << to_string(r.flags[cell]) << ']';
    out << "\n";
  }
  for (const auto& [k, v] : r.metadata) out << "# " << k << ": " << v << "\n";
  return out.str();
}

int cmd_sweep(const SweepArgs& a, const fs::path& data_dir) {
  const Profile& p = profile(a.profile);
  const OutputFormat format = output_format_from_string(a.format);
  const PricingMethod method = pricing_method_from_string(a.method);
  if (a.maturity <= 0.0) throw ValidationError("maturity: must be positive");

  const auto widths = [&] {
    if (!a.width_min && !a.width_max) return stability_width_grid(p);
    const auto defaults = stability_width_grid(p);
    return linspace(a.width_min.value_or(defaults.front()), a.width_max.value_or(defaults.back()),
                    a.width_points);
  };

  Timed t;
  if (a.experiment == "stability") {
    const auto alphas = linspace(a.alpha_min, a.alpha_max, a.alpha_points);
    const auto ws = widths();
    t = timed([&] {
      return run_stability_surface(p, alphas, ws, a.strike.value_or(80.0), a.maturity,
                                   a.n_terms.value_or(p.stable.n_terms));
    });
  } else if (a.experiment == "lsweep") {
    const auto ws = widths();
    t = timed([&] { return run_l_sweep(p, ws, a.strike.value_or(100.0), a.maturity); });
  } else if (a.experiment == "convergence") {
    const auto ns = a.n_values.empty() ? convergence_n_grid() : a.n_values;
    const double strike = a.strike.value_or(100.0);
    if (a.maturity == 1.0 && strike == 100.0) {
      ConvergenceOptions opts;
      if (a.reference_check == "report") {
        opts.check = ReferenceCheck::Report;
      } else if (a.reference_check != "enforce") {
        throw ValidationError("reference-check: expected enforce or report");
      }
      const ReferenceSet stored = load_reference_set(data_dir / "table6.csv");
      t = timed([&] { return run_convergence(p, ns, method, stored, opts); });
    } else {
      const MarketSpec market = p.market.with_maturity(a.maturity);
      t = timed([&] {
        return convergence_curve(p, market, ns, method, recompute_reference(p, market, strike),
                                 strike);
      });
    }
  } else {
    throw ValidationError("experiment: expected stability, lsweep or convergence (got '" +
                          a.experiment + "')");
  }

  std::string text;
  switch (format) {
    case OutputFormat::Csv: {
      std::ostringstream out;
      write_csv(t.result, out);
      text = out.str();
      break;
    }
    case OutputFormat::Json:
      text = to_json(t.result, t.seconds) + "\n";
      break;
    case OutputFormat::Plain:
      text = render_plain(t.result);
      break;
  }
  emit(a.output ? std::optional<fs::path>(*a.output) : std::nullopt, text);
  return 0;
}

void print_error(const std::string& message) {
  std::string line = message;
  std::replace(line.begin(), line.end(), '\n', ' ');
  std::cerr << "stablecos: error: " << line << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Damped Fourier-cosine option pricer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", STABLECOS_VERSION);
  std::string data_dir = default_data_dir().string();
  app.add_option("--data-dir", data_dir, "directory with the bundled reference tables");

  auto* price_cmd = app.add_subcommand("price", "price one European option");
  FlagSet price_flags;
  add_pricing_flags(*price_cmd, price_flags);
  std::string config_path;
  price_flags.add(*price_cmd, "--output", "output", "write the result to this file");
  price_cmd->add_option("--config", config_path, "key=value config file");

  auto* repro_cmd = app.add_subcommand("reproduce", "regenerate a table or figure data set");
  std::string target;
  std::string repro_dir = ".";
  repro_cmd->add_option("target", target, "table5, table6, fig1..fig7")->required();
  repro_cmd->add_option("--output", repro_dir, "output directory");

  auto* sweep_cmd = app.add_subcommand("sweep", "run one experiment grid");
  SweepArgs sweep;
  sweep_cmd->add_option("--experiment", sweep.experiment, "stability, lsweep or convergence")
      ->required();
  sweep_cmd->add_option("--profile", sweep.profile, "model profile");
  sweep_cmd->add_option("--method", sweep.method, "convergence method: stable, parity, direct");
  sweep_cmd->add_option("--strike", sweep.strike, "strike (default 80 for stability, else 100)");
  sweep_cmd->add_option("--maturity", sweep.maturity, "maturity in years");
  sweep_cmd->add_option("-N,--terms", sweep.n_terms, "cosine terms for the stability surface");
  sweep_cmd->add_option("--alpha-min", sweep.alpha_min);
  sweep_cmd->add_option("--alpha-max", sweep.alpha_max);
  sweep_cmd->add_option("--alpha-points", sweep.alpha_points)->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--L-min", sweep.width_min);
  sweep_cmd->add_option("--L-max", sweep.width_max);
  sweep_cmd->add_option("--L-points", sweep.width_points)->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--n-values", sweep.n_values, "N grid for convergence")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--reference-check", sweep.reference_check, "enforce or report");
  sweep_cmd->add_option("--output", sweep.output, "write to this file instead of stdout");
  sweep_cmd->add_option("--format", sweep.format, "csv, json or plain");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(e.what());
    return 2;
  }

  try {
    if (*price_cmd) return cmd_price(config_path, price_flags.collect());
    if (*repro_cmd) return cmd_reproduce(target, repro_dir, data_dir);
    return cmd_sweep(sweep, data_dir);
  } catch (const std::exception& e) {
    print_error(e.what());
    return 1;
  }
}

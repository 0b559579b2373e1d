#include "stablecos/golden.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stablecos/errors.hpp"

namespace stablecos {

namespace {

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path,
                                                std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != columns) {
      throw ValidationError(path.filename().string() + ":" + std::to_string(line_no) +
                            ": expected " + std::to_string(columns) + " fields");
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw ValidationError("malformed number '" + s + "'");
  return v;
}

}  // namespace

std::filesystem::path default_data_dir() { return STABLECOS_DATA_DIR; }

std::vector<GoldenCell> load_strike_table_golden(const std::filesystem::path& path) {
  std::vector<GoldenCell> cells;
  for (const auto& row : read_rows(path, 4)) {
    cells.push_back(
        {row[0], to_double(row[1]), pricing_method_from_string(row[2]), to_double(row[3])});
  }
  return cells;
}

ReferenceSet load_reference_set(const std::filesystem::path& path) {
  std::map<std::string, double> values;
  for (const auto& row : read_rows(path, 2)) values[row[0]] = to_double(row[1]);
  return ReferenceSet(std::move(values));
}

std::map<PricingMethod, GoldenTally> compare_with_golden(const ExperimentResult& result,
                                                         const std::vector<GoldenCell>& golden,
                                                         double tolerance) {
  auto find_label = [](const Axis& axis, const std::string& label) -> std::ptrdiff_t {
    const auto it = std::find(axis.labels.begin(), axis.labels.end(), label);
    return it == axis.labels.end() ? -1 : it - axis.labels.begin();
  };
  std::map<PricingMethod, GoldenTally> tallies;
  for (const GoldenCell& cell : golden) {
    const auto i = find_label(result.axes.at(0), cell.model);
    const auto j = find_label(result.axes.at(1), format_significant(cell.strike));
    const auto k = find_label(result.axes.at(2), to_string(cell.method));
    if (i < 0 || j < 0 || k < 0) continue;
    const std::initializer_list<std::size_t> at = {static_cast<std::size_t>(i),
                                                   static_cast<std::size_t>(j),
                                                   static_cast<std::size_t>(k)};
    if (result.flag_at(at) != CellFlag::Ok) continue;
    const double computed = result.at(at);
    const double err = std::abs(computed - cell.price);
    GoldenTally& t = tallies[cell.method];
    ++t.checked;
    t.max_abs_error = std::max(t.max_abs_error, std::isfinite(err) ? err : HUGE_VAL);
    if (err <= tolerance) {
      ++t.passed;
    } else {
      t.failures.push_back({cell, computed});
    }
  }
  return tallies;
}

}  // namespace stablecos

#pragma once

// Running scenarios and writing their reports.
//
// JSON reports carry every computed figure; CSV holds tabular views. Sweep CSV
// columns, in order:
//   theta, eta, gain, epsilon, chi, sigma_A, sigma_B, k1, k2, k3, k4, k5,
//   admissibility_min_eigenvalue, <relation>_slack for each scenario relation, status
// Rows run lexicographically over (theta, eta, gain) with gain varying fastest.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ncoup/inequalities.hpp"
#include "ncoup/measurement.hpp"
#include "ncoup/scenario.hpp"
#include "ncoup/search.hpp"

namespace ncoup {

struct RunOptions {
  std::optional<std::uint64_t> seed;    // overrides search.seed
  std::optional<std::int64_t> budget;   // overrides search.budget
  bool require_search = false;          // fail when the scenario has no search block
};

struct RunReport {
  Scenario scenario;
  std::string scenario_digest;
  std::string tool_version;
  MeasurementModel model;
  double admissibility_min_eigenvalue = 0.0;
  std::vector<InequalityReport> relations;
  KVector k_vector;
  InterventionScalars intervention;
  KCoefficients k;
  Eigen::MatrixXd probe_commutators;
  std::optional<SearchResult> search;
  std::optional<ProbeFamily> search_family;
  std::int64_t search_budget = 0;
  std::uint64_t search_seed = 0;
  double wall_time_ms = 0.0;
};

/// FNV-1a 64 of the canonical scenario text, as 16 hex digits.
std::string scenario_digest(const Scenario& scenario);

RunReport run(const Scenario& scenario, const RunOptions& options = {});

struct SweepRow {
  double theta = 0.0;
  double eta = 0.0;
  double gain = 0.0;
  std::vector<double> values;  // columns after gain, before status
  std::string status = "ok";
};

struct SweepTable {
  std::vector<std::string> columns;  // full header including theta, eta, gain and status
  std::vector<SweepRow> rows;
};

/// Grid from `grid` (or the scenario's sweep block); empty axes fall back to the base value.
/// Throws ParameterError on an explicitly empty axis.
SweepTable sweep(const Scenario& scenario, const std::optional<SweepSpec>& grid = std::nullopt);

/// Full report as JSON text. `include_wall_time = false` gives reproducible bytes.
std::string report_json(const RunReport& report, bool include_wall_time = true);
/// relation_id, lhs, rhs, slack, satisfied
std::string report_csv(const RunReport& report);
std::string sweep_csv(const SweepTable& table);
std::string sweep_json(const SweepTable& table, const Scenario& scenario);

/// Writes to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

/// Writes the report in every format the scenario requests; returns the paths written.
std::vector<std::filesystem::path> write_report(const RunReport& report, const std::filesystem::path& dir);
std::vector<std::filesystem::path> write_sweep(const SweepTable& table, const Scenario& scenario,
                                               const std::filesystem::path& dir);

}  // namespace ncoup

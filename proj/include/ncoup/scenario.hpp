#pragma once

// Scenario files: a versioned JSON document describing one run.
//
//   {
//     "schema_version": 1,
//     "name": "bae_minimal",
//     "preset": "ozawa_halfbar",                      optional, sets hbar = 1/2
//     "params": {"hbar": 1, "theta": 0, "eta": 0},
//     "model": {"kind": "bae", "mode": "exact", "gain": 0.5},
//     "object_state": {"kind": "vacuum"},
//     "probe_state": {"kind": "squeezed", "squeeze_x": 2, "squeeze_y": 0.5, "mean": [0, 0, 0, 0]},
//     "center_probe": false,
//     "relations": ["heisenberg_eq0", "ozawa_eq3"],
//     "pair": ["X_a", "P_Xa"],
//     "search": {"family": "gaussian", "budget": 1000, "seed": 7,
//                "axes": {"thermal_y": {"lo": 1, "hi": 100, "log": true}}},
//     "sweep": {"theta": [0, 0.01], "eta": [0], "gain": [0.1, 0.2]},
//     "output": {"formats": ["json", "csv"], "dir": "out", "stem": "bae_minimal"}
//   }
//
// State kinds: vacuum, nc_vacuum (pure state of the deformed algebra), squeezed
// (squeeze_x, squeeze_y), thermal (factor times the vacuum covariance) and
// explicit (cov, a 4x4 nested array). Every kind takes an optional 4-entry mean.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ncoup/algebra.hpp"
#include "ncoup/gaussian.hpp"
#include "ncoup/inequalities.hpp"
#include "ncoup/measurement.hpp"
#include "ncoup/search.hpp"

namespace ncoup {

inline constexpr int kSchemaVersion = 1;

enum class StateKind { vacuum, nc_vacuum, squeezed, thermal, explicit_cov };
std::string_view state_kind_name(StateKind kind);

struct StateSpec {
  StateKind kind = StateKind::vacuum;
  double squeeze_x = 1.0;
  double squeeze_y = 1.0;
  double factor = 1.0;
  std::vector<double> cov;   // row-major 4x4, explicit kind only
  std::vector<double> mean;  // empty means zero

  friend bool operator==(const StateSpec&, const StateSpec&) = default;
};

/// One-party state for `spec` in the algebra of `params`; throws AdmissibilityError.
GaussianState build_party_state(const StateSpec& spec, const DeformationParams& params);

struct AxisOverride {
  FamilyAxis axis;
  AxisRange range;

  friend bool operator==(const AxisOverride&, const AxisOverride&) = default;
};

struct SearchSpec {
  std::string family = "gaussian";
  std::vector<AxisOverride> axes;
  std::int64_t budget = 1000;
  std::uint64_t seed = 0;

  /// Preset family with the overrides applied.
  ProbeFamily resolve(const DeformationParams& params) const;

  friend bool operator==(const SearchSpec&, const SearchSpec&) = default;
};

/// Grid axes of a sweep; an empty axis keeps the scenario's base value.
struct SweepSpec {
  std::vector<double> theta;
  std::vector<double> eta;
  std::vector<double> gain;

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct OutputSpec {
  std::vector<std::string> formats{"json"};
  std::string dir = ".";
  std::string stem;

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct Scenario {
  int schema_version = kSchemaVersion;
  std::string name = "scenario";
  std::optional<std::string> preset;
  DeformationParams params;
  ModelKind kind = ModelKind::bae;
  Mode mode = Mode::exact;
  std::optional<double> gain;
  StateSpec object_state;
  StateSpec probe_state;
  bool center_probe = false;
  std::vector<RelationId> relations{RelationId::heisenberg_eq0};
  ObservablePair pair = kDefaultPair;
  std::optional<SearchSpec> search;
  std::optional<SweepSpec> sweep;
  OutputSpec output;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses and validates; every problem found is reported in one ValidationError.
/// An inadmissible state surfaces as AdmissibilityError when it is the only problem.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

/// Canonical JSON text with every default written out; parse_scenario inverts it.
std::string serialize_scenario(const Scenario& scenario);

/// Model and input state the scenario describes, at its own parameters.
MeasurementModel scenario_model(const Scenario& scenario);
GaussianState scenario_state(const Scenario& scenario, const MeasurementModel& model);

/// Edit distance used for unknown-key suggestions.
std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace ncoup

#pragma once

// Noise/disturbance figures and the uncertainty relations built from them.
//
// epsilon(A) = rms(N(A)), chi(B) = rms(D(B)), sigma = standard deviation in the
// input state. eps_C and chi_C are the same quantities with theta = eta = 0.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ncoup/gaussian.hpp"
#include "ncoup/measurement.hpp"

namespace ncoup {

inline constexpr double kSlackTolerance = 1e-10;

enum class RelationId {
  heisenberg_eq0,
  ozawa_eq3,
  bound_eq4,
  universal_eq5,
  ncoup_bae_eq82,
  ncoup_bae_reduced_eq86,
  window_eq86_1,
  ncoup_transducer_eq_nl15,
};

std::span<const RelationId> relation_catalog();
std::string_view relation_name(RelationId id);
std::optional<RelationId> parse_relation(std::string_view name);
/// Whether `id` can be evaluated on models of `kind`.
bool relation_applies(RelationId id, ModelKind kind);

struct KCoefficients {
  double k1 = 0.0;  // 2 <{X_b, P_Yb}> / <X_b^2>
  double k2 = 0.0;  // <{P_Xb, Y_a}> / <P_Xb^2>
  double k3 = 0.0;  // <P_Yb^2>, raw moment
  double k4 = 0.0;  // <{P_Xa + P_Xb, Y_a}> / <(P_Xa + P_Xb)^2>
  double k5 = 0.0;  // <Y_a^2> / <(P_Xa + P_Xb)^2>
  bool noise_expansion_valid = true;        // 1 + k1 theta G^2 / 2hbar > 0
  bool disturbance_expansion_valid = true;  // 1 + k2 eta G / 2hbar > 0
};

/// Throws DegenerateStateError when a denominator moment vanishes.
KCoefficients k_coefficients(const MeasurementModel& model, const GaussianState& state);

struct DigestEntry {
  std::string name;
  double value = 0.0;
};

struct InequalityReport {
  RelationId relation = RelationId::heisenberg_eq0;
  double lhs = 0.0;
  double rhs = 0.0;
  /// lhs - rhs, except bound_eq4 (rhs - lhs, an upper bound) and window_eq86_1
  /// (smallest margin of its three comparisons). satisfied <=> slack >= -1e-10.
  double slack = 0.0;
  bool satisfied = false;
  std::vector<DigestEntry> inputs;

  /// NaN when absent.
  double input(std::string_view name) const;
};

using ObservablePair = std::pair<Label, Label>;
inline constexpr ObservablePair kDefaultPair{Label::X_a, Label::P_Xa};

/// Throws ModelError when the relation does not apply to the model or pair.
InequalityReport evaluate_relation(RelationId id, const MeasurementModel& model, const GaussianState& state,
                                   ObservablePair pair = kDefaultPair);

/// Components of 0 < (hbar/2)(1 - nc_term) <= eps_C chi_C < hbar/2 with nc_term = k1 theta G^2 / 2hbar.
struct WindowCheck {
  double product = 0.0;
  double lower_edge = 0.0;
  double upper_edge = 0.0;
  double nc_term = 0.0;
  bool lower_edge_positive = false;
  bool lower_le_product = false;
  bool product_lt_upper = false;
  std::string diagnosis;

  bool inside() const { return lower_edge_positive && lower_le_product && product_lt_upper; }
  /// Smallest margin; >= -1e-10 exactly when inside().
  double margin() const;
};

/// Predicate on raw numbers. Strict comparisons carry a 1e-10 margin.
WindowCheck window_predicate(double hbar, double nc_term, double product);
/// BAE models only.
WindowCheck window_condition(const GaussianState& state, const MeasurementModel& model);

/// Exact BAE noise next to its two small-theta expansions.
struct NoiseExpansion {
  double exact = 0.0;           // rms(N(X_a)) under the model's map
  double commutative = 0.0;     // eps_C
  double linear_in_k1 = 0.0;    // eps_C (1 + k1 theta G^2 / 2hbar)
  double square_root = 0.0;     // eps_C (1 + k1 theta G^2 / 4hbar), expansion of the exact square root
};
NoiseExpansion bae_noise_expansion(const MeasurementModel& model, const GaussianState& state);

}  // namespace ncoup

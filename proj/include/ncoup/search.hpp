#pragma once

// Feasibility search for probe states inside the OUP violation window of the
// reduced BAE relation, minimizing eps_C * chi_C over a Gaussian probe family.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncoup/gaussian.hpp"
#include "ncoup/inequalities.hpp"
#include "ncoup/measurement.hpp"

namespace ncoup {

/// Coordinates of the probe family, in this order.
enum class FamilyAxis : int {
  squeeze_x = 0,  // X-mode squeeze s: V_X = s hbar/2, V_PX = hbar/(2s)
  squeeze_y,
  thermal_x,      // multiplies the X-mode block, >= 1
  thermal_y,
  rotation,       // rotation angle in the (X_b, P_Xb) plane
  corr_x_py,      // added Cov(X_b, P_Yb)
  corr_x_y,       // added Cov(X_b, Y_b)
  mean_x,
  mean_px,
};
inline constexpr int kFamilyAxes = 9;
std::string_view family_axis_name(FamilyAxis axis);

struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;
  bool log_scale = false;

  bool fixed() const { return lo == hi; }
  double at(double u) const;  // u in [0, 1]

  friend bool operator==(const AxisRange&, const AxisRange&) = default;
};

struct ProbeFamily {
  std::string name = "custom";
  std::array<AxisRange, kFamilyAxes> axes{};

  AxisRange& axis(FamilyAxis a) { return axes[static_cast<std::size_t>(a)]; }
  const AxisRange& axis(FamilyAxis a) const { return axes[static_cast<std::size_t>(a)]; }
  int free_axes() const;

  /// Pure squeezed probes: only the squeeze axes vary.
  static ProbeFamily diagonal_squeezed(const DeformationParams& params);
  /// Every axis free, including X_b-P_Yb correlations and large Y-mode occupations.
  static ProbeFamily gaussian(const DeformationParams& params);
  /// Degenerate family holding one coordinate point.
  static ProbeFamily single_point(const std::array<double, kFamilyAxes>& point);
  static std::optional<ProbeFamily> preset(std::string_view name, const DeformationParams& params);

  friend bool operator==(const ProbeFamily&, const ProbeFamily&) = default;
};

/// Probe mean and covariance at a coordinate point (no admissibility check).
struct ProbeMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};
ProbeMoments family_point(const std::array<double, kFamilyAxes>& coords, const DeformationParams& params);

struct SearchCertificate {
  double min_product = 0.0;
  double robertson_bound = 0.0;  // hbar/2
  double gap = 0.0;              // min_product - hbar/2
  double max_k1 = 0.0;
  double nc_lower_edge_at_max_k1 = 0.0;
  std::int64_t admissible_points = 0;
  std::int64_t rejected_points = 0;
  std::string finding;
};

enum class Feasibility { found, empty_over_family };
std::string_view feasibility_name(Feasibility f);

struct SearchResult {
  double best_value = 0.0;
  std::optional<GaussianState> best_state;
  std::array<double, kFamilyAxes> best_coords{};
  std::vector<GaussianState> window_hits;  // at most kMaxStoredHits
  std::int64_t window_hit_count = 0;
  Feasibility verdict = Feasibility::empty_over_family;
  std::int64_t evaluations = 0;
  SearchCertificate certificate;
  std::string family_name;

  static constexpr std::size_t kMaxStoredHits = 64;
};

/// Deterministic in (model, family, budget, seed). Throws ModelError for non-BAE
/// models and ParameterError for budget < 1. The object state defaults to the
/// algebra ground state.
SearchResult search_min_product(const MeasurementModel& model, const ProbeFamily& family, std::int64_t budget,
                                std::uint64_t seed, const std::optional<GaussianState>& object = std::nullopt);

}  // namespace ncoup

#pragma once

// Measurement interactions: a Heisenberg map plus the probe observables read
// out after the interaction. Noise N(A) = M_out - A_in, disturbance
// D(B) = B_out - B_in.

#include <optional>
#include <string_view>
#include <vector>

#include "ncoup/algebra.hpp"
#include "ncoup/dynamics.hpp"

namespace ncoup {

enum class ModelKind { bae, transducer, custom };
std::string_view model_kind_name(ModelKind kind);

struct MeasurementModel {
  ModelKind kind = ModelKind::bae;
  /// Algebra the model acts in; theta = eta = 0 in commutative mode.
  DeformationParams params;
  /// Parameters as requested, before the commutative projection.
  DeformationParams requested_params;
  std::optional<double> gain;
  LinearMap map;
  CommutationMatrix omega;
  /// Probe readouts M_i, paired with measured[i].
  std::vector<LinearObservable> probe_observables;
  std::vector<Label> measured;
  Mode mode = Mode::exact;

  /// Gain for BAE models, 1 for the transducer.
  double effective_gain() const { return gain.value_or(1.0); }
};

/// BAE uses M = (X_b/G, Y_b/G) and requires a nonzero gain; the transducer uses M = (X_b, Y_b).
MeasurementModel build_model(ModelKind kind, const DeformationParams& params, std::optional<double> gain, Mode mode);

/// Arbitrary map/probe pairing. Probe observables must be supported on the probe block only.
MeasurementModel make_custom_model(const DeformationParams& params, LinearMap map,
                                   std::vector<LinearObservable> probe_observables, std::vector<Label> measured,
                                   Mode mode);

/// Same kind and gain evaluated at theta = eta = 0.
MeasurementModel commutative_counterpart(const MeasurementModel& model);

LinearObservable noise_operator(const MeasurementModel& model, Label measured);
LinearObservable disturbance_operator(const MeasurementModel& model, Label observable);

/// (N(X_a), N(Y_a), D(P_Xa), D(P_Ya)); Z_out = Z_in + K with Z = (M, P_a).
struct KVector {
  std::vector<LinearObservable> entries;
};
KVector k_vector(const MeasurementModel& model);

/// [N(A), B_in] = i noise_term and [A_in, D(B)] = i disturbance_term.
struct InterventionScalars {
  double noise_term = 0.0;
  double disturbance_term = 0.0;

  double combined() const { return noise_term + disturbance_term; }
  bool independent() const;
};
InterventionScalars intervention_scalars(const MeasurementModel& model, Label a, Label b);

/// Z_out components (M_1_out, M_2_out, P_Xa_out, P_Ya_out) in the in-basis.
std::vector<LinearObservable> output_observables(const MeasurementModel& model);
/// Pairwise commutator scalars among output_observables().
Eigen::MatrixXd probe_output_commutators(const MeasurementModel& model);

}  // namespace ncoup

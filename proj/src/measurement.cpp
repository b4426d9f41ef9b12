#include "ncoup/measurement.hpp"

#include <algorithm>
#include <cmath>

#include "ncoup/error.hpp"

namespace ncoup {

namespace {

bool provenance_fits(Mode mode, Provenance p) {
  switch (mode) {
    case Mode::exact: return p == Provenance::exact;
    case Mode::commutative: return p == Provenance::exact || p == Provenance::closed_form;
    case Mode::first_order: return p == Provenance::first_order;
  }
  return false;
}

}  // namespace

std::string_view model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::bae: return "bae";
    case ModelKind::transducer: return "transducer";
    case ModelKind::custom: return "custom";
  }
  return "?";
}

bool InterventionScalars::independent() const { return std::abs(combined()) <= 1e-14; }

MeasurementModel build_model(ModelKind kind, const DeformationParams& params, std::optional<double> gain, Mode mode) {
  params.validate();
  MeasurementModel model;
  model.kind = kind;
  model.requested_params = params;
  model.params = mode == Mode::commutative ? params.commutative_limit() : params;
  model.omega = commutation_matrix(model.params, kModelParties);
  model.mode = mode;
  model.measured = {Label::X_a, Label::Y_a};

  switch (kind) {
    case ModelKind::bae: {
      if (!gain) throw ModelError("bae model requires a gain");
      const double g = *gain;
      if (!std::isfinite(g) || g == 0.0) throw ModelError("bae gain must be finite and nonzero");
      model.gain = g;
      switch (mode) {
        case Mode::exact:
          model.map = evolve_exact(generator(bae_hamiltonian(1.0), model.omega, model.params), g);
          break;
        case Mode::commutative: model.map = bae_closed_form(model.params, g); break;
        case Mode::first_order: model.map = bae_first_order(model.params, g); break;
      }
      model.probe_observables = {basis_observable(Label::X_b) * (1.0 / g), basis_observable(Label::Y_b) * (1.0 / g)};
      break;
    }
    case ModelKind::transducer:
      if (gain && *gain != 1.0) throw ModelError("transducer has no gain parameter");
      model.map = transducer_map(model.params, mode);
      model.probe_observables = {basis_observable(Label::X_b), basis_observable(Label::Y_b)};
      break;
    case ModelKind::custom:
      throw ModelError("custom models are assembled with make_custom_model");
  }
  return model;
}

MeasurementModel make_custom_model(const DeformationParams& params, LinearMap map,
                                   std::vector<LinearObservable> probe_observables, std::vector<Label> measured,
                                   Mode mode) {
  params.validate();
  if (map.dim() != kModelDim) throw DimensionError("custom model map must be 8-dimensional");
  if (!provenance_fits(mode, map.provenance)) {
    throw ModelError("map provenance '" + std::string(provenance_name(map.provenance)) + "' does not match mode '" +
                     std::string(mode_name(mode)) + "'");
  }
  if (probe_observables.size() != measured.size()) {
    throw ModelError("custom model needs one probe observable per measured label");
  }
  for (const auto& m : probe_observables) {
    if (m.dim() != kModelDim || m.coeffs().head(kPartyDim).cwiseAbs().maxCoeff() != 0.0) {
      throw ModelError("probe observables must be supported on the probe block only");
    }
  }
  for (Label l : measured) {
    if (!is_object(l)) throw ModelError("measured labels must be object labels");
  }
  MeasurementModel model;
  model.kind = ModelKind::custom;
  model.requested_params = params;
  model.params = mode == Mode::commutative ? params.commutative_limit() : params;
  model.omega = commutation_matrix(model.params, kModelParties);
  model.map = std::move(map);
  model.probe_observables = std::move(probe_observables);
  model.measured = std::move(measured);
  model.mode = mode;
  return model;
}

MeasurementModel commutative_counterpart(const MeasurementModel& model) {
  if (model.kind == ModelKind::custom) throw ModelError("custom models have no commutative counterpart");
  return build_model(model.kind, model.requested_params, model.gain, Mode::commutative);
}

LinearObservable noise_operator(const MeasurementModel& model, Label measured) {
  const auto it = std::find(model.measured.begin(), model.measured.end(), measured);
  if (it == model.measured.end()) {
    throw LabelError("'" + std::string(label_name(measured)) + "' is not measured by this model");
  }
  const auto& probe = model.probe_observables[static_cast<std::size_t>(it - model.measured.begin())];
  return transform_observable(probe, model.map) - basis_observable(measured);
}

LinearObservable disturbance_operator(const MeasurementModel& model, Label observable) {
  if (!is_object(observable)) {
    throw LabelError("disturbance is tracked on object labels only, got '" + std::string(label_name(observable)) + "'");
  }
  const auto in = basis_observable(observable);
  return transform_observable(in, model.map) - in;
}

KVector k_vector(const MeasurementModel& model) {
  return {{noise_operator(model, Label::X_a), noise_operator(model, Label::Y_a),
           disturbance_operator(model, Label::P_Xa), disturbance_operator(model, Label::P_Ya)}};
}

InterventionScalars intervention_scalars(const MeasurementModel& model, Label a, Label b) {
  const auto a_in = basis_observable(a), b_in = basis_observable(b);
  return {commutator(noise_operator(model, a), b_in, model.omega),
          commutator(a_in, disturbance_operator(model, b), model.omega)};
}

std::vector<LinearObservable> output_observables(const MeasurementModel& model) {
  std::vector<LinearObservable> out;
  for (const auto& m : model.probe_observables) out.push_back(transform_observable(m, model.map));
  out.push_back(transform_observable(basis_observable(Label::P_Xa), model.map));
  out.push_back(transform_observable(basis_observable(Label::P_Ya), model.map));
  return out;
}

Eigen::MatrixXd probe_output_commutators(const MeasurementModel& model) {
  const auto out = output_observables(model);
  const auto n = static_cast<Eigen::Index>(out.size());
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      c(i, j) = commutator(out[static_cast<std::size_t>(i)], out[static_cast<std::size_t>(j)], model.omega);
    }
  }
  return c;
}

}  // namespace ncoup

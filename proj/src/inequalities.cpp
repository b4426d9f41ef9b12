#include "ncoup/inequalities.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "ncoup/error.hpp"

namespace ncoup {

namespace {

constexpr std::array<RelationId, 8> kCatalog = {
    RelationId::heisenberg_eq0,         RelationId::ozawa_eq3,     RelationId::bound_eq4,
    RelationId::universal_eq5,          RelationId::ncoup_bae_eq82, RelationId::ncoup_bae_reduced_eq86,
    RelationId::window_eq86_1,          RelationId::ncoup_transducer_eq_nl15,
};

LinearObservable obs(Label l) { return basis_observable(l); }

double ratio(double num, double den, const char* what) {
  if (den == 0.0 || !std::isfinite(den)) {
    throw DegenerateStateError(std::string("degenerate state: ") + what + " vanishes");
  }
  return num / den;
}

struct CoreFigures {
  double epsilon, chi, sigma_a, sigma_b, half_commutator, s1, s2;
};

CoreFigures core_figures(const MeasurementModel& model, const GaussianState& state, ObservablePair pair) {
  const auto [a, b] = pair;
  const auto n = noise_operator(model, a);
  const auto d = disturbance_operator(model, b);
  const auto iv = intervention_scalars(model, a, b);
  return {rms(n, state),
          rms(d, state),
          stddev(obs(a), state),
          stddev(obs(b), state),
          0.5 * std::abs(commutator(obs(a), obs(b), model.omega)),
          iv.noise_term,
          iv.disturbance_term};
}

// eps_C chi_C: figures of the theta = eta = 0 counterpart.
std::pair<double, double> commutative_figures(const MeasurementModel& model, const GaussianState& state,
                                              ObservablePair pair) {
  const auto base = commutative_counterpart(model);
  return {rms(noise_operator(base, pair.first), state), rms(disturbance_operator(base, pair.second), state)};
}

InequalityReport finish(RelationId id, double lhs, double rhs, double slack, std::vector<DigestEntry> inputs) {
  return {id, lhs, rhs, slack, slack >= -kSlackTolerance, std::move(inputs)};
}

void require_kind(RelationId id, const MeasurementModel& model) {
  if (!relation_applies(id, model.kind)) {
    throw ModelError("relation '" + std::string(relation_name(id)) + "' does not apply to a " +
                     std::string(model_kind_name(model.kind)) + " model");
  }
}

}  // namespace

std::span<const RelationId> relation_catalog() { return kCatalog; }

std::string_view relation_name(RelationId id) {
  switch (id) {
    case RelationId::heisenberg_eq0: return "heisenberg_eq0";
    case RelationId::ozawa_eq3: return "ozawa_eq3";
    case RelationId::bound_eq4: return "bound_eq4";
    case RelationId::universal_eq5: return "universal_eq5";
    case RelationId::ncoup_bae_eq82: return "ncoup_bae_eq82";
    case RelationId::ncoup_bae_reduced_eq86: return "ncoup_bae_reduced_eq86";
    case RelationId::window_eq86_1: return "window_eq86_1";
    case RelationId::ncoup_transducer_eq_nl15: return "ncoup_transducer_eq_nl15";
  }
  return "?";
}

std::optional<RelationId> parse_relation(std::string_view name) {
  for (auto id : kCatalog) {
    if (relation_name(id) == name) return id;
  }
  return std::nullopt;
}

bool relation_applies(RelationId id, ModelKind kind) {
  switch (id) {
    case RelationId::ncoup_bae_eq82:
    case RelationId::ncoup_bae_reduced_eq86:
    case RelationId::window_eq86_1: return kind == ModelKind::bae;
    case RelationId::ncoup_transducer_eq_nl15: return kind == ModelKind::transducer;
    default: return true;
  }
}

double InequalityReport::input(std::string_view name) const {
  for (const auto& e : inputs) {
    if (e.name == name) return e.value;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

KCoefficients k_coefficients(const MeasurementModel& model, const GaussianState& state) {
  using enum Label;
  const double xb2 = symmetric_moment(obs(X_b), obs(X_b), state);
  const double pxb2 = symmetric_moment(obs(P_Xb), obs(P_Xb), state);
  const auto p_sum = obs(P_Xa) + obs(P_Xb);
  const double psum2 = symmetric_moment(p_sum, p_sum, state);

  KCoefficients k;
  k.k1 = 2.0 * ratio(symmetric_moment(obs(X_b), obs(P_Yb), state), xb2, "<X_b^2>");
  k.k2 = ratio(symmetric_moment(obs(P_Xb), obs(Y_a), state), pxb2, "<P_Xb^2>");
  k.k3 = symmetric_moment(obs(P_Yb), obs(P_Yb), state);
  k.k4 = ratio(symmetric_moment(p_sum, obs(Y_a), state), psum2, "<(P_Xa + P_Xb)^2>");
  k.k5 = ratio(symmetric_moment(obs(Y_a), obs(Y_a), state), psum2, "<(P_Xa + P_Xb)^2>");

  const auto& p = model.params;
  const double g = model.effective_gain();
  k.noise_expansion_valid = 1.0 + k.k1 * p.theta * g * g / (2.0 * p.hbar) > 0.0;
  k.disturbance_expansion_valid = 1.0 + k.k2 * p.eta * g / (2.0 * p.hbar) > 0.0;
  return k;
}

double WindowCheck::margin() const {
  return std::min({product - lower_edge, upper_edge - product - 2.0 * kSlackTolerance,
                   lower_edge - 2.0 * kSlackTolerance});
}

WindowCheck window_predicate(double hbar, double nc_term, double product) {
  WindowCheck w;
  w.product = product;
  w.nc_term = nc_term;
  w.upper_edge = 0.5 * hbar;
  w.lower_edge = 0.5 * hbar * (1.0 - nc_term);
  w.lower_edge_positive = w.lower_edge - 2.0 * kSlackTolerance >= -kSlackTolerance;
  w.lower_le_product = product - w.lower_edge >= -kSlackTolerance;
  w.product_lt_upper = w.upper_edge - product - 2.0 * kSlackTolerance >= -kSlackTolerance;
  if (nc_term <= 0.0) {
    w.diagnosis = "window empty: k1*theta*G^2/2hbar <= 0 puts the lower edge at or above hbar/2";
  } else if (!w.lower_edge_positive) {
    w.diagnosis = "lower edge not positive";
  } else if (!w.product_lt_upper) {
    w.diagnosis = "eps_C*chi_C is not below hbar/2";
  } else if (!w.lower_le_product) {
    w.diagnosis = "eps_C*chi_C lies below the deformed bound";
  } else {
    w.diagnosis = "inside window";
  }
  return w;
}

WindowCheck window_condition(const GaussianState& state, const MeasurementModel& model) {
  if (model.kind != ModelKind::bae) throw ModelError("the violation window is defined for BAE models");
  const auto [eps_c, chi_c] = commutative_figures(model, state, kDefaultPair);
  const auto k = k_coefficients(model, state);
  const auto& p = model.params;
  const double g = model.effective_gain();
  return window_predicate(p.hbar, k.k1 * p.theta * g * g / (2.0 * p.hbar), eps_c * chi_c);
}

NoiseExpansion bae_noise_expansion(const MeasurementModel& model, const GaussianState& state) {
  if (model.kind != ModelKind::bae) throw ModelError("noise expansion is defined for BAE models");
  const auto& p = model.params;
  const double g = model.effective_gain();
  const auto k = k_coefficients(model, state);
  const double eps_c = commutative_figures(model, state, kDefaultPair).first;
  const double term = k.k1 * p.theta * g * g / p.hbar;
  return {rms(noise_operator(model, Label::X_a), state), eps_c, eps_c * (1.0 + 0.5 * term),
          eps_c * (1.0 + 0.25 * term)};
}

InequalityReport evaluate_relation(RelationId id, const MeasurementModel& model, const GaussianState& state,
                                   ObservablePair pair) {
  require_kind(id, model);
  if (state.dim() != kModelDim) throw DimensionError("relations are evaluated on two-party states");
  const auto f = core_figures(model, state, pair);
  std::vector<DigestEntry> in = {
      {"epsilon", f.epsilon},
      {"chi", f.chi},
      {"sigma_A", f.sigma_a},
      {"sigma_B", f.sigma_b},
      {"half_commutator_AB", f.half_commutator},
      {"intervention_noise", f.s1},
      {"intervention_disturbance", f.s2},
      {"admissibility_min_eigenvalue", min_admissibility_eigenvalue(state.cov(), model.omega)},
  };

  switch (id) {
    case RelationId::heisenberg_eq0: {
      const double lhs = f.epsilon * f.chi;
      return finish(id, lhs, f.half_commutator, lhs - f.half_commutator, std::move(in));
    }
    case RelationId::ozawa_eq3: {
      const double lhs = f.epsilon * f.chi + 0.5 * std::abs(f.s1 + f.s2);
      return finish(id, lhs, f.half_commutator, lhs - f.half_commutator, std::move(in));
    }
    case RelationId::bound_eq4: {
      const double lhs = std::abs(f.s1 + f.s2);
      const double rhs = 2.0 * f.epsilon * f.sigma_b + 2.0 * f.sigma_a * f.chi;
      return finish(id, lhs, rhs, rhs - lhs, std::move(in));
    }
    case RelationId::universal_eq5: {
      const double lhs = f.epsilon * f.chi + f.epsilon * f.sigma_b + f.sigma_a * f.chi;
      return finish(id, lhs, f.half_commutator, lhs - f.half_commutator, std::move(in));
    }
    default: break;
  }

  if (pair != kDefaultPair) {
    throw ModelError("relation '" + std::string(relation_name(id)) + "' is defined for the pair (X_a, P_Xa)");
  }
  const auto& p = model.params;
  const double g = model.effective_gain();
  const double half_hbar = 0.5 * p.hbar;
  const auto [eps_c, chi_c] = commutative_figures(model, state, pair);
  const auto k = k_coefficients(model, state);
  in.push_back({"epsilon_C", eps_c});
  in.push_back({"chi_C", chi_c});

  if (id == RelationId::ncoup_transducer_eq_nl15) {
    const double rms_pyb = std::sqrt(std::max(k.k3, 0.0));
    const double eps_nc = p.theta / (2.0 * p.hbar) * rms_pyb;
    const double lhs = eps_nc * (chi_c + f.sigma_b) + f.sigma_a * chi_c * (1.0 + k.k4 * p.eta / (2.0 * p.hbar));
    in.push_back({"k3", k.k3});
    in.push_back({"k4", k.k4});
    in.push_back({"k5", k.k5});
    in.push_back({"rms_P_Yb", rms_pyb});
    in.push_back({"epsilon_expansion", eps_nc});
    in.push_back({"chi_expansion", chi_c * (1.0 + k.k4 * p.eta / (2.0 * p.hbar))});
    return finish(id, lhs, half_hbar, lhs - half_hbar, std::move(in));
  }

  const double theta_term = k.k1 * p.theta * g * g / (2.0 * p.hbar);
  const double eta_term = k.k2 * p.eta * g / (2.0 * p.hbar);
  in.push_back({"k1", k.k1});
  in.push_back({"k2", k.k2});
  in.push_back({"theta_term", theta_term});
  in.push_back({"eta_term", eta_term});
  in.push_back({"noise_expansion_valid", k.noise_expansion_valid ? 1.0 : 0.0});
  in.push_back({"disturbance_expansion_valid", k.disturbance_expansion_valid ? 1.0 : 0.0});
  in.push_back({"epsilon_expansion_linear", eps_c * (1.0 + theta_term)});
  in.push_back({"epsilon_expansion_sqrt", eps_c * (1.0 + 0.5 * theta_term)});
  in.push_back({"chi_expansion", chi_c * (1.0 + eta_term)});

  switch (id) {
    case RelationId::ncoup_bae_eq82: {
      const double lhs = eps_c * chi_c * (1.0 + theta_term + eta_term);
      return finish(id, lhs, half_hbar, lhs - half_hbar, std::move(in));
    }
    case RelationId::ncoup_bae_reduced_eq86: {
      const double lhs = eps_c * chi_c * (1.0 + theta_term);
      return finish(id, lhs, half_hbar, lhs - half_hbar, std::move(in));
    }
    case RelationId::window_eq86_1: {
      const auto w = window_predicate(p.hbar, theta_term, eps_c * chi_c);
      in.push_back({"lower_edge", w.lower_edge});
      in.push_back({"upper_edge", w.upper_edge});
      return {id, w.product, w.upper_edge, w.margin(), w.inside(), std::move(in)};
    }
    default: break;
  }
  throw ModelError("unhandled relation");
}

}  // namespace ncoup

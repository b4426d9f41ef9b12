#include "ncoup/dynamics.hpp"

#include <cmath>

#include "ncoup/error.hpp"
#include "ncoup/matrix_exp.hpp"

namespace ncoup {

namespace {

// sin(x)/x
double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0 + x * x * x * x / 120.0;
  return std::sin(x) / x;
}

// (1 - cos x)/x^2 = 2 sin^2(x/2)/x^2
double versine_ratio(double x) {
  if (std::abs(x) < 1e-3) return 0.5 - x * x / 24.0 + x * x * x * x / 720.0;
  const double h = std::sin(0.5 * x);
  return 2.0 * h * h / (x * x);
}

class MapBuilder {
 public:
  explicit MapBuilder(Provenance p) : matrix_(Eigen::MatrixXd::Identity(kModelDim, kModelDim)), provenance_(p) {}

  MapBuilder& set(Label out, Label in, double value) {
    matrix_(index_of(out), index_of(in)) = value;
    return *this;
  }
  MapBuilder& add(Label out, Label in, double value) {
    matrix_(index_of(out), index_of(in)) += value;
    return *this;
  }

  LinearMap build() const { return {matrix_, Eigen::VectorXd::Zero(kModelDim), provenance_}; }

 private:
  Eigen::MatrixXd matrix_;
  Provenance provenance_;
};

}  // namespace

QuadraticHamiltonian QuadraticHamiltonian::from_products(
    int dim, const std::vector<std::pair<std::pair<Label, Label>, double>>& terms, std::string label) {
  QuadraticHamiltonian h{Eigen::MatrixXd::Zero(dim, dim), Eigen::VectorXd::Zero(dim), std::move(label)};
  for (const auto& [pair, c] : terms) {
    const int i = index_of(pair.first), j = index_of(pair.second);
    if (i == j) throw ParameterError("from_products: squared terms are not supported");
    if (i >= dim || j >= dim) throw DimensionError("from_products: label outside basis");
    h.quad(i, j) += c;
    h.quad(j, i) += c;
  }
  return h;
}

QuadraticHamiltonian bae_hamiltonian(double alpha) {
  using enum Label;
  return QuadraticHamiltonian::from_products(kModelDim, {{{P_Xb, X_a}, alpha}, {{P_Yb, Y_a}, alpha}}, "bae");
}

QuadraticHamiltonian transducer_exchange_hamiltonian(double rate) {
  using enum Label;
  return QuadraticHamiltonian::from_products(kModelDim, {{{P_Xa, X_b}, -rate}, {{P_Ya, Y_b}, -rate}},
                                             "transducer_exchange");
}

Generator generator(const QuadraticHamiltonian& h, const CommutationMatrix& omega, const DeformationParams& params) {
  params.validate();
  const int d = omega.dim();
  if (h.quad.rows() != d || h.quad.cols() != d || h.lin.size() != d) {
    throw DimensionError("generator: Hamiltonian dimension does not match commutation matrix");
  }
  // [z, 1/2 z^T B z + c^T z] = i (omega B z + omega c)
  return {omega.omega * h.quad / params.hbar, omega.omega * h.lin / params.hbar};
}

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::exact: return "exact";
    case Provenance::closed_form: return "closed_form";
    case Provenance::first_order: return "first_order";
  }
  return "?";
}

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::exact: return "exact";
    case Mode::commutative: return "commutative";
    case Mode::first_order: return "first_order";
  }
  return "?";
}

LinearMap LinearMap::identity(int dim) {
  return {Eigen::MatrixXd::Identity(dim, dim), Eigen::VectorXd::Zero(dim), Provenance::exact};
}

LinearMap evolve_exact(const Generator& gen, double t) {
  if (!std::isfinite(t) || !gen.matrix.allFinite() || !gen.drift.allFinite()) {
    throw NumericError("evolve_exact: non-finite generator or duration");
  }
  const int d = static_cast<int>(gen.matrix.rows());
  if (gen.drift.size() != d) throw DimensionError("evolve_exact: drift size mismatch");
  // Augmented exponential carries the affine part: [[M t, f t], [0, 0]].
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(d + 1, d + 1);
  aug.topLeftCorner(d, d) = gen.matrix * t;
  aug.topRightCorner(d, 1) = gen.drift * t;
  const Eigen::MatrixXd e = expm(aug);
  return {e.topLeftCorner(d, d), e.topRightCorner(d, 1), Provenance::exact};
}

LinearMap bae_closed_form(const DeformationParams& params, double gain) {
  params.validate();
  if (params.theta * params.eta < 0.0) throw ParameterError("bae_closed_form: theta*eta must be nonnegative");
  if (!std::isfinite(gain)) throw ParameterError("bae_closed_form: gain must be finite");
  using enum Label;
  const double hbar = params.hbar, g = gain;
  const double x = g * std::sqrt(params.theta * params.eta) / hbar;
  const double c = std::cos(x), s = sinc(x), v = versine_ratio(x);
  const double pos_rot = g * params.theta / hbar * s;   // sqrt(theta/eta) sin x
  const double mom_rot = g * params.eta / hbar * s;     // sqrt(eta/theta) sin x
  const double pos_drift = g * g * params.theta / hbar * v;  // (2 hbar/eta) sin^2(x/2)
  const double mom_drift = g * g * params.eta / hbar * v;    // (2 hbar/theta) sin^2(x/2)
  return MapBuilder(Provenance::closed_form)
      .set(X_a, X_a, c).set(X_a, P_Yb, pos_rot)
      .set(Y_a, Y_a, c).set(Y_a, P_Xb, -pos_rot)
      .set(X_b, X_a, g * s).set(X_b, P_Yb, pos_drift)
      .set(Y_b, Y_a, g * s).set(Y_b, P_Xb, -pos_drift)
      .set(P_Xa, P_Xb, -g * s).set(P_Xa, Y_a, -mom_drift)
      .set(P_Ya, P_Yb, -g * s).set(P_Ya, X_a, mom_drift)
      .set(P_Xb, P_Xb, c).set(P_Xb, Y_a, mom_rot)
      .set(P_Yb, P_Yb, c).set(P_Yb, X_a, -mom_rot)
      .build();
}

LinearMap bae_first_order(const DeformationParams& params, double gain) {
  params.validate();
  using enum Label;
  const double hbar = params.hbar, g = gain, th = params.theta, et = params.eta;
  return MapBuilder(Provenance::first_order)
      .set(X_a, P_Yb, g * th / hbar)
      .set(Y_a, P_Xb, -g * th / hbar)
      .set(X_b, X_a, g).set(X_b, P_Yb, th * g * g / (2 * hbar))
      .set(Y_b, Y_a, g).set(Y_b, P_Xb, -th * g * g / (2 * hbar))
      .set(P_Xa, P_Xb, -g).set(P_Xa, Y_a, -et * g * g / (2 * hbar))
      .set(P_Ya, P_Yb, -g).set(P_Ya, X_a, et * g * g / (2 * hbar))
      .set(P_Xb, Y_a, g * et / hbar)
      .set(P_Yb, X_a, -g * et / hbar)
      .build();
}

LinearMap transducer_map(const DeformationParams& params, Mode mode) {
  params.validate();
  using enum Label;
  if (mode == Mode::exact) {
    const auto omega = commutation_matrix(params, kModelParties);
    // Stage durations enter only through alpha*T = 1, so both stages run for unit time.
    const auto stage1 = evolve_exact(generator(bae_hamiltonian(1.0), omega, params), 1.0);
    const auto stage2 = evolve_exact(generator(transducer_exchange_hamiltonian(1.0), omega, params), 1.0);
    return sequence(stage1, stage2);
  }

  MapBuilder b(mode == Mode::commutative ? Provenance::closed_form : Provenance::first_order);
  b.set(X_a, X_b, -1.0)
      .set(Y_a, Y_b, -1.0)
      .set(X_b, X_b, 0.0).set(X_b, X_a, 1.0)
      .set(Y_b, Y_b, 0.0).set(Y_b, Y_a, 1.0)
      .set(P_Xa, P_Xa, 0.0).set(P_Xa, P_Xb, -1.0)
      .set(P_Ya, P_Ya, 0.0).set(P_Ya, P_Yb, -1.0)
      .set(P_Xb, P_Xa, 1.0)
      .set(P_Yb, P_Ya, 1.0);
  if (mode == Mode::commutative) return b.build();

  const double t = params.theta / params.hbar, e = params.eta / params.hbar;
  b.add(X_a, P_Yb, t).add(X_a, P_Ya, 1.5 * t)
      .add(Y_a, P_Xb, -t).add(Y_a, P_Xa, -1.5 * t)
      .add(X_b, P_Yb, 0.5 * t)
      .add(Y_b, P_Xb, -0.5 * t)
      .add(P_Xa, Y_a, -0.5 * e)
      .add(P_Ya, X_a, 0.5 * e)
      .add(P_Xb, Y_a, e).add(P_Xb, Y_b, -1.5 * e)
      .add(P_Yb, X_a, -e).add(P_Yb, X_b, 1.5 * e);
  return b.build();
}

LinearMap sequence(const LinearMap& first, const LinearMap& second) {
  if (first.dim() != second.dim()) throw DimensionError("sequence: map dimensions differ");
  auto weaker = [](Provenance a, Provenance b) {
    if (a == Provenance::first_order || b == Provenance::first_order) return Provenance::first_order;
    if (a == Provenance::closed_form || b == Provenance::closed_form) return Provenance::closed_form;
    return Provenance::exact;
  };
  // Observable coefficients transform as E2^T E1^T w, so the combined matrix is E1 E2.
  return {first.matrix * second.matrix, first.shift + first.matrix * second.shift,
          weaker(first.provenance, second.provenance)};
}

LinearObservable transform_observable(const LinearObservable& obs, const LinearMap& map) {
  if (obs.dim() != map.dim()) throw DimensionError("transform_observable: dimension mismatch");
  return LinearObservable(map.matrix.transpose() * obs.coeffs(), obs.offset() + obs.coeffs().dot(map.shift));
}

double commutator_defect(const LinearMap& map, const CommutationMatrix& omega) {
  if (map.dim() != omega.dim()) throw DimensionError("commutator_defect: dimension mismatch");
  return (map.matrix * omega.omega * map.matrix.transpose() - omega.omega).cwiseAbs().maxCoeff();
}

}  // namespace ncoup

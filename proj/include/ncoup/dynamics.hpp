#pragma once

// Heisenberg-picture flows of quadratic Hamiltonians over the deformed algebra.
//
// A LinearMap holds E and s with z_out = E z_in + s, so row i of E expresses
// the i-th out-observable in the in-basis.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ncoup/algebra.hpp"

namespace ncoup {

/// H = 1/2 z^T B z + c^T z with B symmetric.
struct QuadraticHamiltonian {
  Eigen::MatrixXd quad;
  Eigen::VectorXd lin;
  std::string label;

  /// Sum of coefficient * z_i * z_j over pairs of distinct, mutually commuting
  /// basis elements. Throws ParameterError when i == j.
  static QuadraticHamiltonian from_products(int dim, const std::vector<std::pair<std::pair<Label, Label>, double>>& terms,
                                            std::string label);
};

/// alpha (P_Xb X_a + P_Yb Y_a): the BAE coupling, also the transducer's first stage.
QuadraticHamiltonian bae_hamiltonian(double alpha);
/// -rate (P_Xa X_b + P_Ya Y_b): the transducer's second stage.
QuadraticHamiltonian transducer_exchange_hamiltonian(double rate);

/// dz/dt = matrix * z + drift.
struct Generator {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd drift;
};

Generator generator(const QuadraticHamiltonian& h, const CommutationMatrix& omega, const DeformationParams& params);

enum class Provenance { exact, closed_form, first_order };
std::string_view provenance_name(Provenance p);

struct LinearMap {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd shift;
  Provenance provenance = Provenance::exact;

  int dim() const { return static_cast<int>(matrix.rows()); }
  static LinearMap identity(int dim);
};

/// exp(generator * t) together with the integrated drift.
LinearMap evolve_exact(const Generator& gen, double t);

/// Trigonometric solution of the BAE flow at gain G. Exact for every theta*eta >= 0;
/// the theta/eta ratios are written through entire functions so vanishing products are finite.
LinearMap bae_closed_form(const DeformationParams& params, double gain);

/// Lowest-order truncation of the BAE flow in theta and eta.
LinearMap bae_first_order(const DeformationParams& params, double gain);

enum class Mode { exact, commutative, first_order };
std::string_view mode_name(Mode mode);

/// Two-stage transducer: unit-gain BAE stage followed by the exchange stage.
/// `commutative` ignores theta and eta; `first_order` keeps terms linear in them.
LinearMap transducer_map(const DeformationParams& params, Mode mode);

/// Map whose action on observables is stage `first`, then stage `second`.
LinearMap sequence(const LinearMap& first, const LinearMap& second);

/// Out-observable expressed in the in-basis: coefficients E^T w, offset shifted by w.s.
LinearObservable transform_observable(const LinearObservable& obs, const LinearMap& map);

/// max |E omega E^T - omega|; zero for maps that preserve every commutator.
double commutator_defect(const LinearMap& map, const CommutationMatrix& omega);

}  // namespace ncoup

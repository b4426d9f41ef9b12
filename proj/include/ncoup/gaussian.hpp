#pragma once

// Gaussian states described by first and second moments.
//
// cov holds the symmetrized central moments V_ab = <{dz_a, dz_b}> with
// {A, B} = (AB + BA)/2. Realizable moments satisfy V + (i/2) omega >= 0.

#include <Eigen/Dense>

#include "ncoup/algebra.hpp"

namespace ncoup {

inline constexpr double kAdmissibilityTolerance = 1e-10;

class GaussianState {
 public:
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }
  /// Algebra the state was validated against.
  const CommutationMatrix& omega() const { return omega_; }
  int dim() const { return static_cast<int>(mean_.size()); }

  friend GaussianState make_state(Eigen::VectorXd mean, Eigen::MatrixXd cov, CommutationMatrix omega);
  friend GaussianState product_state(const GaussianState& object, const GaussianState& probe);
  friend GaussianState center_probe(const GaussianState& state);

 private:
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov, CommutationMatrix omega)
      : mean_(std::move(mean)), cov_(std::move(cov)), omega_(std::move(omega)) {}

  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  CommutationMatrix omega_;
};

/// Smallest eigenvalue of the Hermitian matrix V + (i/2) omega.
double min_admissibility_eigenvalue(const Eigen::MatrixXd& cov, const CommutationMatrix& omega);

/// Validates and builds a state. Throws DimensionError, ParameterError (asymmetric
/// cov beyond 1e-12) or AdmissibilityError carrying the most negative eigenvalue.
GaussianState make_state(Eigen::VectorXd mean, Eigen::MatrixXd cov, CommutationMatrix omega);

/// psi (x) xi: concatenated means, block-diagonal covariance, block-diagonal omega.
GaussianState product_state(const GaussianState& object, const GaussianState& probe);

/// Zeroes the probe-block means; covariance and object means are untouched.
GaussianState center_probe(const GaussianState& state);

/// hbar/2 times the identity on one party.
Eigen::MatrixXd vacuum_covariance(const DeformationParams& params);
/// (1/2) |omega| = (1/2)(omega^T omega)^{1/2} for one party: a pure state of the deformed algebra,
/// equal to the vacuum covariance when theta = eta = 0.
Eigen::MatrixXd algebra_ground_covariance(const DeformationParams& params);
/// Quadrature-squeezed vacuum: V_X = s_x hbar/2, V_PX = hbar/(2 s_x), likewise for Y.
Eigen::MatrixXd squeezed_covariance(const DeformationParams& params, double squeeze_x, double squeeze_y);

struct MomentValue {
  double re = 0.0;
  double im = 0.0;
};

double expectation(const LinearObservable& obs, const GaussianState& state);
/// <L1 L2> including the commutator part (i/2) w1^T omega w2.
MomentValue correlation(const LinearObservable& a, const LinearObservable& b, const GaussianState& state);
/// Symmetrized raw moment <{L1, L2}>.
double symmetric_moment(const LinearObservable& a, const LinearObservable& b, const GaussianState& state);
/// <L^2>^{1/2}
double rms(const LinearObservable& obs, const GaussianState& state);
/// <(L - <L>)^2>^{1/2}
double stddev(const LinearObservable& obs, const GaussianState& state);

}  // namespace ncoup

#include "ncoup/gaussian.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "ncoup/error.hpp"

namespace ncoup {

namespace {

void require_dim(const LinearObservable& obs, const GaussianState& state) {
  if (obs.dim() != state.dim()) {
    throw DimensionError("observable dimension " + std::to_string(obs.dim()) + " does not match state dimension " +
                         std::to_string(state.dim()));
  }
}

// sqrt of a quadratic form, tolerating rounding just below zero.
double checked_sqrt(double radicand, const char* what) {
  if (radicand < -1e-12) {
    throw NumericError(std::string(what) + ": negative second moment " + std::to_string(radicand) +
                       " (inadmissible covariance)");
  }
  return std::sqrt(std::max(radicand, 0.0));
}

}  // namespace

double min_admissibility_eigenvalue(const Eigen::MatrixXd& cov, const CommutationMatrix& omega) {
  if (cov.rows() != omega.dim() || cov.cols() != omega.dim()) {
    throw DimensionError("admissibility: covariance and commutation matrix differ in size");
  }
  const Eigen::MatrixXcd h = cov.cast<std::complex<double>>() + std::complex<double>(0.0, 0.5) * omega.omega;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

GaussianState make_state(Eigen::VectorXd mean, Eigen::MatrixXd cov, CommutationMatrix omega) {
  const int d = omega.dim();
  if (mean.size() != d || cov.rows() != d || cov.cols() != d) {
    throw DimensionError("make_state: mean/cov dimensions do not match the algebra (" + std::to_string(d) + ")");
  }
  if (!mean.allFinite() || !cov.allFinite()) throw ParameterError("make_state: non-finite moments");
  const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    throw ParameterError("make_state: covariance not symmetric (max |V - V^T| = " + std::to_string(asym) + ")");
  }
  cov = 0.5 * (cov + cov.transpose());
  const double lambda = min_admissibility_eigenvalue(cov, omega);
  if (lambda < -kAdmissibilityTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "covariance violates Robertson-Schrodinger admissibility: min eigenvalue of V + (i/2)omega is " << lambda;
    throw AdmissibilityError(msg.str(), lambda);
  }
  return GaussianState(std::move(mean), std::move(cov), std::move(omega));
}

GaussianState product_state(const GaussianState& object, const GaussianState& probe) {
  if (object.dim() != kPartyDim || probe.dim() != kPartyDim) {
    throw DimensionError("product_state: both parties must be 4-dimensional");
  }
  const int d = kModelDim;
  Eigen::VectorXd mean(d);
  mean << object.mean(), probe.mean();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  cov.topLeftCorner(kPartyDim, kPartyDim) = object.cov();
  cov.bottomRightCorner(kPartyDim, kPartyDim) = probe.cov();
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(d, d);
  omega.topLeftCorner(kPartyDim, kPartyDim) = object.omega().omega;
  omega.bottomRightCorner(kPartyDim, kPartyDim) = probe.omega().omega;
  return GaussianState(std::move(mean), std::move(cov), CommutationMatrix{std::move(omega)});
}

GaussianState center_probe(const GaussianState& state) {
  Eigen::VectorXd mean = state.mean();
  mean.tail(state.dim() - kPartyDim).setZero();
  return GaussianState(std::move(mean), state.cov(), state.omega());
}

Eigen::MatrixXd vacuum_covariance(const DeformationParams& params) {
  params.validate();
  return 0.5 * params.hbar * Eigen::MatrixXd::Identity(kPartyDim, kPartyDim);
}

Eigen::MatrixXd algebra_ground_covariance(const DeformationParams& params) {
  const auto omega = commutation_matrix(params, 1).omega;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(omega.transpose() * omega);
  Eigen::MatrixXd v = 0.5 * solver.operatorSqrt();
  return 0.5 * (v + v.transpose());
}

Eigen::MatrixXd squeezed_covariance(const DeformationParams& params, double squeeze_x, double squeeze_y) {
  params.validate();
  if (!(squeeze_x > 0.0) || !(squeeze_y > 0.0)) throw ParameterError("squeeze factors must be positive");
  const double h = 0.5 * params.hbar;
  Eigen::VectorXd diag(kPartyDim);
  diag << h * squeeze_x, h * squeeze_y, h / squeeze_x, h / squeeze_y;
  return diag.asDiagonal();
}

double expectation(const LinearObservable& obs, const GaussianState& state) {
  require_dim(obs, state);
  return obs.coeffs().dot(state.mean()) + obs.offset();
}

MomentValue correlation(const LinearObservable& a, const LinearObservable& b, const GaussianState& state) {
  require_dim(a, state);
  require_dim(b, state);
  const double ma = a.coeffs().dot(state.mean()), mb = b.coeffs().dot(state.mean());
  const double re = a.coeffs().dot(state.cov() * b.coeffs()) + ma * mb + a.offset() * mb + b.offset() * ma +
                    a.offset() * b.offset();
  const double im = 0.5 * a.coeffs().dot(state.omega().omega * b.coeffs());
  return {re, im};
}

double symmetric_moment(const LinearObservable& a, const LinearObservable& b, const GaussianState& state) {
  return correlation(a, b, state).re;
}

double rms(const LinearObservable& obs, const GaussianState& state) {
  require_dim(obs, state);
  const double m = expectation(obs, state);
  return checked_sqrt(obs.coeffs().dot(state.cov() * obs.coeffs()) + m * m, "rms");
}

double stddev(const LinearObservable& obs, const GaussianState& state) {
  require_dim(obs, state);
  return checked_sqrt(obs.coeffs().dot(state.cov() * obs.coeffs()), "stddev");
}

}  // namespace ncoup

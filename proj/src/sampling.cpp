#include "ncoup/sampling.hpp"

#include "ncoup/matrix_exp.hpp"

namespace ncoup {

GaussianState sample_party_state(const DeformationParams& params, std::mt19937_64& rng,
                                 const PartySamplingOptions& options) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto omega = commutation_matrix(params, 1);

  Eigen::MatrixXd k(kPartyDim, kPartyDim);
  for (int i = 0; i < kPartyDim; ++i) {
    for (int j = 0; j <= i; ++j) k(i, j) = k(j, i) = options.flow_scale * normal(rng);
  }
  // exp(omega K / hbar) preserves omega for symmetric K.
  const Eigen::MatrixXd flow = expm(omega.omega * k / params.hbar);
  Eigen::MatrixXd cov = flow * algebra_ground_covariance(params) * flow.transpose();

  if (unit(rng) >= options.pure_fraction) {
    Eigen::MatrixXd r(kPartyDim, kPartyDim);
    for (int i = 0; i < kPartyDim; ++i) {
      for (int j = 0; j < kPartyDim; ++j) r(i, j) = options.thermal_scale * normal(rng);
    }
    cov += r * r.transpose();
  }
  cov = 0.5 * (cov + cov.transpose());

  Eigen::VectorXd mean(kPartyDim);
  for (int i = 0; i < kPartyDim; ++i) mean(i) = options.mean_scale * normal(rng);
  return make_state(std::move(mean), std::move(cov), omega);
}

GaussianState sample_product_state(const DeformationParams& params, std::mt19937_64& rng,
                                   const PartySamplingOptions& options) {
  auto object = sample_party_state(params, rng, options);
  auto probe = sample_party_state(params, rng, options);
  return product_state(object, probe);
}

}  // namespace ncoup

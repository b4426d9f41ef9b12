#pragma once

#include <random>

#include "ncoup/gaussian.hpp"

namespace ncoup {

struct PartySamplingOptions {
  double flow_scale = 0.5;    // spread of the random quadratic generator
  double thermal_scale = 0.3; // spread of the added positive semidefinite noise
  double mean_scale = 1.0;
  double pure_fraction = 0.3; // fraction of samples with no added noise
};

/// Random admissible one-party state: an omega-preserving flow applied to the
/// algebra ground state, plus optional PSD noise and a random mean.
GaussianState sample_party_state(const DeformationParams& params, std::mt19937_64& rng,
                                 const PartySamplingOptions& options = {});

/// Product of two independent party samples.
GaussianState sample_product_state(const DeformationParams& params, std::mt19937_64& rng,
                                   const PartySamplingOptions& options = {});

}  // namespace ncoup

#pragma once

#include <Eigen/Dense>

namespace ncoup {

/// Dense matrix exponential by scaling and squaring with a diagonal Pade core
/// (degrees 3, 5, 7, 9, 13 chosen from the 1-norm). Throws NumericError on
/// non-finite input.
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);

}  // namespace ncoup

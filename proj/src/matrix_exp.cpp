#include "ncoup/matrix_exp.hpp"

#include <array>
#include <cmath>

#include "ncoup/error.hpp"

namespace ncoup {

namespace {

// Largest 1-norm for which the degree-m Pade approximant reaches double
// precision backward error.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

double one_norm(const Eigen::MatrixXd& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

Eigen::MatrixXd solve_pade(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
  return (v - u).partialPivLu().solve(v + u);
}

template <std::size_t N>
Eigen::MatrixXd pade_low(const Eigen::MatrixXd& a, const std::array<double, N>& b) {
  const auto n = a.rows();
  const Eigen::MatrixXd a2 = a * a;
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd u_inner = b[1] * power;
  Eigen::MatrixXd v = b[0] * power;
  for (std::size_t k = 2; k < N; k += 2) {
    power = power * a2;
    v += b[k] * power;
    u_inner += b[k + 1] * power;
  }
  return solve_pade(a * u_inner, v);
}

Eigen::MatrixXd pade13(const Eigen::MatrixXd& a) {
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  const auto n = a.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;
  const Eigen::MatrixXd u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const Eigen::MatrixXd v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  return solve_pade(u, v);
}

}  // namespace

Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw DimensionError("expm: matrix must be square");
  if (!a.allFinite()) throw NumericError("expm: non-finite matrix entries");
  const auto n = a.rows();
  if (n == 0) return a;

  const double norm = one_norm(a);
  if (norm == 0.0) return Eigen::MatrixXd::Identity(n, n);
  if (norm <= kTheta3) return pade_low(a, std::array<double, 4>{120.0, 60.0, 12.0, 1.0});
  if (norm <= kTheta5) {
    return pade_low(a, std::array<double, 6>{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0});
  }
  if (norm <= kTheta7) {
    return pade_low(a, std::array<double, 8>{17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0,
                                             1512.0, 56.0, 1.0});
  }
  if (norm <= kTheta9) {
    return pade_low(a, std::array<double, 10>{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                              30270240.0, 2162160.0, 110880.0, 3960.0, 90.0, 1.0});
  }

  const int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
  Eigen::MatrixXd result = pade13(a / std::ldexp(1.0, squarings));
  for (int i = 0; i < squarings; ++i) result = result * result;
  if (!result.allFinite()) throw NumericError("expm: overflow during squaring");
  return result;
}

}  // namespace ncoup

#include <doctest.h>

#include <cmath>
#include <random>

#include "ncoup/error.hpp"
#include "ncoup/gaussian.hpp"
#include "ncoup/sampling.hpp"
#include "oracles.hpp"

using namespace ncoup;

namespace {

GaussianState party(const Eigen::MatrixXd& cov, const DeformationParams& p,
                    Eigen::VectorXd mean = Eigen::VectorXd::Zero(4)) {
  return make_state(std::move(mean), cov, commutation_matrix(p, 1));
}

}  // namespace

TEST_SUITE("gaussian") {

TEST_CASE("vacuum is admissible and saturates in the commutative algebra") {
  const DeformationParams p{1, 0, 0};
  const auto w = commutation_matrix(p, 1);
  CHECK(std::abs(min_admissibility_eigenvalue(vacuum_covariance(p), w)) <= 1e-15);
  CHECK_NOTHROW(party(vacuum_covariance(p), p));
}

TEST_CASE("zero covariance is rejected with eigenvalue -hbar/2") {
  for (double hbar : {1.0, 0.5}) {
    const DeformationParams p{hbar, 0, 0};
    try {
      party(Eigen::MatrixXd::Zero(4, 4), p);
      FAIL("expected AdmissibilityError");
    } catch (const AdmissibilityError& e) {
      CHECK(e.min_eigenvalue() == doctest::Approx(-hbar / 2).epsilon(1e-14));
    }
  }
}

TEST_CASE("admissibility eigenvalue matches the real-embedding oracle") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const DeformationParams p{1.0, std::abs(n(rng)) * 0.5, std::abs(n(rng)) * 0.5};
    const auto w = commutation_matrix(p, 1);
    Eigen::MatrixXd a(4, 4);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) a(r, c) = n(rng);
    }
    const Eigen::MatrixXd v = a * a.transpose() * 0.3;
    CHECK(min_admissibility_eigenvalue(v, w) == doctest::Approx(oracle::min_eig(v, w.omega)).epsilon(1e-12).scale(1));
  }
}

TEST_CASE("vacuum is not admissible once theta or eta is nonzero") {
  const DeformationParams p{1, 0.2, 0.1};
  const auto w = commutation_matrix(p, 1);
  const double lam = min_admissibility_eigenvalue(vacuum_covariance(p), w);
  CHECK(lam < 0);
  CHECK(lam == doctest::Approx(oracle::min_eig(vacuum_covariance(p), w.omega)).epsilon(1e-13));
  CHECK_THROWS_AS(party(vacuum_covariance(p), p), AdmissibilityError);
}

TEST_CASE("algebra ground state is pure and reduces to the vacuum") {
  for (const DeformationParams p : {DeformationParams{1, 0, 0}, {1, 0.2, 0.1}, {0.5, 0.01, 0.3}}) {
    const auto v = algebra_ground_covariance(p);
    const auto w = commutation_matrix(p, 1);
    CHECK(std::abs(min_admissibility_eigenvalue(v, w)) <= 1e-13);
    // Purity: (2 omega^{-1} V)^2 = -1.
    const Eigen::MatrixXd j = 2.0 * w.omega.inverse() * v;
    CHECK(oracle::max_abs(j * j + Eigen::MatrixXd::Identity(4, 4)) <= 1e-12);
  }
  CHECK(oracle::max_abs(algebra_ground_covariance({2, 0, 0}) - vacuum_covariance({2, 0, 0})) <= 1e-15);
}

TEST_CASE("squeezed covariance") {
  const auto v = squeezed_covariance({1, 0, 0}, 2.0, 0.5);
  CHECK(v(0, 0) == 1.0);
  CHECK(v(2, 2) == 0.25);
  CHECK(v(1, 1) == 0.25);
  CHECK(v(3, 3) == 1.0);
  CHECK_THROWS(squeezed_covariance({1, 0, 0}, 0.0, 1.0));
}

TEST_CASE("asymmetric or mis-sized inputs are rejected") {
  const DeformationParams p{1, 0, 0};
  Eigen::MatrixXd v = vacuum_covariance(p);
  v(0, 1) = 1e-6;
  CHECK_THROWS_AS(party(v, p), ParameterError);
  CHECK_THROWS_AS(party(Eigen::MatrixXd::Identity(3, 3), p), DimensionError);
  CHECK_THROWS_AS(party(vacuum_covariance(p), p, Eigen::VectorXd::Zero(3)), DimensionError);
}

TEST_CASE("product state factorizes and center_probe zeroes probe means") {
  const DeformationParams p{1, 0, 0};
  Eigen::VectorXd m1(4), m2(4);
  m1 << 1, 2, 3, 4;
  m2 << 5, 6, 7, 8;
  const auto s = product_state(party(vacuum_covariance(p), p, m1), party(squeezed_covariance(p, 2, 3), p, m2));
  CHECK(s.dim() == 8);
  CHECK(s.cov().topRightCorner(4, 4).isZero(0.0));
  CHECK(s.cov().bottomRightCorner(4, 4) == squeezed_covariance(p, 2, 3));
  CHECK(s.mean().tail(4) == m2);
  CHECK(s.omega().omega == commutation_matrix(p, 2).omega);
  const auto c = center_probe(s);
  CHECK(c.mean().head(4) == m1);
  CHECK(c.mean().tail(4).isZero(0.0));
  CHECK(c.cov() == s.cov());
}

TEST_CASE("moments of linear observables") {
  const DeformationParams p{1, 0.2, 0.1};
  const auto g = party(algebra_ground_covariance(p), p);
  const auto s = product_state(g, g);
  const auto x = basis_observable(Label::X_b), y = basis_observable(Label::Y_b);
  const auto c = correlation(x, y, s);
  CHECK(c.im == doctest::Approx(0.1).epsilon(1e-15));  // theta/2
  CHECK(c.re == doctest::Approx(s.cov()(4, 5)).epsilon(1e-15));
  CHECK(symmetric_moment(x, x, s) == doctest::Approx(s.cov()(4, 4)));
  const auto xp = basis_observable(Label::X_a) + 2.0;
  CHECK(expectation(xp, s) == 2.0);
  CHECK(stddev(xp, s) == doctest::Approx(std::sqrt(s.cov()(0, 0))));
  CHECK(rms(xp, s) == doctest::Approx(std::sqrt(s.cov()(0, 0) + 4.0)));
}

TEST_CASE("rms of X_b / G in the vacuum") {
  const DeformationParams p{1, 0, 0};
  const auto v = party(vacuum_covariance(p), p);
  const auto s = product_state(v, v);
  CHECK(rms(basis_observable(Label::X_b) * (1.0 / 0.5), s) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("sampled states are admissible and obey Robertson for every pair") {
  std::mt19937_64 rng(99);
  for (const DeformationParams p : {DeformationParams{1, 0, 0}, {1, 0.05, 0.1}, {0.5, 0.2, 0.0}}) {
    const auto w = commutation_matrix(p, 2);
    for (int i = 0; i < 50; ++i) {
      const auto s = sample_product_state(p, rng);
      CHECK(min_admissibility_eigenvalue(s.cov(), w) >= -1e-10);
      for (int a = 0; a < 8; ++a) {
        for (int b = a + 1; b < 8; ++b) {
          const auto la = basis_observable(static_cast<Label>(a)), lb = basis_observable(static_cast<Label>(b));
          CHECK(stddev(la, s) * stddev(lb, s) >= 0.5 * std::abs(commutator(la, lb, w)) - 1e-10);
        }
      }
    }
  }
}

}  // TEST_SUITE

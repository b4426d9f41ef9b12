#pragma once

// Reference values written out independently of the library: out-relation
// tables typed term by term, equations of motion as explicit rows, Eigen's
// own matrix exponential and a real-embedding eigenvalue check.

#include <cmath>
#include <initializer_list>
#include <utility>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

// Basis indices.
enum : int { Xa = 0, Ya, PXa, PYa, Xb, Yb, PXb, PYb };

struct Term {
  int in;
  double c;
};

/// Rows of z_out = E z_in, one initializer list per out-observable in basis order.
inline Eigen::MatrixXd table(std::initializer_list<std::initializer_list<Term>> rows) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(8, 8);
  int r = 0;
  for (const auto& row : rows) {
    for (const auto& t : row) e(r, t.in) += t.c;
    ++r;
  }
  return e;
}

inline Eigen::MatrixXd omega(double hbar, double theta, double eta) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(8, 8);
  for (int p = 0; p < 8; p += 4) {
    w(p + 0, p + 1) = theta;
    w(p + 0, p + 2) = hbar;
    w(p + 1, p + 3) = hbar;
    w(p + 2, p + 3) = eta;
  }
  return w - w.transpose().eval();
}

inline Eigen::MatrixXd bae_commutative(double g) {
  return table({{{Xa, 1}},
                {{Ya, 1}},
                {{PXa, 1}, {PXb, -g}},
                {{PYa, 1}, {PYb, -g}},
                {{Xb, 1}, {Xa, g}},
                {{Yb, 1}, {Ya, g}},
                {{PXb, 1}},
                {{PYb, 1}}});
}

/// Trigonometric solution with theta, eta > 0, written with sqrt(theta/eta) ratios.
inline Eigen::MatrixXd bae_trig(double hbar, double theta, double eta, double g) {
  const double r = std::sqrt(theta * eta);
  const double x = g * r / hbar;
  const double c = std::cos(x), s = std::sin(x), s2 = std::pow(std::sin(x / 2), 2);
  const double te = std::sqrt(theta / eta), et = std::sqrt(eta / theta);
  return table({{{Xa, c}, {PYb, te * s}},
                {{Ya, c}, {PXb, -te * s}},
                {{PXa, 1}, {PXb, -hbar / r * s}, {Ya, -2 * hbar / theta * s2}},
                {{PYa, 1}, {PYb, -hbar / r * s}, {Xa, 2 * hbar / theta * s2}},
                {{Xb, 1}, {Xa, hbar / r * s}, {PYb, 2 * hbar / eta * s2}},
                {{Yb, 1}, {Ya, hbar / r * s}, {PXb, -2 * hbar / eta * s2}},
                {{PXb, c}, {Ya, et * s}},
                {{PYb, c}, {Xa, -et * s}}});
}

inline Eigen::MatrixXd bae_first_order(double hbar, double theta, double eta, double g) {
  return table({{{Xa, 1}, {PYb, g * theta / hbar}},
                {{Ya, 1}, {PXb, -g * theta / hbar}},
                {{PXa, 1}, {PXb, -g}, {Ya, -eta * g * g / (2 * hbar)}},
                {{PYa, 1}, {PYb, -g}, {Xa, eta * g * g / (2 * hbar)}},
                {{Xb, 1}, {Xa, g}, {PYb, theta * g * g / (2 * hbar)}},
                {{Yb, 1}, {Ya, g}, {PXb, -theta * g * g / (2 * hbar)}},
                {{PXb, 1}, {Ya, g * eta / hbar}},
                {{PYb, 1}, {Xa, -g * eta / hbar}}});
}

/// Equations of motion of alpha (P_Xb X_a + P_Yb Y_a).
inline Eigen::MatrixXd bae_eom(double hbar, double theta, double eta, double alpha) {
  return table({{{PYb, alpha * theta / hbar}},
                {{PXb, -alpha * theta / hbar}},
                {{PXb, -alpha}},
                {{PYb, -alpha}},
                {{Xa, alpha}},
                {{Ya, alpha}},
                {{Ya, alpha * eta / hbar}},
                {{Xa, -alpha * eta / hbar}}});
}

/// Equations of motion of -(P_Xa X_b + P_Ya Y_b).
inline Eigen::MatrixXd exchange_eom(double hbar, double theta, double eta) {
  return table({{{Xb, -1}},
                {{Yb, -1}},
                {{Yb, -eta / hbar}},
                {{Xb, eta / hbar}},
                {{PYa, -theta / hbar}},
                {{PXa, theta / hbar}},
                {{PXa, 1}},
                {{PYa, 1}}});
}

inline Eigen::MatrixXd transducer_commutative() {
  return table({{{Xa, 1}, {Xb, -1}},
                {{Ya, 1}, {Yb, -1}},
                {{PXb, -1}},
                {{PYb, -1}},
                {{Xa, 1}},
                {{Ya, 1}},
                {{PXb, 1}, {PXa, 1}},
                {{PYb, 1}, {PYa, 1}}});
}

inline Eigen::MatrixXd transducer_first_order(double hbar, double theta, double eta) {
  const double t = theta / hbar, e = eta / hbar;
  return table({{{Xa, 1}, {Xb, -1}, {PYb, t}, {PYa, 1.5 * t}},
                {{Ya, 1}, {Yb, -1}, {PXb, -t}, {PXa, -1.5 * t}},
                {{PXb, -1}, {Ya, -e / 2}},
                {{PYb, -1}, {Xa, e / 2}},
                {{Xa, 1}, {PYb, t / 2}},
                {{Ya, 1}, {PXb, -t / 2}},
                {{PXb, 1}, {PXa, 1}, {Ya, e}, {Yb, -1.5 * e}},
                {{PYb, 1}, {PYa, 1}, {Xa, -e}, {Xb, 1.5 * e}}});
}

inline Eigen::MatrixXd expm(const Eigen::MatrixXd& a) { return a.exp(); }

/// Exact transducer: unit BAE stage then unit exchange stage, E = exp(A1) exp(A2).
inline Eigen::MatrixXd transducer_exact(double hbar, double theta, double eta) {
  return expm(bae_eom(hbar, theta, eta, 1.0)) * expm(exchange_eom(hbar, theta, eta));
}

/// min eigenvalue of V + (i/2) W through the real symmetric embedding [[V, -W/2], [W/2, V]].
inline double min_eig(const Eigen::MatrixXd& v, const Eigen::MatrixXd& w) {
  const auto n = v.rows();
  Eigen::MatrixXd big(2 * n, 2 * n);
  big << v, -0.5 * w, 0.5 * w, v;
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(big, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

/// <(w.z)^2> with raw second moments V + mu mu^T.
inline double raw_moment(const Eigen::VectorXd& w, const Eigen::MatrixXd& v, const Eigen::VectorXd& mu) {
  return w.dot(v * w) + std::pow(w.dot(mu), 2);
}

inline Eigen::VectorXd unit(int i) { return Eigen::VectorXd::Unit(8, i); }

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle

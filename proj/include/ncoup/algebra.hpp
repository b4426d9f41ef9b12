#pragma once

// Deformed Heisenberg-Weyl algebra: canonical basis, commutation matrix and
// linear observables over that basis.
//
// Per party the basis block is (X, Y, P_X, P_Y) with
//   [X, Y] = i theta, [P_X, P_Y] = i eta, [X, P_X] = [Y, P_Y] = i hbar
// and every cross-party commutator zero.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ncoup {

struct DeformationParams {
  double hbar = 1.0;
  double theta = 0.0;
  double eta = 0.0;

  /// Throws ParameterError unless hbar > 0, theta >= 0, eta >= 0 and all finite.
  void validate() const;

  bool is_commutative() const { return theta == 0.0 && eta == 0.0; }

  /// Same hbar with theta = eta = 0.
  DeformationParams commutative_limit() const { return {hbar, 0.0, 0.0}; }

  friend bool operator==(const DeformationParams&, const DeformationParams&) = default;
};

inline constexpr int kPartyDim = 4;
inline constexpr int kModelParties = 2;
inline constexpr int kModelDim = kPartyDim * kModelParties;

/// Fixed basis order of the two-party models; the object block precedes the probe block.
enum class Label : int { X_a = 0, Y_a, P_Xa, P_Ya, X_b, Y_b, P_Xb, P_Yb };

inline constexpr int index_of(Label label) { return static_cast<int>(label); }
inline constexpr bool is_object(Label label) { return index_of(label) < kPartyDim; }

std::string_view label_name(Label label);
std::optional<Label> parse_label(std::string_view name);
/// Like parse_label but throws LabelError on unknown names.
Label require_label(std::string_view name);

class CanonicalBasis {
 public:
  /// Labels for `parties` parties named a, b, c, ...; requires 1 <= parties <= 26.
  static CanonicalBasis for_parties(int parties);

  int dim() const { return static_cast<int>(labels_.size()); }
  int parties() const { return dim() / kPartyDim; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Throws LabelError for names outside the basis.
  int index_of(std::string_view name) const;

 private:
  std::vector<std::string> labels_;
};

struct CommutationMatrix {
  /// [z_alpha, z_beta] = i * omega(alpha, beta)
  Eigen::MatrixXd omega;

  int dim() const { return static_cast<int>(omega.rows()); }
};

CommutationMatrix commutation_matrix(const DeformationParams& params, int parties);

/// Real coefficient vector over the canonical basis plus a scalar multiple of the identity.
class LinearObservable {
 public:
  LinearObservable() = default;
  explicit LinearObservable(Eigen::VectorXd coeffs, double offset = 0.0);

  static LinearObservable zero(int dim) { return LinearObservable(Eigen::VectorXd::Zero(dim)); }

  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  double offset() const { return offset_; }
  int dim() const { return static_cast<int>(coeffs_.size()); }
  double coeff(Label label) const { return coeffs_(index_of(label)); }

  LinearObservable& operator+=(const LinearObservable& other);
  LinearObservable& operator-=(const LinearObservable& other);
  LinearObservable& operator*=(double scale);

  friend LinearObservable operator+(LinearObservable a, const LinearObservable& b) { return a += b; }
  friend LinearObservable operator-(LinearObservable a, const LinearObservable& b) { return a -= b; }
  friend LinearObservable operator*(LinearObservable a, double s) { return a *= s; }
  friend LinearObservable operator*(double s, LinearObservable a) { return a *= s; }
  friend LinearObservable operator-(LinearObservable a) { return a *= -1.0; }
  friend LinearObservable operator+(LinearObservable a, double c) {
    a.offset_ += c;
    return a;
  }

  friend bool operator==(const LinearObservable& a, const LinearObservable& b) {
    return a.offset_ == b.offset_ && a.coeffs_.size() == b.coeffs_.size() && a.coeffs_ == b.coeffs_;
  }

 private:
  Eigen::VectorXd coeffs_;
  double offset_ = 0.0;
};

LinearObservable basis_observable(Label label);
/// Unit observable on the named axis of a `parties`-party basis; throws LabelError.
LinearObservable basis_observable(std::string_view label, int parties = kModelParties);

/// Returns s with [a, b] = i s. Offsets do not contribute.
double commutator(const LinearObservable& a, const LinearObservable& b, const CommutationMatrix& omega);

/// "0.5*X_b - 2*P_Yb + 1" style rendering over the two-party basis.
std::string describe(const LinearObservable& obs);

}  // namespace ncoup

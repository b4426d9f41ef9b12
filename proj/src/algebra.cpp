#include "ncoup/algebra.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include "ncoup/error.hpp"

namespace ncoup {

namespace {

constexpr std::array<std::string_view, kModelDim> kLabelNames = {
    "X_a", "Y_a", "P_Xa", "P_Ya", "X_b", "Y_b", "P_Xb", "P_Yb"};

void require_dim(int expected, int got, const char* what) {
  if (expected != got) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(got) +
                         " does not match " + std::to_string(expected));
  }
}

}  // namespace

void DeformationParams::validate() const {
  if (!std::isfinite(hbar) || !std::isfinite(theta) || !std::isfinite(eta)) {
    throw ParameterError("deformation parameters must be finite");
  }
  if (hbar <= 0.0) throw ParameterError("hbar must be strictly positive, got " + std::to_string(hbar));
  if (theta < 0.0) throw ParameterError("theta must be nonnegative, got " + std::to_string(theta));
  if (eta < 0.0) throw ParameterError("eta must be nonnegative, got " + std::to_string(eta));
}

std::string_view label_name(Label label) { return kLabelNames[static_cast<std::size_t>(index_of(label))]; }

std::optional<Label> parse_label(std::string_view name) {
  for (std::size_t i = 0; i < kLabelNames.size(); ++i) {
    if (kLabelNames[i] == name) return static_cast<Label>(i);
  }
  return std::nullopt;
}

Label require_label(std::string_view name) {
  if (auto label = parse_label(name)) return *label;
  throw LabelError("unknown basis label '" + std::string(name) + "'");
}

CanonicalBasis CanonicalBasis::for_parties(int parties) {
  if (parties < 1 || parties > 26) {
    throw ParameterError("party count must lie in [1, 26], got " + std::to_string(parties));
  }
  CanonicalBasis basis;
  for (int p = 0; p < parties; ++p) {
    const std::string s(1, static_cast<char>('a' + p));
    basis.labels_.push_back("X_" + s);
    basis.labels_.push_back("Y_" + s);
    basis.labels_.push_back("P_X" + s);
    basis.labels_.push_back("P_Y" + s);
  }
  return basis;
}

int CanonicalBasis::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == name) return static_cast<int>(i);
  }
  throw LabelError("unknown basis label '" + std::string(name) + "'");
}

CommutationMatrix commutation_matrix(const DeformationParams& params, int parties) {
  params.validate();
  if (parties < 1) throw ParameterError("party count must be >= 1");
  const int d = kPartyDim * parties;
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(d, d);
  for (int p = 0; p < parties; ++p) {
    const int x = kPartyDim * p, y = x + 1, px = x + 2, py = x + 3;
    auto set = [&](int i, int j, double v) {
      omega(i, j) = v;
      omega(j, i) = -v;
    };
    set(x, y, params.theta);
    set(x, px, params.hbar);
    set(y, py, params.hbar);
    set(px, py, params.eta);
  }
  return {std::move(omega)};
}

LinearObservable::LinearObservable(Eigen::VectorXd coeffs, double offset)
    : coeffs_(std::move(coeffs)), offset_(offset) {
  if (!coeffs_.allFinite() || !std::isfinite(offset_)) {
    throw NumericError("linear observable has non-finite entries");
  }
}

LinearObservable& LinearObservable::operator+=(const LinearObservable& other) {
  require_dim(dim(), other.dim(), "observable sum");
  coeffs_ += other.coeffs_;
  offset_ += other.offset_;
  return *this;
}

LinearObservable& LinearObservable::operator-=(const LinearObservable& other) {
  require_dim(dim(), other.dim(), "observable difference");
  coeffs_ -= other.coeffs_;
  offset_ -= other.offset_;
  return *this;
}

LinearObservable& LinearObservable::operator*=(double scale) {
  coeffs_ *= scale;
  offset_ *= scale;
  return *this;
}

LinearObservable basis_observable(Label label) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(kModelDim);
  e(index_of(label)) = 1.0;
  return LinearObservable(std::move(e));
}

LinearObservable basis_observable(std::string_view label, int parties) {
  const auto basis = CanonicalBasis::for_parties(parties);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(basis.dim());
  e(basis.index_of(label)) = 1.0;
  return LinearObservable(std::move(e));
}

double commutator(const LinearObservable& a, const LinearObservable& b, const CommutationMatrix& omega) {
  require_dim(omega.dim(), a.dim(), "commutator lhs");
  require_dim(omega.dim(), b.dim(), "commutator rhs");
  return a.coeffs().dot(omega.omega * b.coeffs());
}

std::string describe(const LinearObservable& obs) {
  const auto basis = CanonicalBasis::for_parties(std::max(1, obs.dim() / kPartyDim));
  std::string out;
  char buf[64];
  for (int i = 0; i < obs.dim(); ++i) {
    const double c = obs.coeffs()(i);
    if (c == 0.0) continue;
    std::snprintf(buf, sizeof buf, "%s%.17g*", out.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "),
                  std::abs(c));
    out += buf;
    out += basis.labels()[static_cast<std::size_t>(i)];
  }
  if (obs.offset() != 0.0 || out.empty()) {
    const double c = obs.offset();
    std::snprintf(buf, sizeof buf, "%s%.17g", out.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "),
                  std::abs(c));
    out += buf;
  }
  return out;
}

}  // namespace ncoup

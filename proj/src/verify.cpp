#include "ncoup/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>

#include "ncoup/dynamics.hpp"
#include "ncoup/error.hpp"
#include "ncoup/gaussian.hpp"
#include "ncoup/inequalities.hpp"
#include "ncoup/matrix_exp.hpp"
#include "ncoup/measurement.hpp"
#include "ncoup/sampling.hpp"

namespace ncoup {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

double max_dev(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

VerifyCheck closed_form_grid() {
  double worst_map = 0.0, worst_defect = 0.0;
  for (double hbar : {0.5, 1.0}) {
    for (double theta : {1e-3, 1e-2, 1e-1}) {
      for (double eta : {1e-3, 1e-2, 1e-1}) {
        for (double g : {0.01, 0.1, 1.0}) {
          const DeformationParams p{hbar, theta, eta};
          const auto omega = commutation_matrix(p, kModelParties);
          const auto exact = evolve_exact(generator(bae_hamiltonian(1.0), omega, p), g);
          const auto closed = bae_closed_form(p, g);
          worst_map = std::max(worst_map, max_dev(exact.matrix, closed.matrix));
          worst_defect = std::max({worst_defect, commutator_defect(exact, omega), commutator_defect(closed, omega)});
        }
      }
    }
  }
  return {"bae closed form vs exponential", worst_map <= 1e-10 && worst_defect <= 1e-12,
          fmt("max entry deviation %.3g, max commutator defect %.3g", worst_map, worst_defect)};
}

VerifyCheck convergence(const char* name, const std::function<double(const DeformationParams&)>& deviation) {
  const double d1 = deviation({1.0, 0.02, 0.02});
  const double d2 = deviation({1.0, 0.01, 0.01});
  const double ratio = d1 / d2;
  return {name, ratio >= 3.0 && ratio <= 5.0, fmt("deviation ratio under halving %.4f (expected in [3, 5]), %.3g", ratio, d2)};
}

VerifyCheck expm_series() {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 8;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
    }
    a *= (0.05 + 0.1 * trial) / a.norm();
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n), sum = term;
    for (int k = 1; k < 60; ++k) {
      term = term * a / k;
      sum += term;
    }
    worst = std::max(worst, max_dev(expm(a), sum));
  }
  return {"expm vs Taylor series", worst <= 1e-13, fmt("max entry deviation %.3g", worst)};
}

VerifyCheck commutative_reduction() {
  const DeformationParams p{1.0, 0.0, 0.0};
  double worst = 0.0;
  for (double g : {0.1, 0.5, 2.0}) {
    const auto omega = commutation_matrix(p, kModelParties);
    worst = std::max(worst, max_dev(evolve_exact(generator(bae_hamiltonian(1.0), omega, p), g).matrix,
                                    bae_closed_form(p, g).matrix));
  }
  const auto exact_t = transducer_map(p, Mode::exact), table_t = transducer_map(p, Mode::commutative);
  worst = std::max(worst, max_dev(exact_t.matrix, table_t.matrix));
  return {"commutative maps", worst <= 1e-14, fmt("max entry deviation %.3g", worst)};
}

VerifyCheck intervention() {
  double worst = 0.0;
  for (auto [hbar, theta, eta, g] : {std::array{1.0, 0.01, 0.02, 0.1}, std::array{0.5, 0.1, 0.05, 1.0},
                                     std::array{1.0, 0.003, 0.2, 2.0}}) {
    const auto m = build_model(ModelKind::bae, {hbar, theta, eta}, g, Mode::first_order);
    const auto s = intervention_scalars(m, Label::X_a, Label::P_Xa);
    worst = std::max({worst, std::abs(s.noise_term), std::abs(s.disturbance_term + theta * eta * g * g / (2 * hbar))});
  }
  return {"bae intervention scalars", worst <= 1e-14, fmt("max deviation %.3g", worst)};
}

VerifyCheck saturation() {
  const DeformationParams p{1.0, 0.0, 0.0};
  const auto omega = commutation_matrix(p, 1);
  const auto vac = make_state(Eigen::VectorXd::Zero(kPartyDim), vacuum_covariance(p), omega);
  const auto state = product_state(vac, vac);
  double worst = 0.0;
  for (double g : {0.1, 0.5, 2.0}) {
    const auto r = evaluate_relation(RelationId::heisenberg_eq0, build_model(ModelKind::bae, p, g, Mode::exact), state);
    worst = std::max({worst, std::abs(r.slack), std::abs(r.lhs - 0.5)});
  }
  return {"heisenberg saturation on vacuum", worst <= 1e-12, fmt("max |slack| %.3g", worst)};
}

VerifyCheck theorem_suite() {
  std::mt19937_64 rng(2024);
  int failures = 0, evaluated = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 400; ++i) {
    const DeformationParams p{i % 2 ? 1.0 : 0.5, 0.05 * (i % 3), 0.04 * (i % 5 == 0 ? 0 : 1)};
    const auto kind = i % 4 < 2 ? ModelKind::bae : ModelKind::transducer;
    const auto mode = i % 2 ? Mode::exact : Mode::commutative;
    const auto model = build_model(kind, p, kind == ModelKind::bae ? std::optional(0.2 + 0.1 * (i % 7)) : std::nullopt, mode);
    const auto state = sample_product_state(model.params, rng);
    for (auto id : {RelationId::ozawa_eq3, RelationId::bound_eq4, RelationId::universal_eq5}) {
      const auto r = evaluate_relation(id, model, state);
      ++evaluated;
      worst = std::min(worst, r.slack);
      if (!r.satisfied) ++failures;
    }
  }
  return {"ozawa, bound and universal relations on random states", failures == 0,
          fmt("%.0f evaluations, min slack %.3g", evaluated, worst)};
}

VerifyCheck transducer_noise() {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const DeformationParams p{1.0, 0.01 * (1 + i % 4), 0.02};
    const auto model = build_model(ModelKind::transducer, p, std::nullopt, Mode::first_order);
    const auto state = sample_product_state(p, rng);
    const double eps = rms(noise_operator(model, Label::X_a), state);
    const double expected = p.theta / (2 * p.hbar) * rms(basis_observable(Label::P_Yb), state);
    worst = std::max(worst, std::abs(eps - expected));
  }
  return {"transducer noise from theta", worst <= 1e-12, fmt("max deviation %.3g", worst)};
}

VerifyCheck robertson_lower_bound() {
  std::mt19937_64 rng(99);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 300; ++i) {
    const DeformationParams p{1.0, 0.02 * (i % 4), 0.03 * (i % 3)};
    const auto model = build_model(ModelKind::bae, p, 0.1 + 0.05 * (i % 5), Mode::exact);
    const auto state = sample_product_state(p, rng);
    const double product = window_condition(state, model).product;
    worst = std::min(worst, product - 0.5 * p.hbar);
  }
  return {"eps_C chi_C >= hbar/2 on random states", worst >= -1e-10, fmt("min product - hbar/2 = %.3g", worst)};
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

VerifyReport run_verification() {
  VerifyReport report;
  auto guarded = [&](const char* name, const std::function<VerifyCheck()>& check) {
    try {
      report.checks.push_back(check());
    } catch (const std::exception& e) {
      report.checks.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  guarded("expm vs Taylor series", expm_series);
  guarded("bae closed form vs exponential", closed_form_grid);
  guarded("commutative maps", commutative_reduction);
  guarded("bae first-order convergence", [] {
    return convergence("bae first-order convergence", [](const DeformationParams& p) {
      const double g = 1.0;
      const auto omega = commutation_matrix(p, kModelParties);
      return max_dev(bae_first_order(p, g).matrix, evolve_exact(generator(bae_hamiltonian(1.0), omega, p), g).matrix);
    });
  });
  guarded("transducer first-order convergence", [] {
    return convergence("transducer first-order convergence", [](const DeformationParams& p) {
      return max_dev(transducer_map(p, Mode::first_order).matrix, transducer_map(p, Mode::exact).matrix);
    });
  });
  guarded("bae intervention scalars", intervention);
  guarded("heisenberg saturation on vacuum", saturation);
  guarded("ozawa, bound and universal relations on random states", theorem_suite);
  guarded("transducer noise from theta", transducer_noise);
  guarded("eps_C chi_C >= hbar/2 on random states", robertson_lower_bound);
  return report;
}

}  // namespace ncoup

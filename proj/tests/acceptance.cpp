// One PASS/FAIL line per acceptance criterion; exits nonzero when any fails.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ncoup/dynamics.hpp"
#include "ncoup/inequalities.hpp"
#include "ncoup/measurement.hpp"
#include "ncoup/sampling.hpp"
#include "ncoup/scenario.hpp"
#include "ncoup/search.hpp"
#include "oracles.hpp"

using namespace ncoup;
using namespace oracle;

namespace {

// Pinned tolerances.
constexpr double kExactCoeffTol = 1e-14;
constexpr double kClosedFormTol = 1e-10;
constexpr double kPreservationTol = 1e-12;
constexpr double kRatioLo = 3.0, kRatioHi = 5.0;
constexpr double kCatalogTol = 1e-15;
constexpr double kInterventionTol = 1e-14;
constexpr double kSaturationTol = 1e-12;
constexpr double kTheoremTol = 1e-10;
constexpr double kTransducerNoiseTol = 1e-12;
constexpr double kCenteringTol = 1e-14;
constexpr double kSearchTol = 1e-6;
constexpr int kTheoremStates = 1000;
constexpr std::int64_t kSearchBudget = 100000;
constexpr std::uint64_t kSearchSeed = 20240611;

struct Outcome {
  bool pass = true;
  std::string detail;
};

char buf[512];

template <class... A>
std::string fmt(const char* f, A... a) {
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

double coeff_gap(const LinearObservable& obs, const Eigen::VectorXd& expected) {
  return (obs.coeffs() - expected).cwiseAbs().maxCoeff() + std::abs(obs.offset());
}

Eigen::VectorXd vec(std::initializer_list<std::pair<int, double>> terms) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(8);
  for (const auto& [i, c] : terms) v(i) += c;
  return v;
}

Outcome commutative_bae() {
  double worst = 0;
  for (double g : {0.01, 0.1, 0.5, 1.0, 2.0}) {
    const auto m = build_model(ModelKind::bae, {1, 0, 0}, g, Mode::exact);
    worst = std::max(worst, max_abs(m.map.matrix - bae_commutative(g)));
    worst = std::max(worst, coeff_gap(noise_operator(m, Label::X_a), unit(Xb) / g));
    worst = std::max(worst, coeff_gap(disturbance_operator(m, Label::X_a), Eigen::VectorXd::Zero(8)));
    worst = std::max(worst, coeff_gap(disturbance_operator(m, Label::P_Xa), -g * unit(PXb)));
  }
  return {worst <= kExactCoeffTol, fmt("max coefficient deviation %.3g (tol %.0e)", worst, kExactCoeffTol)};
}

Outcome closed_form_grid() {
  double worst_entry = 0, worst_defect = 0;
  int points = 0;
  for (double h : {0.5, 1.0}) {
    for (double th : {1e-3, 1e-2, 1e-1}) {
      for (double et : {1e-3, 1e-2, 1e-1}) {
        for (double g : {0.01, 0.1, 1.0}) {
          const DeformationParams p{h, th, et};
          const auto cf = bae_closed_form(p, g);
          worst_entry = std::max(worst_entry, max_abs(cf.matrix - expm(bae_eom(h, th, et, g))));
          worst_defect = std::max(worst_defect, commutator_defect(cf, commutation_matrix(p, 2)));
          ++points;
        }
      }
    }
  }
  return {worst_entry <= kClosedFormTol && worst_defect <= kPreservationTol,
          fmt("%d grid points, max entry deviation %.3g (tol %.0e), max |E w E^T - w| %.3g (tol %.0e)", points,
              worst_entry, kClosedFormTol, worst_defect, kPreservationTol)};
}

Outcome convergence() {
  auto dev_bae = [](double s) {
    return max_abs(bae_first_order(1, s, s, 1.0) - expm(bae_eom(1, s, s, 1.0)));
  };
  auto dev_tr = [](double s) {
    return max_abs(transducer_first_order(1, s, s) - transducer_exact(1, s, s));
  };
  auto lib_bae = [](double s) {
    const DeformationParams p{1, s, s};
    return max_abs(bae_first_order(p, 1.0).matrix - bae_closed_form(p, 1.0).matrix);
  };
  auto lib_tr = [](double s) {
    const DeformationParams p{1, s, s};
    return max_abs(transducer_map(p, Mode::first_order).matrix - transducer_map(p, Mode::exact).matrix);
  };
  bool ok = true;
  std::string detail;
  for (auto [name, f] : {std::pair<const char*, std::function<double(double)>>{"bae", lib_bae}, {"transducer", lib_tr},
                         {"bae(oracle)", dev_bae}, {"transducer(oracle)", dev_tr}}) {
    const double r1 = f(0.1) / f(0.05), r2 = f(0.05) / f(0.025);
    ok = ok && r1 >= kRatioLo && r1 <= kRatioHi && r2 >= kRatioLo && r2 <= kRatioHi;
    detail += fmt("%s ratios %.4f %.4f; ", name, r1, r2);
  }
  double table_gap = 0;
  for (double s : {0.1, 0.05}) {
    table_gap = std::max(table_gap, max_abs(transducer_map({1, s, s}, Mode::first_order).matrix -
                                            transducer_first_order(1, s, s)));
    table_gap = std::max(table_gap, max_abs(bae_first_order({1, s, s}, 1.0).matrix - bae_first_order(1, s, s, 1.0)));
  }
  ok = ok && table_gap <= kCatalogTol;
  detail += fmt("truncated maps vs tables %.3g (window [%.0f, %.0f])", table_gap, kRatioLo, kRatioHi);
  return {ok, detail};
}

Outcome catalog() {
  double worst = 0;
  for (const auto& [h, th, et, g] : {std::tuple{1.0, 0.01, 0.02, 0.1}, {0.5, 0.1, 0.03, 2.0}}) {
    const auto bae = build_model(ModelKind::bae, {h, th, et}, g, Mode::first_order);
    const auto kb = k_vector(bae);
    worst = std::max({worst, coeff_gap(kb.entries[0], vec({{Xb, 1 / g}, {PYb, th * g / (2 * h)}})),
                      coeff_gap(kb.entries[1], vec({{Yb, 1 / g}, {PXb, -th * g / (2 * h)}})),
                      coeff_gap(kb.entries[2], vec({{PXb, -g}, {Ya, -et * g * g / (2 * h)}})),
                      coeff_gap(kb.entries[3], vec({{PYb, -g}, {Xa, et * g * g / (2 * h)}})),
                      coeff_gap(disturbance_operator(bae, Label::Y_a), vec({{PXb, -th * g / h}}))});
    const auto tr = build_model(ModelKind::transducer, {h, th, et}, std::nullopt, Mode::first_order);
    const auto kt = k_vector(tr);
    worst = std::max({worst, coeff_gap(kt.entries[0], vec({{PYb, th / (2 * h)}})),
                      coeff_gap(kt.entries[1], vec({{PXb, -th / (2 * h)}})),
                      coeff_gap(kt.entries[2], vec({{PXa, -1}, {PXb, -1}, {Ya, -et / (2 * h)}})),
                      coeff_gap(kt.entries[3], vec({{PYa, -1}, {PYb, -1}, {Xa, et / (2 * h)}})),
                      coeff_gap(disturbance_operator(tr, Label::X_a),
                                vec({{Xb, -1}, {PYb, th / h}, {PYa, 1.5 * th / h}})),
                      coeff_gap(disturbance_operator(tr, Label::Y_a),
                                vec({{Yb, -1}, {PXb, -th / h}, {PXa, -1.5 * th / h}}))});
  }
  return {worst <= kCatalogTol, fmt("max coefficient deviation %.3g (tol %.0e)", worst, kCatalogTol)};
}

Outcome intervention() {
  const auto c = intervention_scalars(build_model(ModelKind::bae, {1, 0, 0}, 0.5, Mode::exact), Label::X_a,
                                      Label::P_Xa);
  double worst = std::max(std::abs(c.noise_term), std::abs(c.disturbance_term));
  const bool commutative_zero = worst == 0.0;
  for (const auto& [h, th, et, g] : {std::tuple{1.0, 0.01, 0.01, 0.1}, {1.0, 0.1, 0.2, 1.0}, {0.5, 0.05, 0.3, 2.0}}) {
    const auto s = intervention_scalars(build_model(ModelKind::bae, {h, th, et}, g, Mode::first_order), Label::X_a,
                                        Label::P_Xa);
    worst = std::max({worst, std::abs(s.noise_term), std::abs(s.disturbance_term + th * et * g * g / (2 * h))});
  }
  return {commutative_zero && worst <= kInterventionTol,
          fmt("commutative (%.3g, %.3g); max deviation from -theta*eta*G^2/2hbar %.3g (tol %.0e)", c.noise_term,
              c.disturbance_term, worst, kInterventionTol)};
}

GaussianState vacuum_pair(const DeformationParams& p) {
  const auto v = make_state(Eigen::VectorXd::Zero(4), vacuum_covariance(p), commutation_matrix(p, 1));
  return product_state(v, v);
}

Outcome saturation() {
  const DeformationParams p{1, 0, 0};
  double worst = 0, lo = 1e9, hi = -1e9;
  for (double g : {0.1, 0.5, 2.0}) {
    const auto r = evaluate_relation(RelationId::heisenberg_eq0, build_model(ModelKind::bae, p, g, Mode::exact),
                                     vacuum_pair(p));
    worst = std::max(worst, std::abs(r.slack));
    lo = std::min(lo, r.lhs);
    hi = std::max(hi, r.lhs);
  }
  return {worst <= kSaturationTol && hi - lo <= kSaturationTol && std::abs(lo - 0.5) <= kSaturationTol,
          fmt("max |slack| %.3g, lhs spread over G %.3g (tol %.0e)", worst, hi - lo, kSaturationTol)};
}

Outcome theorems() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double min_slack[3] = {1e300, 1e300, 1e300};
  int counts[2][2] = {};
  for (int i = 0; i < kTheoremStates; ++i) {
    const bool transducer = i % 2 == 1;
    const bool commutative = (i / 2) % 2 == 1;
    const DeformationParams requested{0.5 + u(rng), 0.2 * u(rng), 0.2 * u(rng)};
    const auto model = transducer
                           ? build_model(ModelKind::transducer, requested, std::nullopt,
                                         commutative ? Mode::commutative : Mode::exact)
                           : build_model(ModelKind::bae, requested, 0.05 + 3 * u(rng),
                                         commutative ? Mode::commutative : Mode::exact);
    const auto state = sample_product_state(model.params, rng);
    int j = 0;
    for (auto id : {RelationId::ozawa_eq3, RelationId::bound_eq4, RelationId::universal_eq5}) {
      min_slack[j] = std::min(min_slack[j], evaluate_relation(id, model, state).slack);
      ++j;
    }
    ++counts[transducer][commutative];
  }
  const bool ok = std::min({min_slack[0], min_slack[1], min_slack[2]}) >= -kTheoremTol;
  return {ok, fmt("%d states (bae/nc %d, bae/c %d, transducer/nc %d, transducer/c %d); min slack eq3 %.3g, eq4 %.3g, "
                  "eq5 %.3g (tol -%.0e)",
                  kTheoremStates, counts[0][0], counts[0][1], counts[1][0], counts[1][1], min_slack[0], min_slack[1],
                  min_slack[2], kTheoremTol)};
}

Outcome noiseless_transition() {
  std::mt19937_64 rng(8);
  const auto comm = build_model(ModelKind::transducer, {1, 0, 0}, std::nullopt, Mode::exact);
  double comm_eps = 0;
  for (int i = 0; i < 20; ++i) {
    comm_eps = std::max(comm_eps, evaluate_relation(RelationId::heisenberg_eq0, comm,
                                                    sample_product_state(comm.params, rng))
                                      .input("epsilon"));
  }
  double worst = 0, min_eps = 1e300;
  for (const DeformationParams p : {DeformationParams{1, 0.01, 0.02}, {0.5, 0.05, 0.01}, {1, 0.1, 0.0}}) {
    const auto m = build_model(ModelKind::transducer, p, std::nullopt, Mode::first_order);
    for (int i = 0; i < 20; ++i) {
      const auto s = sample_product_state(p, rng);
      const double eps = evaluate_relation(RelationId::heisenberg_eq0, m, s).input("epsilon");
      const double expected = p.theta / (2 * p.hbar) * std::sqrt(raw_moment(unit(PYb), s.cov(), s.mean()));
      worst = std::max(worst, std::abs(eps - expected));
      min_eps = std::min(min_eps, eps);
    }
  }
  return {comm_eps == 0.0 && worst <= kTransducerNoiseTol && min_eps > 0,
          fmt("commutative max eps %.3g; deformed |eps - (theta/2hbar) rms(P_Yb)| max %.3g (tol %.0e), min eps %.3g",
              comm_eps, worst, kTransducerNoiseTol, min_eps)};
}

Outcome centering() {
  std::mt19937_64 rng(9);
  double worst = 0, worst_k2 = 0;
  for (int i = 0; i < 50; ++i) {
    const DeformationParams p{1, 0.01 * (1 + i % 5), 0.02};
    const auto m = build_model(ModelKind::bae, p, 0.1 + 0.05 * i, Mode::exact);
    const auto s = center_probe(sample_product_state(p, rng));
    const auto a = evaluate_relation(RelationId::ncoup_bae_eq82, m, s);
    const auto b = evaluate_relation(RelationId::ncoup_bae_reduced_eq86, m, s);
    worst_k2 = std::max(worst_k2, std::abs(a.input("k2")));
    worst = std::max(worst, std::abs(a.lhs - b.lhs));
  }
  return {worst_k2 == 0.0 && worst <= kCenteringTol,
          fmt("50 centered states: max |k2| %.3g, max |lhs82 - lhs86| %.3g (tol %.0e)", worst_k2, worst,
              kCenteringTol)};
}

Outcome window_search() {
  bool ok = true;
  std::string detail;
  for (const DeformationParams p : {DeformationParams{1, 0.01, 0.01}, {1, 0, 0}}) {
    const auto m = build_model(ModelKind::bae, p, 0.1, Mode::exact);
    const auto r = search_min_product(m, ProbeFamily::gaussian(p), kSearchBudget, kSearchSeed);
    const bool pass = std::abs(r.best_value - 0.5 * p.hbar) <= kSearchTol && r.window_hit_count == 0 &&
                      r.evaluations <= kSearchBudget &&
                      r.certificate.finding.find("violation window empty") != std::string::npos;
    ok = ok && pass;
    detail += fmt("theta=%g: %lld evals, min %.17g, hits %lld; ", p.theta, static_cast<long long>(r.evaluations),
                  r.best_value, static_cast<long long>(r.window_hit_count));
    if (p.theta > 0) detail += "finding \"" + r.certificate.finding.substr(0, 60) + "...\"; ";
  }
  detail += fmt("tol %.0e", kSearchTol);
  return {ok, detail};
}

Outcome coverage() {
  std::set<RelationId> seen;
  int files = 0;
  std::string bad;
  for (const auto& e : std::filesystem::directory_iterator(NCOUP_SCENARIO_DIR)) {
    if (e.path().extension() != ".json") continue;
    try {
      const auto sc = load_scenario(e.path().string());
      seen.insert(sc.relations.begin(), sc.relations.end());
      ++files;
    } catch (const std::exception& ex) {
      bad += e.path().filename().string() + " ";
    }
  }
  std::string missing;
  for (auto id : relation_catalog()) {
    if (!seen.count(id)) missing += std::string(relation_name(id)) + " ";
  }
  const std::string cmd = std::string("\"") + NCOUP_CLI_PATH + "\" verify > /dev/null";
  const int rc = std::system(cmd.c_str());
  return {missing.empty() && bad.empty() && rc == 0,
          fmt("%d scenarios, %zu/%zu relations covered%s%s; verify exit %d", files, seen.size(),
              relation_catalog().size(), missing.empty() ? "" : (", missing " + missing).c_str(),
              bad.empty() ? "" : (", unparsable " + bad).c_str(), rc)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"commutative BAE reproduction", commutative_bae},
      {"closed form vs exponential oracle", closed_form_grid},
      {"perturbative convergence", convergence},
      {"noise/disturbance catalog", catalog},
      {"intervention scalars", intervention},
      {"Heisenberg saturation", saturation},
      {"theorem suite", theorems},
      {"noiseless-to-noisy transition", noiseless_transition},
      {"centering", centering},
      {"window feasibility finding", window_search},
      {"relation-report coverage", coverage},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

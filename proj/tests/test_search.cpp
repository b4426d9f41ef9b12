#include <doctest.h>

#include <cmath>

#include "ncoup/error.hpp"
#include "ncoup/search.hpp"

using namespace ncoup;

TEST_SUITE("search") {

TEST_CASE("axis ranges") {
  AxisRange lin{1.0, 3.0, false}, lg{1.0, 100.0, true};
  CHECK(lin.at(0.5) == 2.0);
  CHECK(lg.at(0.5) == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(lg.at(0.0) == 1.0);
  CHECK(lg.at(1.0) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(AxisRange{2.0, 2.0, false}.fixed());
}

TEST_CASE("presets") {
  const DeformationParams p{1, 0.01, 0.01};
  CHECK(ProbeFamily::diagonal_squeezed(p).free_axes() == 2);
  CHECK(ProbeFamily::gaussian(p).free_axes() == kFamilyAxes);
  CHECK(ProbeFamily::preset("gaussian", p).has_value());
  CHECK_FALSE(ProbeFamily::preset("gausian", p).has_value());
}

TEST_CASE("family point at the origin is the vacuum") {
  std::array<double, kFamilyAxes> c{1, 1, 1, 1, 0, 0, 0, 0, 0};
  const auto m = family_point(c, {1, 0, 0});
  CHECK((m.cov - vacuum_covariance({1, 0, 0})).cwiseAbs().maxCoeff() <= 1e-16);
  CHECK(m.mean.isZero(0.0));
  c[static_cast<int>(FamilyAxis::corr_x_py)] = 0.1;
  c[static_cast<int>(FamilyAxis::mean_px)] = 0.3;
  const auto n = family_point(c, {1, 0, 0});
  CHECK(n.cov(0, 3) == 0.1);
  CHECK(n.cov(3, 0) == 0.1);
  CHECK(n.mean(2) == 0.3);
}

TEST_CASE("diagonal squeezed family, commutative: minimum hbar/2, no hits") {
  const DeformationParams p{1, 0, 0};
  const auto m = build_model(ModelKind::bae, p, 0.1, Mode::exact);
  const auto r = search_min_product(m, ProbeFamily::diagonal_squeezed(p), 2000, 1);
  CHECK(r.best_value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.window_hit_count == 0);
  CHECK(r.verdict == Feasibility::empty_over_family);
  REQUIRE(r.best_state.has_value());
  CHECK(r.evaluations <= 2000);
  CHECK(r.certificate.robertson_bound == 0.5);
}

TEST_CASE("single-point family evaluates once and returns that product") {
  const DeformationParams p{1, 0, 0};
  const auto m = build_model(ModelKind::bae, p, 0.5, Mode::exact);
  std::array<double, kFamilyAxes> c{2.0, 1.0, 1.5, 1.0, 0, 0, 0, 0, 0};
  const auto r = search_min_product(m, ProbeFamily::single_point(c), 500, 0);
  CHECK(r.evaluations == 1);
  // X mode thermal 1.5 with squeeze 2: <X_b^2> = 1.5, <P_Xb^2> = 0.375.
  CHECK(r.best_value == doctest::Approx(std::sqrt(1.5 * 0.375)).epsilon(1e-14));
}

TEST_CASE("search is deterministic in its inputs") {
  const DeformationParams p{1, 0.01, 0.01};
  const auto m = build_model(ModelKind::bae, p, 0.1, Mode::exact);
  const auto fam = ProbeFamily::gaussian(p);
  const auto a = search_min_product(m, fam, 3000, 42);
  const auto b = search_min_product(m, fam, 3000, 42);
  CHECK(a.best_value == b.best_value);
  CHECK(a.best_coords == b.best_coords);
  CHECK(a.evaluations == b.evaluations);
  CHECK(a.certificate.max_k1 == b.certificate.max_k1);
  CHECK(a.certificate.finding == b.certificate.finding);
}

TEST_CASE("minimum never falls below hbar/2 and hits are sound") {
  for (const DeformationParams p : {DeformationParams{1, 0, 0}, {1, 0.01, 0.01}, {0.5, 0.05, 0.02}}) {
    const auto m = build_model(ModelKind::bae, p, 0.1, Mode::exact);
    const auto r = search_min_product(m, ProbeFamily::gaussian(p), 4000, 3);
    CHECK(r.best_value >= 0.5 * p.hbar - 1e-12);
    CHECK(r.best_value <= 0.5 * p.hbar + 1e-2);
    CHECK(r.window_hit_count == 0);
    CHECK(r.window_hits.empty());
    CHECK(r.certificate.gap == doctest::Approx(r.best_value - 0.5 * p.hbar));
    CHECK(r.certificate.admissible_points + r.certificate.rejected_points == r.evaluations);
    CHECK(r.certificate.finding.find("violation window empty") != std::string::npos);
    for (const auto& hit : r.window_hits) CHECK(window_condition(hit, m).inside());
  }
}

TEST_CASE("certificate reports the largest k1 and its deformed edge") {
  const DeformationParams p{1, 0.01, 0.01};
  const auto m = build_model(ModelKind::bae, p, 0.1, Mode::exact);
  const auto r = search_min_product(m, ProbeFamily::gaussian(p), 2000, 9);
  CHECK(r.certificate.max_k1 > 0);
  const double edge = 0.5 * p.hbar * (1 - r.certificate.max_k1 * p.theta * 0.01 / (2 * p.hbar));
  CHECK(r.certificate.nc_lower_edge_at_max_k1 == doctest::Approx(edge).epsilon(1e-14));
}

TEST_CASE("argument validation") {
  const DeformationParams p{1, 0, 0};
  const auto bae = build_model(ModelKind::bae, p, 0.1, Mode::exact);
  const auto tr = build_model(ModelKind::transducer, p, std::nullopt, Mode::exact);
  CHECK_THROWS_AS(search_min_product(tr, ProbeFamily::gaussian(p), 10, 0), ModelError);
  CHECK_THROWS_AS(search_min_product(bae, ProbeFamily::gaussian(p), 0, 0), ParameterError);
}

}  // TEST_SUITE

#include "ncoup/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "ncoup/error.hpp"
#include "parallel.hpp"

namespace ncoup {

namespace {

using Coords = std::array<double, kFamilyAxes>;

struct Evaluation {
  bool admissible = false;
  double product = std::numeric_limits<double>::infinity();
  double k1 = 0.0;
  double margin = -std::numeric_limits<double>::infinity();  // min eigenvalue of V + (i/2) omega
  WindowCheck window;
};

// Lower product wins; on equal products the point deeper inside the admissible set wins.
bool improves(const Evaluation& trial, double value, double margin) {
  if (!trial.admissible) return false;
  return trial.product < value || (trial.product == value && trial.margin > margin);
}

class Evaluator {
 public:
  Evaluator(const MeasurementModel& model, GaussianState object)
      : model_(model),
        probe_omega_(commutation_matrix(model.params, 1)),
        object_(std::move(object)) {
    const auto base = commutative_counterpart(model);
    noise_c_ = noise_operator(base, Label::X_a);
    disturbance_c_ = disturbance_operator(base, Label::P_Xa);
  }

  Evaluation operator()(const Coords& coords) const {
    auto moments = family_point(coords, model_.params);
    Evaluation e;
    e.margin = min_admissibility_eigenvalue(moments.cov, probe_omega_);
    if (e.margin < -kAdmissibilityTolerance) return e;
    const auto state = full_state(coords);
    e.admissible = true;
    e.product = rms(noise_c_, state) * rms(disturbance_c_, state);
    const auto xb = basis_observable(Label::X_b);
    e.k1 = 2.0 * symmetric_moment(xb, basis_observable(Label::P_Yb), state) / symmetric_moment(xb, xb, state);
    const auto& p = model_.params;
    const double g = model_.effective_gain();
    e.window = window_predicate(p.hbar, e.k1 * p.theta * g * g / (2.0 * p.hbar), e.product);
    return e;
  }

  GaussianState full_state(const Coords& coords) const {
    auto moments = family_point(coords, model_.params);
    return product_state(object_, make_state(std::move(moments.mean), std::move(moments.cov), probe_omega_));
  }

 private:
  const MeasurementModel& model_;
  CommutationMatrix probe_omega_;
  GaussianState object_;
  LinearObservable noise_c_;
  LinearObservable disturbance_c_;
};

std::vector<Evaluation> evaluate_all(const Evaluator& eval, const std::vector<Coords>& points) {
  std::vector<Evaluation> out(points.size());
  detail::parallel_for(points.size(), 256, [&](std::size_t i) { out[i] = eval(points[i]); });
  return out;
}

class Tracker {
 public:
  Tracker(const Evaluator& eval, double hbar) : eval_(eval), hbar_(hbar) {}

  void record(const Coords& u_coords, const Coords& coords, const Evaluation& e) {
    ++evaluations;
    if (!e.admissible) {
      ++rejected;
      return;
    }
    ++admissible;
    if (e.k1 > max_k1 || admissible == 1) {
      max_k1 = e.k1;
      nc_lower_edge = e.window.lower_edge;
    }
    if (e.window.inside()) {
      ++hit_count;
      if (hits.size() < SearchResult::kMaxStoredHits) hits.push_back(eval_.full_state(coords));
    }
    if (e.product < best_value) {
      best_value = e.product;
      best_coords = coords;
      best_u = u_coords;
    }
  }

  const Evaluator& eval_;
  double hbar_;
  std::int64_t evaluations = 0, admissible = 0, rejected = 0, hit_count = 0;
  double best_value = std::numeric_limits<double>::infinity();
  Coords best_coords{}, best_u{};
  double max_k1 = 0.0, nc_lower_edge = 0.0;
  std::vector<GaussianState> hits;
};

Coords to_coords(const ProbeFamily& family, const Coords& u) {
  Coords c{};
  for (int i = 0; i < kFamilyAxes; ++i) c[static_cast<std::size_t>(i)] = family.axes[static_cast<std::size_t>(i)].at(u[static_cast<std::size_t>(i)]);
  return c;
}

std::string format_finding(const ProbeFamily& family, const Tracker& t, double bound) {
  std::ostringstream out;
  out.precision(17);
  if (t.admissible == 0) {
    out << "family '" << family.name << "' produced no admissible probe state";
  } else if (t.hit_count > 0) {
    out << t.hit_count << " admissible probe states of family '" << family.name
        << "' lie inside the violation window";
  } else {
    out << "violation window empty over family '" << family.name << "': min eps_C*chi_C = " << t.best_value
        << " against hbar/2 = " << bound
        << "; eps_C*chi_C = <X_b^2>^(1/2) <P_Xb^2>^(1/2) and the (X_b, P_Xb) block of V + (i/2)omega "
           "forces it >= hbar/2 in the commutative and the deformed algebra alike, so no Gaussian probe "
           "violates the commutative bound";
  }
  return out.str();
}

}  // namespace

std::string_view family_axis_name(FamilyAxis axis) {
  switch (axis) {
    case FamilyAxis::squeeze_x: return "squeeze_x";
    case FamilyAxis::squeeze_y: return "squeeze_y";
    case FamilyAxis::thermal_x: return "thermal_x";
    case FamilyAxis::thermal_y: return "thermal_y";
    case FamilyAxis::rotation: return "rotation";
    case FamilyAxis::corr_x_py: return "corr_x_py";
    case FamilyAxis::corr_x_y: return "corr_x_y";
    case FamilyAxis::mean_x: return "mean_x";
    case FamilyAxis::mean_px: return "mean_px";
  }
  return "?";
}

std::string_view feasibility_name(Feasibility f) {
  return f == Feasibility::found ? "found" : "empty_over_family";
}

double AxisRange::at(double u) const {
  if (fixed()) return lo;
  if (log_scale) return lo * std::pow(hi / lo, u);
  return lo + (hi - lo) * u;
}

int ProbeFamily::free_axes() const {
  return static_cast<int>(std::count_if(axes.begin(), axes.end(), [](const AxisRange& r) { return !r.fixed(); }));
}

ProbeFamily ProbeFamily::single_point(const Coords& point) {
  ProbeFamily f;
  f.name = "single_point";
  for (std::size_t i = 0; i < point.size(); ++i) f.axes[i] = {point[i], point[i], false};
  return f;
}

ProbeFamily ProbeFamily::diagonal_squeezed(const DeformationParams&) {
  auto f = single_point({1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0});
  f.name = "diagonal_squeezed";
  f.axis(FamilyAxis::squeeze_x) = {0.25, 4.0, true};
  f.axis(FamilyAxis::squeeze_y) = {0.25, 4.0, true};
  return f;
}

ProbeFamily ProbeFamily::gaussian(const DeformationParams& params) {
  const double h = params.hbar, sh = std::sqrt(params.hbar);
  auto f = diagonal_squeezed(params);
  f.name = "gaussian";
  f.axis(FamilyAxis::thermal_x) = {1.0, 4.0, true};
  f.axis(FamilyAxis::thermal_y) = {1.0, 1e4, true};
  f.axis(FamilyAxis::rotation) = {-0.5 * std::numbers::pi, 0.5 * std::numbers::pi, false};
  f.axis(FamilyAxis::corr_x_py) = {-0.25 * h, 0.25 * h, false};
  f.axis(FamilyAxis::corr_x_y) = {-0.25 * h, 0.25 * h, false};
  f.axis(FamilyAxis::mean_x) = {-0.5 * sh, 0.5 * sh, false};
  f.axis(FamilyAxis::mean_px) = {-0.5 * sh, 0.5 * sh, false};
  return f;
}

std::optional<ProbeFamily> ProbeFamily::preset(std::string_view name, const DeformationParams& params) {
  if (name == "diagonal_squeezed") return diagonal_squeezed(params);
  if (name == "gaussian") return gaussian(params);
  return std::nullopt;
}

ProbeMoments family_point(const Coords& c, const DeformationParams& params) {
  const double h = 0.5 * params.hbar;
  const double sx = c[0], sy = c[1], nx = c[2], ny = c[3], phi = c[4];
  if (!(sx > 0.0) || !(sy > 0.0) || !(nx > 0.0) || !(ny > 0.0)) {
    throw ParameterError("probe family: squeeze and thermal coordinates must be positive");
  }
  // X mode in (X, P_X): n R diag(s h, h/s) R^T
  const double cs = std::cos(phi), sn = std::sin(phi);
  const double a = h * sx, b = h / sx;
  const double vxx = nx * (cs * cs * a + sn * sn * b);
  const double vpp = nx * (sn * sn * a + cs * cs * b);
  const double vxp = nx * cs * sn * (a - b);

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(kPartyDim, kPartyDim);
  cov(0, 0) = vxx;
  cov(2, 2) = vpp;
  cov(0, 2) = cov(2, 0) = vxp;
  cov(1, 1) = ny * h * sy;
  cov(3, 3) = ny * h / sy;
  cov(0, 3) = cov(3, 0) = c[5];
  cov(0, 1) = cov(1, 0) = c[6];

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(kPartyDim);
  mean(0) = c[7];
  mean(2) = c[8];
  return {std::move(mean), std::move(cov)};
}

SearchResult search_min_product(const MeasurementModel& model, const ProbeFamily& family, std::int64_t budget,
                                std::uint64_t seed, const std::optional<GaussianState>& object) {
  if (model.kind != ModelKind::bae) throw ModelError("search_min_product requires a BAE model");
  if (budget < 1) throw ParameterError("search budget must be >= 1");

  const auto object_state =
      object ? *object
             : make_state(Eigen::VectorXd::Zero(kPartyDim), algebra_ground_covariance(model.params),
                          commutation_matrix(model.params, 1));
  const Evaluator eval(model, object_state);
  Tracker track(eval, model.params.hbar);

  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < family.axes.size(); ++i) {
    if (!family.axes[i].fixed()) free.push_back(i);
  }
  const int k = static_cast<int>(free.size());

  auto run_batch = [&](const std::vector<Coords>& us) {
    std::vector<Coords> cs;
    cs.reserve(us.size());
    for (const auto& u : us) cs.push_back(to_coords(family, u));
    const auto results = evaluate_all(eval, cs);
    for (std::size_t i = 0; i < us.size(); ++i) track.record(us[i], cs[i], results[i]);
    return results;
  };

  Coords center{};
  center.fill(0.5);

  // Coarse grid, lexicographic over the free axes.
  std::vector<Coords> grid;
  std::int64_t per_axis = 1;
  if (k > 0) {
    const std::int64_t grid_budget = std::max<std::int64_t>(1, budget / 2);
    per_axis = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(std::pow(double(grid_budget), 1.0 / k) + 1e-9)));
    while (per_axis > 1 && std::pow(double(per_axis), k) > double(grid_budget)) --per_axis;
    std::vector<std::int64_t> idx(static_cast<std::size_t>(k), 0);
    while (true) {
      Coords u = center;
      for (int j = 0; j < k; ++j) {
        u[free[static_cast<std::size_t>(j)]] =
            per_axis == 1 ? 0.5 : double(idx[static_cast<std::size_t>(j)]) / double(per_axis - 1);
      }
      grid.push_back(u);
      int j = k - 1;
      while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == per_axis) idx[static_cast<std::size_t>(j--)] = 0;
      if (j < 0) break;
    }
  } else {
    grid.push_back(center);
  }
  if (static_cast<std::int64_t>(grid.size()) > budget) grid.resize(static_cast<std::size_t>(budget));
  auto results = run_batch(grid);
  struct Candidate {
    double product;
    double margin;
    Coords u;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (results[i].admissible) candidates.push_back({results[i].product, results[i].margin, grid[i]});
  }

  // Seeded uniform samples.
  if (k > 0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::int64_t count = std::min(budget / 4, budget - track.evaluations);
    std::vector<Coords> samples;
    for (std::int64_t i = 0; i < count; ++i) {
      Coords u = center;
      for (auto axis : free) u[axis] = unit(rng);
      samples.push_back(u);
    }
    results = run_batch(samples);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (results[i].admissible) candidates.push_back({results[i].product, results[i].margin, samples[i]});
    }
  }

  // Coordinate descent with shrinking steps from the best few starts.
  if (k > 0 && !candidates.empty()) {
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.product < b.product; });
    constexpr std::size_t kStarts = 4;
    std::vector<Candidate> starts;
    for (const auto& cand : candidates) {
      if (starts.size() == kStarts) break;
      if (std::none_of(starts.begin(), starts.end(), [&](const auto& s) { return s.u == cand.u; })) {
        starts.push_back(cand);
      }
    }
    const double initial_step = per_axis > 1 ? 0.5 / double(per_axis - 1) : 0.25;
    for (std::size_t s = 0; s < starts.size(); ++s) {
      const std::int64_t remaining = budget - track.evaluations;
      if (remaining <= 0) break;
      const std::int64_t share = remaining / static_cast<std::int64_t>(starts.size() - s);
      const std::int64_t stop_at = track.evaluations + share;
      auto [value, margin, u] = starts[s];
      double step = initial_step;
      while (step > 1e-10 && track.evaluations < stop_at) {
        bool improved = false;
        for (auto axis : free) {
          for (double dir : {-1.0, 1.0}) {
            if (track.evaluations >= stop_at) break;
            Coords trial = u;
            trial[axis] = std::clamp(u[axis] + dir * step, 0.0, 1.0);
            if (trial[axis] == u[axis]) continue;
            const auto c = to_coords(family, trial);
            const auto e = eval(c);
            track.record(trial, c, e);
            if (improves(e, value, margin)) {
              value = e.product;
              margin = e.margin;
              u = trial;
              improved = true;
              break;
            }
          }
        }
        if (!improved) step *= 0.5;
      }
    }
  }

  SearchResult result;
  result.family_name = family.name;
  result.evaluations = track.evaluations;
  result.best_value = track.best_value;
  result.best_coords = track.best_coords;
  if (track.admissible > 0) result.best_state = eval.full_state(track.best_coords);
  result.window_hit_count = track.hit_count;
  result.window_hits = std::move(track.hits);
  result.verdict = track.hit_count > 0 ? Feasibility::found : Feasibility::empty_over_family;

  auto& cert = result.certificate;
  cert.robertson_bound = 0.5 * model.params.hbar;
  cert.min_product = track.best_value;
  cert.gap = track.best_value - cert.robertson_bound;
  cert.max_k1 = track.max_k1;
  cert.nc_lower_edge_at_max_k1 = track.nc_lower_edge;
  cert.admissible_points = track.admissible;
  cert.rejected_points = track.rejected;
  cert.finding = format_finding(family, track, cert.robertson_bound);
  return result;
}

}  // namespace ncoup

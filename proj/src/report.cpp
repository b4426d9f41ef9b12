#include "ncoup/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "ncoup/error.hpp"
#include "ncoup/version.hpp"
#include "parallel.hpp"

namespace ncoup {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string g17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json matrix_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

ordered_json vector_json(const Eigen::VectorXd& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

ordered_json observable_json(std::string_view name, const LinearObservable& obs) {
  ordered_json coeffs = ordered_json::object();
  for (int i = 0; i < obs.dim(); ++i) coeffs[std::string(label_name(static_cast<Label>(i)))] = obs.coeffs()(i);
  return {{"name", name}, {"expression", describe(obs)}, {"coefficients", coeffs}, {"offset", obs.offset()}};
}

ordered_json params_json(const DeformationParams& p) {
  return {{"hbar", p.hbar}, {"theta", p.theta}, {"eta", p.eta}};
}

ordered_json probe_block_json(const GaussianState& s) {
  const auto tail = s.dim() - kPartyDim;
  return {{"mean", vector_json(s.mean().tail(kPartyDim))},
          {"cov", matrix_json(s.cov().bottomRightCorner(kPartyDim, kPartyDim))},
          {"block_offset", tail}};
}

ordered_json family_json(const ProbeFamily& f) {
  ordered_json axes = ordered_json::object();
  for (int i = 0; i < kFamilyAxes; ++i) {
    const auto& r = f.axes[static_cast<std::size_t>(i)];
    axes[std::string(family_axis_name(static_cast<FamilyAxis>(i)))] = {{"lo", r.lo}, {"hi", r.hi}, {"log", r.log_scale}};
  }
  return {{"name", f.name}, {"state_class", "gaussian"}, {"axes", axes}};
}

ordered_json search_json(const SearchResult& r, const ProbeFamily& family, std::int64_t budget, std::uint64_t seed) {
  ordered_json coords = ordered_json::object();
  for (int i = 0; i < kFamilyAxes; ++i) {
    coords[std::string(family_axis_name(static_cast<FamilyAxis>(i)))] = r.best_coords[static_cast<std::size_t>(i)];
  }
  ordered_json hits = ordered_json::array();
  for (const auto& h : r.window_hits) hits.push_back(probe_block_json(h));
  const auto& c = r.certificate;
  ordered_json out = {
      {"family", family_json(family)},
      {"budget", budget},
      {"seed", seed},
      {"evaluations", r.evaluations},
      {"best_value", r.best_value},
      {"best_coords", coords},
      {"best_probe", r.best_state ? probe_block_json(*r.best_state) : ordered_json(nullptr)},
      {"verdict", feasibility_name(r.verdict)},
      {"window_hit_count", r.window_hit_count},
      {"window_hits", hits},
      {"certificate",
       {{"min_product", c.min_product},
        {"robertson_bound", c.robertson_bound},
        {"gap", c.gap},
        {"max_k1", c.max_k1},
        {"nc_lower_edge_at_max_k1", c.nc_lower_edge_at_max_k1},
        {"admissible_points", c.admissible_points},
        {"rejected_points", c.rejected_points},
        {"finding", c.finding}}},
  };
  return out;
}

std::vector<std::string> sweep_columns(const Scenario& sc) {
  std::vector<std::string> cols{"theta", "eta", "gain", "epsilon", "chi", "sigma_A", "sigma_B", "k1", "k2",
                                "k3", "k4", "k5", "admissibility_min_eigenvalue"};
  for (auto id : sc.relations) cols.push_back(std::string(relation_name(id)) + "_slack");
  cols.push_back("status");
  return cols;
}

}  // namespace

std::string scenario_digest(const Scenario& scenario) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_scenario(scenario)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunReport run(const Scenario& scenario, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (options.require_search && !scenario.search) throw ValidationError({"scenario has no 'search' block"});

  RunReport report;
  report.scenario = scenario;
  report.scenario_digest = scenario_digest(scenario);
  report.tool_version = std::string(kToolVersion);
  report.model = scenario_model(scenario);
  const auto& model = report.model;
  const auto state = scenario_state(scenario, model);

  report.admissibility_min_eigenvalue = min_admissibility_eigenvalue(state.cov(), model.omega);
  for (auto id : scenario.relations) report.relations.push_back(evaluate_relation(id, model, state, scenario.pair));
  report.k_vector = k_vector(model);
  report.intervention = intervention_scalars(model, scenario.pair.first, scenario.pair.second);
  report.k = k_coefficients(model, state);
  report.probe_commutators = probe_output_commutators(model);

  if (scenario.search) {
    const auto& spec = *scenario.search;
    report.search_family = spec.resolve(model.params);
    const auto object = build_party_state(scenario.object_state, model.params);
    report.search_budget = options.budget.value_or(spec.budget);
    report.search_seed = options.seed.value_or(spec.seed);
    report.search = search_min_product(model, *report.search_family, report.search_budget, report.search_seed, object);
  }
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SweepTable sweep(const Scenario& scenario, const std::optional<SweepSpec>& grid) {
  SweepSpec axes = grid ? *grid : scenario.sweep.value_or(SweepSpec{});
  if (grid) {
    if (grid->theta.empty() && grid->eta.empty() && grid->gain.empty()) throw ParameterError("sweep needs at least one axis");
  }
  if (axes.theta.empty()) axes.theta = {scenario.params.theta};
  if (axes.eta.empty()) axes.eta = {scenario.params.eta};
  if (axes.gain.empty()) axes.gain = {scenario.gain.value_or(1.0)};
  for (const auto* axis : {&axes.theta, &axes.eta, &axes.gain}) {
    for (double v : *axis) {
      if (!std::isfinite(v)) throw ParameterError("sweep axis values must be finite");
    }
  }
  if (scenario.kind == ModelKind::transducer && (axes.gain.size() != 1 || axes.gain[0] != 1.0)) {
    throw ParameterError("transducer sweeps have no gain axis");
  }

  SweepTable table;
  table.columns = sweep_columns(scenario);
  for (double t : axes.theta) {
    for (double e : axes.eta) {
      for (double g : axes.gain) table.rows.push_back({t, e, g, {}, "ok"});
    }
  }
  const std::size_t width = table.columns.size() - 4;
  detail::parallel_for(table.rows.size(), 2, [&](std::size_t i) {
    auto& row = table.rows[i];
    row.values.assign(width, std::numeric_limits<double>::quiet_NaN());
    try {
      Scenario point = scenario;
      point.params.theta = row.theta;
      point.params.eta = row.eta;
      if (point.kind == ModelKind::bae) point.gain = row.gain;
      point.params.validate();
      const auto model = scenario_model(point);
      const auto state = scenario_state(point, model);
      const auto base = evaluate_relation(RelationId::heisenberg_eq0, model, state, point.pair);
      const auto k = k_coefficients(model, state);
      std::vector<double> v{base.input("epsilon"), base.input("chi"), base.input("sigma_A"), base.input("sigma_B"),
                            k.k1, k.k2, k.k3, k.k4, k.k5, base.input("admissibility_min_eigenvalue")};
      for (auto id : point.relations) v.push_back(evaluate_relation(id, model, state, point.pair).slack);
      row.values = std::move(v);
    } catch (const AdmissibilityError&) {
      row.status = "inadmissible";
    } catch (const DegenerateStateError&) {
      row.status = "degenerate";
    } catch (const Error& e) {
      row.status = std::string("error: ") + e.what();
    }
  });
  return table;
}

std::string report_json(const RunReport& r, bool include_wall_time) {
  ordered_json relations = ordered_json::array();
  for (const auto& rep : r.relations) {
    ordered_json inputs = ordered_json::object();
    for (const auto& e : rep.inputs) inputs[e.name] = e.value;
    relations.push_back({{"relation_id", relation_name(rep.relation)},
                         {"lhs", rep.lhs},
                         {"rhs", rep.rhs},
                         {"slack", rep.slack},
                         {"satisfied", rep.satisfied},
                         {"inputs", inputs}});
  }
  ordered_json kvec = ordered_json::array();
  static constexpr std::string_view kNames[] = {"N(X_a)", "N(Y_a)", "D(P_Xa)", "D(P_Ya)"};
  for (std::size_t i = 0; i < r.k_vector.entries.size(); ++i) kvec.push_back(observable_json(kNames[i], r.k_vector.entries[i]));

  ordered_json doc = {
      {"tool", "ncoup"},
      {"version", r.tool_version},
      {"scenario_digest", r.scenario_digest},
      {"scenario", json::parse(serialize_scenario(r.scenario))},
      {"model",
       {{"kind", model_kind_name(r.model.kind)},
        {"mode", mode_name(r.model.mode)},
        {"gain", r.model.effective_gain()},
        {"params", params_json(r.model.params)},
        {"requested_params", params_json(r.model.requested_params)},
        {"map_provenance", provenance_name(r.model.map.provenance)},
        {"commutator_defect", commutator_defect(r.model.map, r.model.omega)}}},
      {"state_class", "gaussian"},
      {"admissibility_min_eigenvalue", r.admissibility_min_eigenvalue},
      {"relations", relations},
      {"k_vector", kvec},
      {"intervention",
       {{"pair", {label_name(r.scenario.pair.first), label_name(r.scenario.pair.second)}},
        {"noise_term", r.intervention.noise_term},
        {"disturbance_term", r.intervention.disturbance_term},
        {"combined", r.intervention.combined()},
        {"independent", r.intervention.independent()}}},
      {"k_coefficients",
       {{"k1", r.k.k1},
        {"k2", r.k.k2},
        {"k3", r.k.k3},
        {"k4", r.k.k4},
        {"k5", r.k.k5},
        {"noise_expansion_valid", r.k.noise_expansion_valid},
        {"disturbance_expansion_valid", r.k.disturbance_expansion_valid}}},
      {"probe_output_commutators",
       {{"observables", {"M1_out", "M2_out", "P_Xa_out", "P_Ya_out"}}, {"matrix", matrix_json(r.probe_commutators)}}},
  };
  if (r.search && r.search_family) {
    doc["search"] = search_json(*r.search, *r.search_family, r.search_budget, r.search_seed);
  }
  if (include_wall_time) doc["wall_time_ms"] = r.wall_time_ms;
  return doc.dump(2) + "\n";
}

std::string report_csv(const RunReport& r) {
  std::ostringstream out;
  out << "relation_id,lhs,rhs,slack,satisfied\n";
  for (const auto& rep : r.relations) {
    out << relation_name(rep.relation) << ',' << g17(rep.lhs) << ',' << g17(rep.rhs) << ',' << g17(rep.slack) << ','
        << (rep.satisfied ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string sweep_csv(const SweepTable& t) {
  std::ostringstream out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    out << g17(row.theta) << ',' << g17(row.eta) << ',' << g17(row.gain);
    for (double v : row.values) out << ',' << g17(v);
    std::string status = row.status;
    for (char& c : status) {
      if (c == ',' || c == '\n') c = ';';
    }
    out << ',' << status << '\n';
  }
  return out.str();
}

std::string sweep_json(const SweepTable& t, const Scenario& scenario) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : t.rows) {
    ordered_json r = ordered_json::object();
    r[t.columns[0]] = row.theta;
    r[t.columns[1]] = row.eta;
    r[t.columns[2]] = row.gain;
    for (std::size_t i = 0; i < row.values.size(); ++i) {
      r[t.columns[i + 3]] = std::isnan(row.values[i]) ? ordered_json(nullptr) : ordered_json(row.values[i]);
    }
    r["status"] = row.status;
    rows.push_back(r);
  }
  ordered_json doc = {{"tool", "ncoup"},
                      {"version", kToolVersion},
                      {"scenario_digest", scenario_digest(scenario)},
                      {"columns", t.columns},
                      {"rows", rows}};
  return doc.dump(2) + "\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError({"cannot write " + tmp.string()});
    out << contents;
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw ValidationError({"failed writing " + tmp.string()});
    }
  }
  std::filesystem::rename(tmp, path);
}

std::vector<std::filesystem::path> write_report(const RunReport& report, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  for (const auto& fmt : report.scenario.output.formats) {
    const auto path = dir / (report.scenario.output.stem + "." + fmt);
    write_atomic(path, fmt == "json" ? report_json(report) : report_csv(report));
    written.push_back(path);
  }
  return written;
}

std::vector<std::filesystem::path> write_sweep(const SweepTable& table, const Scenario& scenario,
                                               const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  for (const auto& fmt : scenario.output.formats) {
    const auto path = dir / (scenario.output.stem + "_sweep." + fmt);
    write_atomic(path, fmt == "json" ? sweep_json(table, scenario) : sweep_csv(table));
    written.push_back(path);
  }
  return written;
}

}  // namespace ncoup

#include "ncoup/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "ncoup/error.hpp"

namespace ncoup {

using nlohmann::json;

namespace {

constexpr std::string_view kPresetHalfbar = "ozawa_halfbar";

std::string join_path(const std::string& base, std::string_view key) {
  return base.empty() ? std::string(key) : base + "." + std::string(key);
}

// Collects problems while walking a JSON document.
class Reader {
 public:
  std::vector<std::string> problems;

  void fail(const std::string& path, const std::string& what) { problems.push_back(path + ": " + what); }

  bool object(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    fail(path, "expected an object");
    return false;
  }

  void check_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    for (const auto& item : j.items()) {
      const std::string& key = item.key();
      if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
      std::string_view best;
      std::size_t best_d = std::string::npos;
      for (auto candidate : allowed) {
        const auto d = edit_distance(key, candidate);
        if (d < best_d) {
          best_d = d;
          best = candidate;
        }
      }
      fail(join_path(path, key), "unknown key '" + key + "'; nearest valid key is '" + std::string(best) + "'");
    }
  }

  std::optional<double> number(const json& j, const std::string& path) {
    if (!j.is_number()) {
      fail(path, "expected a number");
      return std::nullopt;
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      fail(path, "expected a finite number");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::string> string(const json& j, const std::string& path) {
    if (!j.is_string()) {
      fail(path, "expected a string");
      return std::nullopt;
    }
    return j.get<std::string>();
  }

  std::vector<double> numbers(const json& j, const std::string& path) {
    std::vector<double> out;
    if (!j.is_array()) {
      fail(path, "expected an array of numbers");
      return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (auto v = number(j[i], path + "[" + std::to_string(i) + "]")) out.push_back(*v);
    }
    return out;
  }

  template <typename T, typename Parse>
  std::optional<T> choice(const json& j, const std::string& path, Parse parse, std::string_view options) {
    auto s = string(j, path);
    if (!s) return std::nullopt;
    if (auto v = parse(*s)) return v;
    fail(path, "unknown value '" + *s + "'; expected one of " + std::string(options));
    return std::nullopt;
  }
};

std::optional<ModelKind> parse_kind(std::string_view s) {
  if (s == "bae") return ModelKind::bae;
  if (s == "transducer") return ModelKind::transducer;
  return std::nullopt;
}

std::optional<Mode> parse_mode(std::string_view s) {
  for (Mode m : {Mode::exact, Mode::commutative, Mode::first_order}) {
    if (mode_name(m) == s) return m;
  }
  return std::nullopt;
}

std::optional<StateKind> parse_state_kind(std::string_view s) {
  for (StateKind k : {StateKind::vacuum, StateKind::nc_vacuum, StateKind::squeezed, StateKind::thermal,
                      StateKind::explicit_cov}) {
    if (state_kind_name(k) == s) return k;
  }
  return std::nullopt;
}

std::optional<FamilyAxis> parse_axis(std::string_view s) {
  for (int i = 0; i < kFamilyAxes; ++i) {
    const auto a = static_cast<FamilyAxis>(i);
    if (family_axis_name(a) == s) return a;
  }
  return std::nullopt;
}

StateSpec read_state(Reader& r, const json& j, const std::string& path) {
  StateSpec spec;
  if (!r.object(j, path)) return spec;
  r.check_keys(j, path, {"kind", "squeeze_x", "squeeze_y", "factor", "cov", "mean"});
  if (!j.contains("kind")) {
    r.fail(path, "missing required key 'kind'");
  } else if (auto k = r.choice<StateKind>(j["kind"], path + ".kind", parse_state_kind,
                                          "vacuum, nc_vacuum, squeezed, thermal, explicit")) {
    spec.kind = *k;
  }

  auto allow = [&](std::string_view key, StateKind owner) {
    if (!j.contains(key)) return false;
    if (spec.kind != owner) {
      r.fail(join_path(path, key), "key does not apply to state kind '" + std::string(state_kind_name(spec.kind)) + "'");
      return false;
    }
    return true;
  };
  for (auto [key, slot] : {std::pair{"squeeze_x", &spec.squeeze_x}, std::pair{"squeeze_y", &spec.squeeze_y}}) {
    if (allow(key, StateKind::squeezed)) {
      if (auto v = r.number(j[key], join_path(path, key))) {
        if (*v > 0.0) *slot = *v;
        else r.fail(join_path(path, key), "squeeze factor must be positive");
      }
    }
  }
  if (allow("factor", StateKind::thermal)) {
    if (auto v = r.number(j["factor"], path + ".factor")) {
      if (*v >= 1.0) spec.factor = *v;
      else r.fail(path + ".factor", "thermal factor must be >= 1");
    }
  }
  if (allow("cov", StateKind::explicit_cov)) {
    const auto& c = j["cov"];
    if (!c.is_array() || c.size() != kPartyDim) {
      r.fail(path + ".cov", "expected a 4x4 nested array");
    } else {
      for (std::size_t i = 0; i < c.size(); ++i) {
        auto row = r.numbers(c[i], path + ".cov[" + std::to_string(i) + "]");
        if (row.size() != kPartyDim) {
          r.fail(path + ".cov[" + std::to_string(i) + "]", "expected 4 entries");
          row.resize(kPartyDim, 0.0);
        }
        spec.cov.insert(spec.cov.end(), row.begin(), row.end());
      }
    }
  } else if (spec.kind == StateKind::explicit_cov) {
    r.fail(path, "explicit state requires 'cov'");
  }
  if (j.contains("mean")) {
    spec.mean = r.numbers(j["mean"], path + ".mean");
    if (spec.mean.size() != kPartyDim) r.fail(path + ".mean", "expected 4 entries");
  }
  return spec;
}

SearchSpec read_search(Reader& r, const json& j, const std::string& path) {
  SearchSpec spec;
  if (!r.object(j, path)) return spec;
  r.check_keys(j, path, {"family", "axes", "budget", "seed"});
  if (j.contains("family")) {
    if (auto s = r.string(j["family"], path + ".family")) {
      if (!ProbeFamily::preset(*s, {})) r.fail(path + ".family", "unknown family '" + *s + "'; expected diagonal_squeezed or gaussian");
      spec.family = *s;
    }
  }
  if (j.contains("budget")) {
    if (!j["budget"].is_number_integer() || j["budget"].get<std::int64_t>() < 1) {
      r.fail(path + ".budget", "expected an integer >= 1");
    } else {
      spec.budget = j["budget"].get<std::int64_t>();
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) r.fail(path + ".seed", "expected a non-negative integer");
    else spec.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("axes")) {
    const auto& axes = j["axes"];
    if (r.object(axes, path + ".axes")) {
      for (const auto& item : axes.items()) {
        const std::string apath = path + ".axes." + item.key();
        const auto axis = parse_axis(item.key());
        if (!axis) {
          r.fail(apath, "unknown family axis");
          continue;
        }
        if (!r.object(item.value(), apath)) continue;
        r.check_keys(item.value(), apath, {"lo", "hi", "log"});
        AxisRange range;
        auto lo = item.value().contains("lo") ? r.number(item.value()["lo"], apath + ".lo") : std::nullopt;
        auto hi = item.value().contains("hi") ? r.number(item.value()["hi"], apath + ".hi") : std::nullopt;
        if (!lo || !hi) {
          r.fail(apath, "axis range requires numeric 'lo' and 'hi'");
          continue;
        }
        range.lo = *lo;
        range.hi = *hi;
        if (item.value().contains("log")) {
          if (!item.value()["log"].is_boolean()) r.fail(apath + ".log", "expected a boolean");
          else range.log_scale = item.value()["log"].get<bool>();
        }
        const bool positive = *axis == FamilyAxis::squeeze_x || *axis == FamilyAxis::squeeze_y ||
                              *axis == FamilyAxis::thermal_x || *axis == FamilyAxis::thermal_y;
        if (range.lo > range.hi) r.fail(apath, "lo must not exceed hi");
        if ((range.log_scale || positive) && !(range.lo > 0.0)) r.fail(apath, "range must be positive");
        spec.axes.push_back({*axis, range});
      }
    }
  }
  return spec;
}

SweepSpec read_sweep(Reader& r, const json& j, const std::string& path) {
  SweepSpec spec;
  if (!r.object(j, path)) return spec;
  r.check_keys(j, path, {"theta", "eta", "gain"});
  for (auto [key, slot] : {std::pair{"theta", &spec.theta}, std::pair{"eta", &spec.eta}, std::pair{"gain", &spec.gain}}) {
    if (!j.contains(key)) continue;
    *slot = r.numbers(j[key], join_path(path, key));
    if (slot->empty()) r.fail(join_path(path, key), "sweep axis must not be empty");
  }
  return spec;
}

json state_to_json(const StateSpec& s) {
  json j{{"kind", state_kind_name(s.kind)}};
  switch (s.kind) {
    case StateKind::squeezed:
      j["squeeze_x"] = s.squeeze_x;
      j["squeeze_y"] = s.squeeze_y;
      break;
    case StateKind::thermal: j["factor"] = s.factor; break;
    case StateKind::explicit_cov: {
      json rows = json::array();
      for (int i = 0; i < kPartyDim; ++i) {
        rows.push_back(std::vector<double>(s.cov.begin() + i * kPartyDim, s.cov.begin() + (i + 1) * kPartyDim));
      }
      j["cov"] = rows;
      break;
    }
    default: break;
  }
  if (!s.mean.empty()) j["mean"] = s.mean;
  return j;
}

}  // namespace

std::string_view state_kind_name(StateKind kind) {
  switch (kind) {
    case StateKind::vacuum: return "vacuum";
    case StateKind::nc_vacuum: return "nc_vacuum";
    case StateKind::squeezed: return "squeezed";
    case StateKind::thermal: return "thermal";
    case StateKind::explicit_cov: return "explicit";
  }
  return "?";
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

GaussianState build_party_state(const StateSpec& spec, const DeformationParams& params) {
  Eigen::MatrixXd cov;
  switch (spec.kind) {
    case StateKind::vacuum: cov = vacuum_covariance(params); break;
    case StateKind::nc_vacuum: cov = algebra_ground_covariance(params); break;
    case StateKind::squeezed: cov = squeezed_covariance(params, spec.squeeze_x, spec.squeeze_y); break;
    case StateKind::thermal: cov = spec.factor * vacuum_covariance(params); break;
    case StateKind::explicit_cov:
      if (spec.cov.size() != kPartyDim * kPartyDim) throw DimensionError("explicit covariance must have 16 entries");
      cov = Eigen::Map<const Eigen::Matrix<double, kPartyDim, kPartyDim, Eigen::RowMajor>>(spec.cov.data());
      break;
  }
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(kPartyDim);
  if (!spec.mean.empty()) {
    if (spec.mean.size() != kPartyDim) throw DimensionError("state mean must have 4 entries");
    mean = Eigen::Map<const Eigen::VectorXd>(spec.mean.data(), kPartyDim);
  }
  return make_state(std::move(mean), std::move(cov), commutation_matrix(params, 1));
}

ProbeFamily SearchSpec::resolve(const DeformationParams& params) const {
  auto f = ProbeFamily::preset(family, params);
  if (!f) throw ParameterError("unknown probe family '" + family + "'");
  for (const auto& o : axes) f->axis(o.axis) = o.range;
  return *f;
}

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError({std::string("scenario is not valid JSON: ") + e.what()});
  }
  Reader r;
  Scenario sc;
  if (!r.object(doc, "scenario")) throw ValidationError(r.problems);

  r.check_keys(doc, "", {"schema_version", "name", "preset", "params", "model", "object_state", "probe_state",
                         "center_probe", "relations", "pair", "search", "sweep", "output"});

  if (!doc.contains("schema_version")) {
    r.fail("schema_version", "missing required key");
  } else if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() != kSchemaVersion) {
    throw ValidationError({"schema_version: unsupported version " + doc["schema_version"].dump() + "; this build reads version " +
                           std::to_string(kSchemaVersion)});
  }
  if (doc.contains("name")) {
    if (auto s = r.string(doc["name"], "name")) sc.name = *s;
  }

  bool hbar_given = false;
  if (doc.contains("params") && r.object(doc["params"], "params")) {
    const auto& p = doc["params"];
    r.check_keys(p, "params", {"hbar", "theta", "eta"});
    if (p.contains("hbar")) {
      hbar_given = true;
      if (auto v = r.number(p["hbar"], "params.hbar")) sc.params.hbar = *v;
    }
    if (p.contains("theta")) {
      if (auto v = r.number(p["theta"], "params.theta")) sc.params.theta = *v;
    }
    if (p.contains("eta")) {
      if (auto v = r.number(p["eta"], "params.eta")) sc.params.eta = *v;
    }
  }
  if (doc.contains("preset")) {
    if (auto s = r.string(doc["preset"], "preset")) {
      if (*s != kPresetHalfbar) {
        r.fail("preset", "unknown preset '" + *s + "'; expected ozawa_halfbar");
      } else {
        sc.preset = *s;
        if (hbar_given && sc.params.hbar != 0.5) r.fail("params.hbar", "conflicts with preset ozawa_halfbar (hbar = 0.5)");
        sc.params.hbar = 0.5;
      }
    }
  }
  try {
    sc.params.validate();
  } catch (const Error& e) {
    r.fail("params", e.what());
  }

  if (!doc.contains("model")) {
    r.fail("model", "missing required key");
  } else if (r.object(doc["model"], "model")) {
    const auto& m = doc["model"];
    r.check_keys(m, "model", {"kind", "mode", "gain"});
    if (!m.contains("kind")) r.fail("model.kind", "missing required key");
    else if (auto k = r.choice<ModelKind>(m["kind"], "model.kind", parse_kind, "bae, transducer")) sc.kind = *k;
    if (m.contains("mode")) {
      if (auto md = r.choice<Mode>(m["mode"], "model.mode", parse_mode, "exact, commutative, first_order")) sc.mode = *md;
    }
    if (m.contains("gain")) {
      if (auto g = r.number(m["gain"], "model.gain")) sc.gain = *g;
    }
    if (sc.kind == ModelKind::bae) {
      if (!sc.gain) r.fail("model.gain", "bae model requires a gain");
      else if (*sc.gain == 0.0) r.fail("model.gain", "gain must be nonzero");
    } else if (sc.gain && *sc.gain != 1.0) {
      r.fail("model.gain", "transducer has no gain parameter");
    }
  }

  if (doc.contains("object_state")) sc.object_state = read_state(r, doc["object_state"], "object_state");
  if (doc.contains("probe_state")) sc.probe_state = read_state(r, doc["probe_state"], "probe_state");
  if (doc.contains("center_probe")) {
    if (!doc["center_probe"].is_boolean()) r.fail("center_probe", "expected a boolean");
    else sc.center_probe = doc["center_probe"].get<bool>();
  }

  if (doc.contains("relations")) {
    sc.relations.clear();
    const auto& rel = doc["relations"];
    if (!rel.is_array()) {
      r.fail("relations", "expected an array of relation ids");
    } else {
      for (std::size_t i = 0; i < rel.size(); ++i) {
        const std::string path = "relations[" + std::to_string(i) + "]";
        auto s = r.string(rel[i], path);
        if (!s) continue;
        const auto id = parse_relation(*s);
        if (!id) {
          std::string best;
          std::size_t best_d = std::string::npos;
          for (auto c : relation_catalog()) {
            if (edit_distance(*s, relation_name(c)) < best_d) {
              best_d = edit_distance(*s, relation_name(c));
              best = relation_name(c);
            }
          }
          r.fail(path, "unknown relation id '" + *s + "'; nearest is '" + best + "'");
          continue;
        }
        if (!relation_applies(*id, sc.kind)) {
          r.fail(path, "relation '" + *s + "' does not apply to a " + std::string(model_kind_name(sc.kind)) + " model");
        }
        sc.relations.push_back(*id);
      }
    }
  }

  if (doc.contains("pair")) {
    const auto& p = doc["pair"];
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string()) {
      r.fail("pair", "expected two label strings");
    } else {
      const auto a = parse_label(p[0].get<std::string>()), b = parse_label(p[1].get<std::string>());
      if (!a) r.fail("pair[0]", "unknown label '" + p[0].get<std::string>() + "'");
      if (!b) r.fail("pair[1]", "unknown label '" + p[1].get<std::string>() + "'");
      if (a && b) {
        sc.pair = {*a, *b};
        if (*a != Label::X_a && *a != Label::Y_a) r.fail("pair[0]", "noise is defined for measured labels X_a and Y_a");
        if (!is_object(*b)) r.fail("pair[1]", "disturbance is defined for object labels");
      }
    }
  }
  if (sc.pair != kDefaultPair) {
    for (auto id : sc.relations) {
      if (id == RelationId::ncoup_bae_eq82 || id == RelationId::ncoup_bae_reduced_eq86 ||
          id == RelationId::window_eq86_1 || id == RelationId::ncoup_transducer_eq_nl15) {
        r.fail("pair", "relation '" + std::string(relation_name(id)) + "' is stated for the pair (X_a, P_Xa) only");
      }
    }
  }

  if (doc.contains("search")) {
    sc.search = read_search(r, doc["search"], "search");
    if (sc.kind != ModelKind::bae) r.fail("search", "probe search requires a bae model");
  }
  if (doc.contains("sweep")) {
    sc.sweep = read_sweep(r, doc["sweep"], "sweep");
    for (std::size_t i = 0; i < sc.sweep->theta.size(); ++i) {
      if (sc.sweep->theta[i] < 0.0) r.fail("sweep.theta[" + std::to_string(i) + "]", "theta must be >= 0");
    }
    for (std::size_t i = 0; i < sc.sweep->eta.size(); ++i) {
      if (sc.sweep->eta[i] < 0.0) r.fail("sweep.eta[" + std::to_string(i) + "]", "eta must be >= 0");
    }
    for (std::size_t i = 0; i < sc.sweep->gain.size(); ++i) {
      if (sc.sweep->gain[i] == 0.0) r.fail("sweep.gain[" + std::to_string(i) + "]", "gain must be nonzero");
    }
    if (sc.kind == ModelKind::transducer && !sc.sweep->gain.empty()) r.fail("sweep.gain", "transducer has no gain axis");
  }

  sc.output.stem = sc.name;
  if (doc.contains("output") && r.object(doc["output"], "output")) {
    const auto& o = doc["output"];
    r.check_keys(o, "output", {"formats", "dir", "stem"});
    if (o.contains("formats")) {
      sc.output.formats.clear();
      if (!o["formats"].is_array()) {
        r.fail("output.formats", "expected an array");
      } else {
        for (const auto& f : o["formats"]) {
          if (!f.is_string() || (f.get<std::string>() != "json" && f.get<std::string>() != "csv")) {
            r.fail("output.formats", "unsupported format " + f.dump() + "; formats are 'json' and 'csv'");
          } else {
            sc.output.formats.push_back(f.get<std::string>());
          }
        }
      }
    }
    if (o.contains("dir")) {
      if (auto s = r.string(o["dir"], "output.dir")) sc.output.dir = *s;
    }
    if (o.contains("stem")) {
      if (auto s = r.string(o["stem"], "output.stem")) sc.output.stem = *s;
    }
  }

  if (!r.problems.empty()) throw ValidationError(r.problems);

  // Moment checks need a well-formed document.
  const auto effective = sc.mode == Mode::commutative ? sc.params.commutative_limit() : sc.params;
  std::vector<std::pair<std::string, AdmissibilityError>> inadmissible;
  for (auto [path, spec] : {std::pair{"object_state", &sc.object_state}, std::pair{"probe_state", &sc.probe_state}}) {
    try {
      build_party_state(*spec, effective);
    } catch (const AdmissibilityError& e) {
      inadmissible.emplace_back(path, e);
      r.fail(path, e.what());
    } catch (const Error& e) {
      r.fail(path, e.what());
    }
  }
  if (r.problems.size() == 1 && inadmissible.size() == 1) {
    const auto& [path, e] = inadmissible.front();
    throw AdmissibilityError(path + ": " + e.what(), e.min_eigenvalue());
  }
  if (!r.problems.empty()) throw ValidationError(r.problems);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError({path + ": cannot open scenario file"});
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const AdmissibilityError& e) {
    throw AdmissibilityError(path + ": " + e.what(), e.min_eigenvalue());
  } catch (const ValidationError& e) {
    auto problems = e.problems();
    for (auto& p : problems) p = path + ": " + p;
    throw ValidationError(std::move(problems));
  }
}

std::string serialize_scenario(const Scenario& sc) {
  json doc;
  doc["schema_version"] = sc.schema_version;
  doc["name"] = sc.name;
  if (sc.preset) doc["preset"] = *sc.preset;
  doc["params"] = {{"hbar", sc.params.hbar}, {"theta", sc.params.theta}, {"eta", sc.params.eta}};
  doc["model"] = {{"kind", model_kind_name(sc.kind)}, {"mode", mode_name(sc.mode)}};
  if (sc.gain) doc["model"]["gain"] = *sc.gain;
  doc["object_state"] = state_to_json(sc.object_state);
  doc["probe_state"] = state_to_json(sc.probe_state);
  doc["center_probe"] = sc.center_probe;
  doc["relations"] = json::array();
  for (auto id : sc.relations) doc["relations"].push_back(relation_name(id));
  doc["pair"] = {label_name(sc.pair.first), label_name(sc.pair.second)};
  if (sc.search) {
    json s{{"family", sc.search->family}, {"budget", sc.search->budget}, {"seed", sc.search->seed}};
    if (!sc.search->axes.empty()) {
      s["axes"] = json::object();
      for (const auto& o : sc.search->axes) {
        s["axes"][std::string(family_axis_name(o.axis))] = {{"lo", o.range.lo}, {"hi", o.range.hi}, {"log", o.range.log_scale}};
      }
    }
    doc["search"] = s;
  }
  if (sc.sweep) {
    json s = json::object();
    if (!sc.sweep->theta.empty()) s["theta"] = sc.sweep->theta;
    if (!sc.sweep->eta.empty()) s["eta"] = sc.sweep->eta;
    if (!sc.sweep->gain.empty()) s["gain"] = sc.sweep->gain;
    doc["sweep"] = s;
  }
  doc["output"] = {{"formats", sc.output.formats}, {"dir", sc.output.dir}, {"stem", sc.output.stem}};
  return doc.dump(2) + "\n";
}

MeasurementModel scenario_model(const Scenario& sc) { return build_model(sc.kind, sc.params, sc.gain, sc.mode); }

GaussianState scenario_state(const Scenario& sc, const MeasurementModel& model) {
  auto state = product_state(build_party_state(sc.object_state, model.params),
                             build_party_state(sc.probe_state, model.params));
  return sc.center_probe ? center_probe(state) : state;
}

}  // namespace ncoup

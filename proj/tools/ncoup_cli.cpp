#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncoup/error.hpp"
#include "ncoup/report.hpp"
#include "ncoup/scenario.hpp"
#include "ncoup/verify.hpp"
#include "ncoup/version.hpp"

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kComputation = 2, kVerification = 3 };

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> budget;
  std::optional<std::string> out;
};

std::filesystem::path output_dir(const GlobalOptions& g, const ncoup::Scenario& sc) {
  return g.out ? std::filesystem::path(*g.out) : std::filesystem::path(sc.output.dir);
}

void print_relations(const ncoup::RunReport& r) {
  std::printf("%-26s %22s %22s %22s  %s\n", "relation_id", "lhs", "rhs", "slack", "satisfied");
  for (const auto& rep : r.relations) {
    std::printf("%-26s %22.15g %22.15g %22.15g  %s\n", std::string(ncoup::relation_name(rep.relation)).c_str(),
                rep.lhs, rep.rhs, rep.slack, rep.satisfied ? "yes" : "no");
  }
}

void print_search(const ncoup::RunReport& r) {
  if (!r.search) return;
  const auto& s = *r.search;
  std::printf("search family %s: %lld evaluations, min eps_C*chi_C = %.17g, window hits %lld, verdict %s\n",
              s.family_name.c_str(), static_cast<long long>(s.evaluations), s.best_value,
              static_cast<long long>(s.window_hit_count), std::string(ncoup::feasibility_name(s.verdict)).c_str());
  std::printf("finding: %s\n", s.certificate.finding.c_str());
}

void print_written(const std::vector<std::filesystem::path>& paths) {
  for (const auto& p : paths) std::printf("wrote %s\n", p.string().c_str());
}

// "theta=0,0.01" -> axis values; the Greek and gain aliases are accepted.
void apply_axis(ncoup::SweepSpec& spec, const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ncoup::ValidationError({"--axis expects name=v1,v2,...: '" + text + "'"});
  const std::string name = text.substr(0, eq);
  std::vector<double>* slot = nullptr;
  if (name == "theta" || name == "θ") slot = &spec.theta;
  else if (name == "eta" || name == "η") slot = &spec.eta;
  else if (name == "gain" || name == "G") slot = &spec.gain;
  else throw ncoup::ValidationError({"--axis: unknown axis '" + name + "'; expected theta, eta or gain"});
  slot->clear();
  std::string rest = text.substr(eq + 1);
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    const auto comma = rest.find(',', pos);
    const std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) {
      try {
        std::size_t used = 0;
        slot->push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ncoup::ValidationError({"--axis " + name + ": '" + item + "' is not a number"});
      }
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (slot->empty()) throw ncoup::ValidationError({"--axis " + name + ": axis must not be empty"});
}

int report_error(const std::string& context, const ncoup::Error& e) {
  std::fprintf(stderr, "error: %s%s\n", context.empty() ? "" : (context + ": ").c_str(), e.what());
  return e.category() == ncoup::Error::Category::validation ? kValidation : kComputation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise/disturbance relations on the deformed Heisenberg-Weyl algebra"};
  app.set_version_flag("--version", std::string(ncoup::kToolVersion));
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Override the search seed");
  app.add_option("--budget", global.budget, "Override the search evaluation budget")->check(CLI::PositiveNumber);
  app.add_option("--out", global.out, "Output directory (default: the scenario's output.dir)");

  std::string run_file, sweep_file, search_file;
  std::vector<std::string> axes;
  auto* run_cmd = app.add_subcommand("run", "Evaluate a scenario and write its report");
  run_cmd->add_option("file", run_file, "Scenario JSON")->required();
  auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate a scenario over a theta/eta/gain grid");
  sweep_cmd->add_option("file", sweep_file, "Scenario JSON")->required();
  sweep_cmd->add_option("--axis", axes, "Grid axis, e.g. theta=0,0.01 (repeatable)");
  auto* search_cmd = app.add_subcommand("search", "Search the probe family for violation-window states");
  search_cmd->add_option("file", search_file, "Scenario JSON")->required();
  auto* verify_cmd = app.add_subcommand("verify", "Run the built-in oracle suite");

  // Global options may follow the subcommand as well.
  for (auto* sub : {run_cmd, sweep_cmd, search_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  std::string context;
  try {
    if (*run_cmd || *search_cmd) {
      const auto& file = *run_cmd ? run_file : search_file;
      auto scenario = ncoup::load_scenario(file);
      context = file;
      if (*search_cmd && !scenario.search) scenario.search = ncoup::SearchSpec{};
      const auto report = ncoup::run(scenario, {global.seed, global.budget, false});
      print_relations(report);
      print_search(report);
      print_written(ncoup::write_report(report, output_dir(global, scenario)));
      return kOk;
    }
    if (*sweep_cmd) {
      const auto scenario = ncoup::load_scenario(sweep_file);
      context = sweep_file;
      std::optional<ncoup::SweepSpec> grid;
      if (!axes.empty()) {
        grid = scenario.sweep.value_or(ncoup::SweepSpec{});
        for (const auto& a : axes) apply_axis(*grid, a);
      }
      const auto table = ncoup::sweep(scenario, grid);
      std::size_t ok = 0;
      for (const auto& row : table.rows) ok += row.status == "ok";
      std::printf("%zu rows (%zu ok)\n", table.rows.size(), ok);
      print_written(ncoup::write_sweep(table, scenario, output_dir(global, scenario)));
      return kOk;
    }
    if (*verify_cmd) {
      const auto report = ncoup::run_verification();
      for (const auto& c : report.checks) {
        std::printf("[%s] %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
      }
      return report.passed() ? kOk : kVerification;
    }
  } catch (const ncoup::Error& e) {
    return report_error(context, e);
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s%s\n", context.empty() ? "" : (context + ": ").c_str(), e.what());
    return kComputation;
  }
  return kOk;
}

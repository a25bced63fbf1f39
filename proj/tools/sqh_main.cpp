// Command-line front end: run, sweep, builtin.
//
// Exit codes: 0 ok, 2 unreadable or invalid input, 3 a failed inequality or
// an internal inconsistency, 4 a resource cap.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sqh/error.hpp"
#include "sqh/scenario.hpp"

namespace {

int exit_code(sqh::ErrorKind kind) {
  switch (kind) {
    case sqh::ErrorKind::ResourceCap:
    case sqh::ErrorKind::GroupTooLarge:
      return 4;
    case sqh::ErrorKind::BoundViolation:
    case sqh::ErrorKind::Inconsistency:
    case sqh::ErrorKind::CorruptComplex:
      return 3;
    default:
      return 2;
  }
}

void emit(const nlohmann::json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw sqh::Error(sqh::ErrorKind::InvalidParameter, "cannot write " + out_path);
    out << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Betti numbers of finite group quotients of spheres, checked against their bounds"};
  app.require_subcommand(1);

  sqh::RunOptions run_opts;
  run_opts.simplex_cap = sqh::simplex_cap_from_env();

  auto* run = app.add_subcommand("run", "Run a scenario file");
  std::string scenario_path, out_path;
  bool certified = false, timings = false;
  run->add_option("file", scenario_path, "Scenario JSON")->required();
  run->add_option("--out", out_path, "Also write the report here");
  run->add_flag("--certified", certified, "Force certified rational ranks");
  run->add_flag("--timings", timings, "Include per-stage wall-clock times (breaks byte determinism)");
  run->add_option("--budget-seconds", run_opts.budget_seconds, "Wall-clock budget per scenario");
  run->add_option("--crosscheck-max-simplices", run_opts.crosscheck_cap,
                  "Largest complex built for the simplicial-quotient cross-check");

  auto* sw = app.add_subcommand("sweep", "Random abelian character scenarios");
  sqh::SweepOptions sweep_opts;
  sweep_opts.run.crosscheck_cap = 50'000;
  std::vector<std::string> sweep_fields;
  std::string sweep_out;
  sw->add_option("--n-max", sweep_opts.n_max, "Largest ambient dimension")->check(CLI::Range(1, 8));
  sw->add_option("--samples", sweep_opts.samples, "Number of scenarios");
  sw->add_option("--seed", sweep_opts.seed, "Generator seed");
  sw->add_option("--jobs", sweep_opts.jobs, "Concurrent scenarios")->check(CLI::Range(1, 64));
  sw->add_option("--fields", sweep_fields, "Fields, e.g. Q Fp:2");
  sw->add_option("--out", sweep_out, "Also write the summary here");
  sw->add_option("--crosscheck-max-simplices", sweep_opts.run.crosscheck_cap,
                 "Largest complex built for the simplicial-quotient cross-check");

  auto* bi = app.add_subcommand("builtin", "Run or print a catalog scenario");
  std::string builtin_name, builtin_out;
  std::vector<std::int64_t> builtin_params;
  bool emit_scenario = false;
  bi->add_option("name", builtin_name, "Catalog name")->required();
  bi->add_option("params", builtin_params, "Integer parameters");
  bi->add_flag("--emit-scenario", emit_scenario, "Print the scenario JSON instead of running it");
  bi->add_option("--out", builtin_out, "Also write the output here");
  bi->add_flag("--certified", certified, "Force certified rational ranks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      const sqh::Scenario s = sqh::load_scenario(scenario_path);
      if (certified) run_opts.certified = true;
      run_opts.timings = timings;
      const sqh::RunResult r = sqh::run_scenario(s, run_opts);
      emit(r.report, out_path);
      if (!r.ok()) {
        std::cerr << "inequality failure in scenario " << s.name << "\n";
        for (const auto& f : r.failures) std::cerr << "  " << f << "\n";
        std::cerr << "scenario for replay:\n" << sqh::to_json(s).dump(2) << "\n";
        return 3;
      }
      return 0;
    }
    if (sw->parsed()) {
      if (!sweep_fields.empty()) {
        sweep_opts.fields.clear();
        for (const auto& f : sweep_fields) sweep_opts.fields.push_back(sqh::FieldSpec::parse(f));
      }
      sweep_opts.run.simplex_cap = run_opts.simplex_cap;
      const sqh::SweepResult r = sqh::sweep(sweep_opts);
      emit(r.report, sweep_out);
      if (!r.ok()) {
        std::cerr << r.failed << " sweep scenario(s) failed; replay data is under \"failures\"\n";
        return 3;
      }
      return 0;
    }
    if (bi->parsed()) {
      const sqh::Scenario s = sqh::builtin(builtin_name, builtin_params);
      if (emit_scenario) {
        emit(sqh::to_json(s), builtin_out);
        return 0;
      }
      if (certified) run_opts.certified = true;
      const sqh::RunResult r = sqh::run_scenario(s, run_opts);
      emit(r.report, builtin_out);
      if (!r.ok()) {
        for (const auto& f : r.failures) std::cerr << "  " << f << "\n";
        return 3;
      }
      return 0;
    }
  } catch (const sqh::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

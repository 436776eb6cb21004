// chemdecarb: synthesize asset tables, run scenario pathways, and build
// capital reports.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "chemdecarb/json_util.hpp"
#include "chemdecarb/pipeline.hpp"

namespace fs = std::filesystem;
using namespace chemdecarb;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kIoError = 3;

struct RunArgs {
  std::string assets, catalog, finance, prices, growth, storage, trajectories, out;
  std::vector<std::string> scenarios;
  bool frozen_reference = false;
  std::uint64_t seed = 0;
};

ScenarioParams scenario_arg(const std::string& s) {
  for (const std::string& p : preset_names())
    if (p == s) return preset(s);
  return load_scenario(s);
}

struct SynthArgs {
  std::string spec, out, region, process;
  std::optional<std::uint64_t> seed;
};

int cmd_synth(const SynthArgs& a) {
  SynthesisSpec spec = load_synthesis_spec(a.spec);
  if (a.seed) spec.seed = *a.seed;
  AssetTable table = synthesize_assets(spec);
  // Subsets are cut after synthesis so they match the full table row for row.
  if (!a.region.empty()) {
    const Region region = region_from(a.region);
    std::erase_if(table.rows, [&](const AssetRecord& r) { return r.region != region; });
  }
  if (!a.process.empty()) {
    const Process process = process_from(a.process);
    std::erase_if(table.rows, [&](const AssetRecord& r) { return r.process != process; });
  }
  const std::string& spec_path = a.spec;
  const std::string& out = a.out;
  fs::create_directories(out);
  save_asset_table(fs::path(out) / "assets.csv", table);
  write_manifest(out, {{"spec", spec_path}},
                 {{"command", "synth"},
                  {"seed", spec.seed},
                  {"region", a.region},
                  {"process", a.process},
                  {"assets", table.size()}});
  std::cout << "wrote " << table.size() << " assets to " << (fs::path(out) / "assets.csv").string()
            << "\n";
  return kOk;
}

int cmd_run(const RunArgs& a) {
  const AssetTable assets = load_asset_table(a.assets);
  const ValidationReport report = validate_assets(assets);
  if (!report.clean()) {
    std::cerr << "asset validation failed:\n" << report.summary();
    return kInputError;
  }
  ModelConfig cfg = default_model_config();
  std::vector<ManifestInput> inputs{{"assets", a.assets}};
  if (!a.catalog.empty()) {
    cfg.catalog = catalog_from_json(json_util::read_file(a.catalog));
    inputs.push_back({"catalog", a.catalog});
  }
  if (!a.finance.empty()) {
    cfg.finance = finance_from_json(json_util::read_file(a.finance));
    inputs.push_back({"finance", a.finance});
  }
  if (!a.prices.empty()) {
    cfg.prices = prices_from_json(json_util::read_file(a.prices));
    inputs.push_back({"prices", a.prices});
  }
  if (!a.growth.empty()) {
    cfg.growth = growth_config_from_json(json_util::read_file(a.growth));
    inputs.push_back({"growth", a.growth});
  }
  if (!a.storage.empty()) {
    cfg.storage = storage_from_json(json_util::read_file(a.storage));
    inputs.push_back({"storage", a.storage});
  }
  if (!a.trajectories.empty()) {
    cfg.factors = emission_factors_from_json(json_util::read_file(a.trajectories));
    inputs.push_back({"trajectories", a.trajectories});
  }
  std::vector<ScenarioParams> scenarios;
  nlohmann::json ids = nlohmann::json::array();
  for (const std::string& s : a.scenarios) {
    scenarios.push_back(scenario_arg(s));
    ids.push_back(scenarios.back().id);
    if (fs::exists(s)) inputs.push_back({"scenario", s});
  }
  RunOptions opts;
  opts.frozen_reference = a.frozen_reference;
  const ModelRun run = run_model(assets, cfg, scenarios, opts);
  write_run_outputs(a.out, run);
  write_manifest(a.out, inputs,
                 {{"command", "run"},
                  {"scenarios", ids},
                  {"seed", a.seed},
                  {"frozen_reference", a.frozen_reference}});
  for (const auto& [r, c] : run.newbuilds.untemplated)
    std::cerr << "note: no " << to_string(c) << " template for " << to_string(r)
              << " new builds; growth left unserved\n";
  for (const ScenarioOutcome& o : run.outcomes) {
    int unfinished = 0;
    for (const DeploymentSchedule& s : o.plan.schedules)
      if (!s.unabated.empty()) ++unfinished;
    std::cout << o.scenario.id << ": " << o.pathway.status.size() << " projects, "
              << o.pathway.total_capex / 1e9 << " B$ capex, " << unfinished
              << " cells with unabated facilities\n";
  }
  return kOk;
}

int cmd_report(const std::string& dir) {
  const CapitalTable t = read_capital_table(dir);
  write_report(dir, t);
  std::cout << format_capital_table(t);
  return kOk;
}

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << " (earliest feasible year "
              << e.earliest_feasible_year() << ")\n";
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const StorageExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIoError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Facility-level chemical industry decarbonization pathways"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  SynthArgs sa;
  std::uint64_t seed = 0;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic asset table");
  synth->add_option("--spec", sa.spec, "Synthesis spec (JSON)")->required();
  auto* seed_opt = synth->add_option("--seed", seed, "Override the spec seed");
  synth->add_option("--out", sa.out, "Output directory")->required();
  synth->add_option("--region", sa.region, "Keep only this region");
  synth->add_option("--process", sa.process, "Keep only this process");

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Plan and evaluate scenario pathways");
  run->add_option("--assets", ra.assets, "Asset table (CSV)")->required();
  run->add_option("--scenario", ra.scenarios, "Preset (SU, GA, GG) or scenario JSON; repeatable")
      ->required();
  run->add_option("--catalog", ra.catalog, "Abatement catalog (JSON)");
  run->add_option("--finance", ra.finance, "Finance parameters (JSON)");
  run->add_option("--prices", ra.prices, "Regional prices (JSON)");
  run->add_option("--growth", ra.growth, "Growth config (JSON)");
  run->add_option("--storage", ra.storage, "Storage sites (JSON)");
  run->add_option("--trajectories", ra.trajectories, "Emission factor anchors (JSON)");
  run->add_option("--out", ra.out, "Output directory")->required();
  run->add_flag("--frozen-reference", ra.frozen_reference, "Also emit the frozen-intensity REF series");
  // Runs are deterministic; the seed is only recorded in the manifest.
  run->add_option("--seed", ra.seed, "Recorded in the manifest");

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Summarize a run directory");
  report->add_option("--run,run_dir", report_dir, "Run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  if (*synth)
    return guarded([&] {
      if (*seed_opt) sa.seed = seed;
      return cmd_synth(sa);
    });
  if (*run) return guarded([&] { return cmd_run(ra); });
  return guarded([&] { return cmd_report(report_dir); });
}

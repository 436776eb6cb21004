#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <catch_amalgamated.hpp>

#include <nlohmann/json.hpp>

#include "builders.hpp"

using namespace chemdecarb;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("chemdecarb_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::vector<std::vector<std::string>> rows_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> out;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    out.push_back(cells);
  }
  return out;
}

std::size_t col(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  REQUIRE(it != header.end());
  return static_cast<std::size_t>(it - header.begin());
}

const ModelRun& na_run() {
  static const AssetTable assets = load_asset_table(build::fixture("na_crackers_2023.csv"));
  static const ModelConfig cfg = default_model_config();
  static const ModelRun run = [] {
    RunOptions o;
    o.frozen_reference = true;
    return run_model(assets, cfg, {preset("SU"), preset("GA")}, o);
  }();
  return run;
}

}  // namespace

TEST_CASE("run writes every output with its header") {
  TempDir dir("pipeline_outputs");
  write_run_outputs(dir.path, na_run());
  const std::map<std::string, std::string> first_column{
      {"schedule.csv", "scenario"},   {"capex_annual.csv", "scenario"},
      {"lcoa_projects.csv", "scenario"}, {"emissions.csv", "year"},
      {"storage.csv", "scenario"},    {"completion.csv", "scenario"}};
  for (const auto& [file, head] : first_column) {
    INFO(file);
    REQUIRE(fs::exists(dir.path / file));
    const auto rows = rows_of(dir.path / file);
    REQUIRE(rows.size() > 1);
    CHECK(rows[0][0] == head);
  }
  CHECK(fs::exists(dir.path / "decisions.jsonl"));
  const auto eff = nlohmann::json::parse(std::ifstream(dir.path / "scenario_effective.json"));
  CHECK(eff.size() == 2);
}

TEST_CASE("emissions cover 2023 to 2080 for the scenario and the frozen reference") {
  TempDir dir("pipeline_emissions");
  write_run_outputs(dir.path, na_run());
  const auto rows = rows_of(dir.path / "emissions.csv");
  const auto& h = rows[0];
  const std::size_t sc = col(h, "scenario"), yr = col(h, "year");
  std::map<std::string, std::set<int>> years;
  for (std::size_t i = 1; i < rows.size(); ++i) years[rows[i][sc]].insert(std::stoi(rows[i][yr]));
  for (const char* s : {"SU", "GA", "REF"}) {
    INFO(s);
    REQUIRE(years.count(s));
    CHECK(*years[s].begin() == 2023);
    CHECK(*years[s].rbegin() == 2080);
    CHECK(years[s].size() == 58);
  }
}

TEST_CASE("frozen reference only when requested") {
  const AssetTable assets = load_asset_table(build::fixture("na_crackers_2023.csv"));
  const ModelRun r = run_model(assets, default_model_config(), {preset("SU")});
  CHECK(r.reference.empty());
  for (const auto& [k, s] : all_emissions(r)) CHECK(k.scenario == "SU");
}

TEST_CASE("manifest hashes match the files") {
  TempDir dir("pipeline_manifest");
  write_run_outputs(dir.path, na_run());
  write_manifest(dir.path, {{"assets", build::fixture("na_crackers_2023.csv")}},
                 {{"command", "run"}, {"seed", 1}});
  const auto m = nlohmann::json::parse(std::ifstream(dir.path / "manifest.json"));
  CHECK(m.at("version") == std::string(kVersion));
  CHECK(m.at("seed") == 1);
  REQUIRE(m.at("outputs").size() >= 8);
  for (const auto& [file, hash] : m.at("outputs").items())
    CHECK(sha256_file(dir.path / file) == hash.get<std::string>());
  CHECK(m.at("inputs")[0].at("sha256") == sha256_file(build::fixture("na_crackers_2023.csv")));
  CHECK(sha256_text("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("report table totals and unfinished completion") {
  TempDir dir("pipeline_report");
  write_run_outputs(dir.path, na_run());
  const CapitalTable t = read_capital_table(dir.path);
  CHECK(t.scenarios == std::vector<std::string>{"SU", "GA"});
  for (const auto& s : t.scenarios) {
    double groups = 0.0;
    for (Group g : kReportGroups) groups += t.group_total(s, g);
    CHECK(t.total(s) == groups);
    double regions = 0.0;
    for (Region r : kRegions) regions += t.region_total(s, r);
    CHECK(t.total(s) == Catch::Approx(regions).epsilon(1e-12));
  }
  CHECK(t.completion.at({"SU", Region::NorthAmerica}) == 2050);
  const std::string text = format_capital_table(t);
  CHECK(text.find("SU") != std::string::npos);
  CHECK(text.find("GA") != std::string::npos);

  CapitalTable unfinished = t;
  unfinished.completion[{"GA", Region::NorthAmerica}] = std::nullopt;
  CHECK(format_capital_table(unfinished).find(">2080") != std::string::npos);

  write_report(dir.path, t);
  CHECK(fs::exists(dir.path / "report.csv"));
  CHECK_THROWS_AS(read_capital_table(dir.path / "absent"), InputError);
}

TEST_CASE("GG on the world fixture leaves an unabated remainder outside NA and EU") {
  const AssetTable assets = load_asset_table(build::fixture("world_2023.csv"));
  const ModelRun r = run_model(assets, default_model_config(), {preset("GG")});
  const auto& plan = r.outcomes.at(0).plan;
  int remainder = 0;
  for (const auto& s : plan.schedules)
    if ((s.region == Region::MiddleEast || s.region == Region::China) &&
        s.group != Group::chlor_alkali && !s.unabated.empty()) {
      CHECK_FALSE(s.completion_year.has_value());
      ++remainder;
    }
  CHECK(remainder > 0);
}

TEST_CASE("new-build fleet follows the outlook") {
  const ModelRun& r = na_run();
  int expected = 0;
  for (const auto& o : r.outlook) expected += static_cast<int>(o.builds.size());
  CHECK(static_cast<int>(r.newbuilds.assets.size()) <= expected);
  CHECK(r.newbuilds.assets.size() == r.newbuilds.demand_year.size());
  for (std::size_t i = 0; i < r.newbuilds.assets.size(); ++i) {
    CHECK(r.newbuilds.demand_year[i] > kBaseYear);
    CHECK(r.newbuilds.assets.rows[i].region == Region::NorthAmerica);
  }
  // Propylene has no same-process template in a cracker-only table.
  CHECK_FALSE(r.newbuilds.untemplated.empty());
}

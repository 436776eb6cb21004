#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "chemdecarb/catalog.hpp"
#include "chemdecarb/costing.hpp"
#include "chemdecarb/dataset.hpp"
#include "chemdecarb/scenario.hpp"
#include "chemdecarb/types.hpp"

namespace chemdecarb {

inline constexpr int kCapexFirstYear = 2024;

// Everything a quote needs besides the unit and the learning state.
struct PlanningContext {
  const Catalog* catalog = nullptr;
  const FinanceParams* finance = nullptr;
  const PriceTable* prices = nullptr;
  const StorageNetwork* storage = nullptr;
  const ScenarioParams* scenario = nullptr;
};

// The part of one facility that a single project abates: every member asset
// whose process falls in `group`. New builds carry the year their capacity
// is first demanded.
struct PlanningUnit {
  std::string facility_id;
  Region region = Region::NorthAmerica;
  Group group = Group::steam_crackers;
  GeoPoint location;
  std::vector<const AssetRecord*> assets;
  BuildType build = BuildType::retrofit;
  int demand_year = 0;  // new builds only
};

std::vector<PlanningUnit> planning_units(const AssetTable& table,
                                         const std::vector<Facility>& facilities);

struct AbatementProject {
  std::string facility_id;
  Region region = Region::NorthAmerica;
  Group group = Group::steam_crackers;
  TechId tech_id = TechId::ccs_postcombustion;
  BuildType build_type = BuildType::retrofit;
  int development_start = 0;
  int online_year = 0;
  double total_capex = 0.0;
  std::vector<double> outlay;  // outlay[i] is spent in development_start + i
  double abated_scope1 = 0.0;  // tCO2 / y at rated output
  double co2_to_storage = 0.0; // tCO2 / y at rated output
  double lcoa_at_decision = 0.0;
  int learning_index = 0;      // same-pool projects online at decision time
  std::string storage_site;

  double outlay_in(int year) const;
};

// Commissioning log per (technology, pool). Pools are "global" or a region.
class LearningState {
 public:
  void commission(TechId tech, Region region, int online_year);
  // Projects of `tech` visible to `region` under `pooling` that came
  // online strictly before `year`.
  int online_before(TechId tech, Region region, Pooling pooling, int year) const;
  int total_commissioned() const;
  const std::multimap<std::pair<TechId, std::string>, int>& log() const { return log_; }

 private:
  std::multimap<std::pair<TechId, std::string>, int> log_;
};

// A candidate (option, timing, quote) for one unit.
struct Selection {
  const AbatementOption* option = nullptr;
  CostQuote quote;
  int development_start = 0;
  int online_year = 0;
  int learning_index = 0;
};

enum class TimingKind { fixed_online, fixed_start };
struct Timing {
  TimingKind kind = TimingKind::fixed_start;
  int year = 0;
  // Decision year for the learning count when it precedes the start year.
  std::optional<int> decision_year;
};

// Lowest-LCOA option; ties go to the larger abatement, then tech name.
// Returns nullopt when nothing applies in the window.
std::optional<Selection> try_select_option(const PlanningUnit& unit,
                                           const Timing& timing,
                                           const LearningState& learning,
                                           const PlanningContext& ctx,
                                           const StorageUsage* used = nullptr);
// Throwing form: InputError "unabatable" when no option applies.
Selection select_option(const PlanningUnit& unit, const Timing& timing,
                        const LearningState& learning, const PlanningContext& ctx,
                        const StorageUsage* used = nullptr);

AbatementProject make_project(const PlanningUnit& unit, const Selection& sel,
                              const FinanceParams& finance);

struct Candidate {
  std::string facility_id;
  std::string tech;
  double lcoa = 0.0;
  int start = 0;
  int online = 0;
  std::string action;  // started | deferred | blocked | not_selected | unabatable
};

struct DecisionRecord {
  std::string scenario;
  Region region;
  Group group;
  int year = 0;
  std::string phase;  // deadline_slot | newbuild | cap_start
  std::vector<Candidate> candidates;
};

nlohmann::json to_json(const DecisionRecord& d);

struct DeploymentSchedule {
  std::string scenario;
  Region region = Region::NorthAmerica;
  Group group = Group::steam_crackers;
  PlanMode mode = PlanMode::deadline;
  double cap = 0.0;  // $ / y, capital-cap mode
  std::vector<AbatementProject> projects;  // in decision order
  std::vector<double> annual_capex;        // kCapexFirstYear..kHorizonYear
  std::vector<std::string> unabated;       // existing units never started
  std::vector<std::string> blocked;        // subset whose peak outlay > cap
  std::vector<int> cap_overrun_years;
  std::optional<int> completion_year;      // all existing units online
  int existing_units = 0;

  double capex_in(int year) const;
};

struct PlanResult {
  std::vector<DeploymentSchedule> schedules;
  std::vector<DecisionRecord> decisions;
  LearningState learning;
  StorageUsage storage_used;
};

struct PlanOptions {
  // Cap-mode override for single-cell studies (applies to every cap cell).
  std::optional<double> cap_override;
  // Deadline-mode override (applies to every deadline cell).
  std::optional<int> deadline_override;
};

// Plans every (region, group) cell of `units` for one scenario, stepping
// through simulated years with one learning ledger shared according to each
// technology's pooling. Throws InfeasibleError for an unreachable deadline.
PlanResult plan(const std::vector<PlanningUnit>& units, const PlanningContext& ctx,
                const PlanOptions& opts = {});

// Single-cell conveniences matching the two planning modes.
DeploymentSchedule plan_deadline(const std::vector<PlanningUnit>& units, int deadline,
                                 int initial_wave, const PlanningContext& ctx);
DeploymentSchedule plan_capital_cap(const std::vector<PlanningUnit>& units, double cap,
                                    const PlanningContext& ctx);

// Uniform per-year commissioning counts for deadline mode: (online year,
// count) pairs. Throws InfeasibleError when the window is empty.
std::vector<std::pair<int, int>> deadline_slots(int units, int deadline,
                                                const ScenarioParams& s);

std::vector<double> capex_series(const std::vector<AbatementProject>& projects);

// Rated-output consequences of a set of schedules.
struct PathwayResult {
  std::vector<double> capex;       // $ / y, kCapexFirstYear..kHorizonYear
  std::vector<double> co2_stored;  // tCO2 / y, kBaseYear..kHorizonYear
  std::vector<std::pair<std::string, double>> project_lcoa;  // facility, $/t
  std::map<std::string, std::pair<TechId, int>> status;      // facility -> (tech, online)
  double total_capex = 0.0;
};

PathwayResult simulate_pathway(const std::vector<DeploymentSchedule>& schedules,
                               int horizon = kHorizonYear);

}  // namespace chemdecarb

#include "chemdecarb/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

namespace chemdecarb {

using nlohmann::json;

namespace {

constexpr double kCapSlack = 1.0e-9;

std::string pool_key(Region r, Pooling p) {
  return p == Pooling::global ? std::string("global") : std::string(to_string(r));
}

bool better(const Selection& a, const Selection& b) {
  if (a.quote.lcoa != b.quote.lcoa) return a.quote.lcoa < b.quote.lcoa;
  if (a.quote.abated_scope1 != b.quote.abated_scope1)
    return a.quote.abated_scope1 > b.quote.abated_scope1;
  return to_string(a.option->tech_id) < to_string(b.option->tech_id);
}

bool unit_admits(const AbatementOption& opt, const PlanningUnit& u, int year,
                 const ScenarioParams* s) {
  for (const AssetRecord* a : u.assets)
    if (!option_applies(opt, *a, u.build, year, s)) return false;
  return true;
}

}  // namespace

double AbatementProject::outlay_in(int year) const {
  const int i = year - development_start;
  if (i < 0 || i >= static_cast<int>(outlay.size())) return 0.0;
  return outlay[static_cast<std::size_t>(i)];
}

double DeploymentSchedule::capex_in(int year) const {
  const int i = year - kCapexFirstYear;
  if (i < 0 || i >= static_cast<int>(annual_capex.size())) return 0.0;
  return annual_capex[static_cast<std::size_t>(i)];
}

std::vector<PlanningUnit> planning_units(const AssetTable& table,
                                         const std::vector<Facility>& facilities) {
  std::vector<PlanningUnit> out;
  for (const Facility& f : facilities) {
    std::map<Group, PlanningUnit> by_group;
    for (std::size_t idx : f.assets) {
      const AssetRecord& a = table.rows.at(idx);
      const Group g = group_of(a.process);
      auto [it, fresh] = by_group.try_emplace(g);
      if (fresh) {
        it->second.facility_id = f.facility_id;
        it->second.region = f.region;
        it->second.group = g;
        it->second.location = f.location;
      }
      it->second.assets.push_back(&a);
    }
    for (auto& [g, u] : by_group) out.push_back(std::move(u));
  }
  return out;
}

void LearningState::commission(TechId tech, Region region, int online_year) {
  log_.emplace(std::make_pair(tech, std::string("global")), online_year);
  log_.emplace(std::make_pair(tech, std::string(to_string(region))), online_year);
}

int LearningState::online_before(TechId tech, Region region, Pooling pooling, int year) const {
  auto [lo, hi] = log_.equal_range({tech, pool_key(region, pooling)});
  int n = 0;
  for (auto it = lo; it != hi; ++it)
    if (it->second < year) ++n;
  return n;
}

int LearningState::total_commissioned() const {
  int n = 0;
  for (const auto& [k, y] : log_)
    if (k.second == "global") ++n;
  return n;
}

std::optional<Selection> try_select_option(const PlanningUnit& unit, const Timing& timing,
                                           const LearningState& learning,
                                           const PlanningContext& ctx,
                                           const StorageUsage* used) {
  const ScenarioParams& s = *ctx.scenario;
  std::optional<Selection> best;
  for (const AbatementOption& opt : ctx.catalog->options()) {
    if (opt.overlay()) continue;
    const int dev = opt.development_time;
    const int start = timing.kind == TimingKind::fixed_online ? timing.year - dev : timing.year;
    const int online = start + dev;
    if (start < s.earliest_start_year || online < s.first_online_year ||
        online > kHorizonYear)
      continue;
    if (!unit_admits(opt, unit, online, &s)) continue;
    const LearningParams& lp = s.learning_for(opt.tech_id);
    const int decided = std::min(timing.decision_year.value_or(start), start);
    Selection sel;
    sel.option = &opt;
    sel.development_start = start;
    sel.online_year = online;
    sel.learning_index = learning.online_before(opt.tech_id, unit.region, lp.pooling, decided);
    QuoteRequest req;
    req.option = &opt;
    req.assets = unit.assets;
    req.region = unit.region;
    req.location = unit.location;
    req.build = unit.build;
    req.n_prior = sel.learning_index;
    req.learning = &lp;
    req.finance = ctx.finance;
    req.prices = ctx.prices;
    req.storage = ctx.storage;
    req.storage_used = used;
    try {
      sel.quote = quote(req);
    } catch (const StorageExhausted&) {
      continue;
    }
    if (!best || better(sel, *best)) best = std::move(sel);
  }
  return best;
}

Selection select_option(const PlanningUnit& unit, const Timing& timing,
                        const LearningState& learning, const PlanningContext& ctx,
                        const StorageUsage* used) {
  auto sel = try_select_option(unit, timing, learning, ctx, used);
  if (!sel)
    throw InputError("facility " + unit.facility_id + " is unabatable in " +
                     std::to_string(timing.year));
  return *sel;
}

AbatementProject make_project(const PlanningUnit& unit, const Selection& sel,
                              const FinanceParams& finance) {
  AbatementProject p;
  p.facility_id = unit.facility_id;
  p.region = unit.region;
  p.group = unit.group;
  p.tech_id = sel.option->tech_id;
  p.build_type = unit.build;
  p.development_start = sel.development_start;
  p.online_year = sel.online_year;
  p.total_capex = sel.quote.total_capex;
  p.outlay = outlay_profile(sel.quote.total_capex, sel.option->development_time,
                            finance.logistic_steepness);
  p.abated_scope1 = sel.quote.abated_scope1;
  p.co2_to_storage = sel.quote.co2_to_storage;
  p.lcoa_at_decision = sel.quote.lcoa;
  p.learning_index = sel.learning_index;
  p.storage_site = sel.quote.storage_site;
  return p;
}

json to_json(const DecisionRecord& d) {
  json c = json::array();
  for (const Candidate& k : d.candidates)
    c.push_back({{"facility_id", k.facility_id},
                 {"tech", k.tech},
                 {"lcoa", k.lcoa},
                 {"start", k.start},
                 {"online", k.online},
                 {"action", k.action}});
  return {{"scenario", d.scenario},     {"region", to_string(d.region)},
          {"group", to_string(d.group)}, {"year", d.year},
          {"phase", d.phase},           {"candidates", std::move(c)}};
}

std::vector<std::pair<int, int>> deadline_slots(int units, int deadline,
                                                const ScenarioParams& s) {
  std::vector<std::pair<int, int>> out;
  if (units <= 0) return out;
  if (deadline < s.first_online_year)
    throw InfeasibleError("deadline " + std::to_string(deadline) +
                              " precedes the first possible online year",
                          s.first_online_year);
  const int wave = std::min(units, s.initial_wave);
  if (wave > 0) out.emplace_back(s.first_online_year, wave);
  const int rest = units - wave;
  if (rest == 0) return out;
  const int first = s.first_online_year + s.followon_offset;
  if (deadline < first)
    throw InfeasibleError("deadline " + std::to_string(deadline) +
                              " leaves no follow-on years",
                          first);
  const long years = deadline - first + 1;
  for (long k = 0; k < years; ++k) {
    const long n = (k + 1) * rest / years - k * rest / years;
    if (n > 0) out.emplace_back(first + static_cast<int>(k), static_cast<int>(n));
  }
  return out;
}

std::vector<double> capex_series(const std::vector<AbatementProject>& projects) {
  std::vector<double> out(static_cast<std::size_t>(kHorizonYear - kCapexFirstYear + 1), 0.0);
  for (const AbatementProject& p : projects)
    for (std::size_t i = 0; i < p.outlay.size(); ++i) {
      const int y = p.development_start + static_cast<int>(i);
      if (y >= kCapexFirstYear && y <= kHorizonYear)
        out[static_cast<std::size_t>(y - kCapexFirstYear)] += p.outlay[i];
    }
  return out;
}

namespace {

struct Cell {
  Region region;
  Group group;
  PlanMode mode;
  double cap = 0.0;
  int deadline = 0;
  bool has_options = false;
  std::vector<const PlanningUnit*> pending;  // existing units not yet started
  std::vector<const PlanningUnit*> newbuilds;
  std::map<int, int> slots;                  // deadline mode: online year -> count
  std::vector<double> spent;                 // committed outlay per year
  std::set<std::string> blocked;
  DeploymentSchedule out;
};

std::size_t year_index(int y) { return static_cast<std::size_t>(y - kCapexFirstYear); }

void commit(Cell& cell, const PlanningUnit& unit, const Selection& sel,
            const PlanningContext& ctx, LearningState& learning, StorageUsage& used) {
  AbatementProject p = make_project(unit, sel, *ctx.finance);
  for (std::size_t i = 0; i < p.outlay.size(); ++i) {
    const int y = p.development_start + static_cast<int>(i);
    cell.spent[year_index(y)] += p.outlay[i];
  }
  if (!p.storage_site.empty()) used[p.storage_site] += p.co2_to_storage;
  learning.commission(p.tech_id, p.region, p.online_year);
  cell.out.projects.push_back(std::move(p));
}

bool fits(const Cell& cell, const AbatementProject& p) {
  for (std::size_t i = 0; i < p.outlay.size(); ++i) {
    const int y = p.development_start + static_cast<int>(i);
    if (cell.spent[year_index(y)] + p.outlay[i] > cell.cap * (1.0 + kCapSlack)) return false;
  }
  return true;
}

double peak(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

Candidate candidate_of(const PlanningUnit& u, const std::optional<Selection>& s,
                       std::string action) {
  Candidate c;
  c.facility_id = u.facility_id;
  if (s) {
    c.tech = std::string(to_string(s->option->tech_id));
    c.lcoa = s->quote.lcoa;
    c.start = s->development_start;
    c.online = s->online_year;
  }
  c.action = std::move(action);
  return c;
}

struct Ranked {
  const PlanningUnit* unit;
  std::optional<Selection> sel;
};

void rank(std::vector<Ranked>& v) {
  std::stable_sort(v.begin(), v.end(), [](const Ranked& a, const Ranked& b) {
    if (a.sel.has_value() != b.sel.has_value()) return a.sel.has_value();
    if (!a.sel) return a.unit->facility_id < b.unit->facility_id;
    if (a.sel->quote.lcoa != b.sel->quote.lcoa) return a.sel->quote.lcoa < b.sel->quote.lcoa;
    if (a.sel->quote.abated_scope1 != b.sel->quote.abated_scope1)
      return a.sel->quote.abated_scope1 > b.sel->quote.abated_scope1;
    return a.unit->facility_id < b.unit->facility_id;
  });
}

void erase_unit(std::vector<const PlanningUnit*>& v, const PlanningUnit* u) {
  v.erase(std::remove(v.begin(), v.end(), u), v.end());
}

// Longest development time among options the unit admits when online in
// `online`; 0 when none applies.
int max_dev(const PlanningUnit& u, int online, const PlanningContext& ctx) {
  int d = 0;
  for (const AbatementOption& opt : ctx.catalog->options())
    if (!opt.overlay() && unit_admits(opt, u, online, ctx.scenario))
      d = std::max(d, opt.development_time);
  return d;
}

bool group_has_options(const std::vector<const PlanningUnit*>& units,
                       const PlanningContext& ctx) {
  for (const PlanningUnit* u : units)
    for (const AbatementOption& opt : ctx.catalog->options())
      if (!opt.overlay() && unit_admits(opt, *u, kHorizonYear, ctx.scenario)) return true;
  return false;
}

}  // namespace

PlanResult plan(const std::vector<PlanningUnit>& units, const PlanningContext& ctx,
                const PlanOptions& opts) {
  if (!ctx.catalog || !ctx.finance || !ctx.prices || !ctx.storage || !ctx.scenario)
    throw InputError("plan: incomplete planning context");
  const ScenarioParams& s = *ctx.scenario;
  s.validate();

  std::map<std::pair<Region, Group>, Cell> cells;
  for (const PlanningUnit& u : units) {
    auto [it, fresh] = cells.try_emplace({u.region, u.group});
    Cell& c = it->second;
    if (fresh) {
      c.region = u.region;
      c.group = u.group;
    }
    (u.build == BuildType::newbuild ? c.newbuilds : c.pending).push_back(&u);
  }

  PlanResult result;
  LearningState& learning = result.learning;
  StorageUsage& used = result.storage_used;

  // New builds are reserved at the step that precedes their online year by
  // the longest admissible development time.
  std::multimap<int, std::pair<Cell*, const PlanningUnit*>> reservations;
  std::vector<std::pair<Cell*, const PlanningUnit*>> unabatable_newbuilds;

  for (auto& [key, c] : cells) {
    c.mode = s.mode_for(c.region);
    c.spent.assign(year_index(kHorizonYear) + 1, 0.0);
    std::vector<const PlanningUnit*> all = c.pending;
    all.insert(all.end(), c.newbuilds.begin(), c.newbuilds.end());
    c.has_options = group_has_options(all, ctx);
    c.out.scenario = s.id;
    c.out.region = c.region;
    c.out.group = c.group;
    c.out.mode = c.mode;
    c.out.existing_units = static_cast<int>(c.pending.size());
    if (!c.has_options) continue;
    if (c.mode == PlanMode::capital_cap) {
      c.cap = opts.cap_override.value_or(s.cap_for(c.region, c.group));
      c.out.cap = c.cap;
    } else {
      c.deadline = opts.deadline_override.value_or(s.deadline_for(c.region));
      for (auto [y, n] : deadline_slots(static_cast<int>(c.pending.size()), c.deadline, s))
        c.slots[y] += n;
    }
    for (const PlanningUnit* u : c.newbuilds) {
      const int online = std::max(u->demand_year, s.first_online_year);
      const int d = max_dev(*u, online, ctx);
      if (d == 0 || online > kHorizonYear)
        unabatable_newbuilds.emplace_back(&c, u);
      else
        reservations.emplace(online - d, std::make_pair(&c, u));
    }
  }

  const int first_step = std::min(s.earliest_start_year, reservations.empty()
                                                             ? s.earliest_start_year
                                                             : reservations.begin()->first);
  for (int t = first_step; t <= kHorizonYear; ++t) {
    // (a) deadline slots whose online year is t
    for (auto& [key, c] : cells) {
      auto slot = c.slots.find(t);
      if (slot == c.slots.end() || c.pending.empty()) continue;
      const int want = slot->second;
      std::vector<Ranked> ranked;
      for (const PlanningUnit* u : c.pending)
        ranked.push_back({u, try_select_option(*u, {TimingKind::fixed_online, t, {}},
                                               learning, ctx, &used)});
      rank(ranked);
      DecisionRecord rec{s.id, c.region, c.group, t, "deadline_slot", {}};
      int taken = 0;
      for (Ranked& r : ranked) {
        if (!r.sel) {
          rec.candidates.push_back(candidate_of(*r.unit, r.sel, "unabatable"));
          continue;
        }
        if (taken < want) {
          // Storage headroom may have shifted since ranking.
          auto fresh = try_select_option(*r.unit, {TimingKind::fixed_online, t, {}},
                                         learning, ctx, &used);
          if (!fresh) {
            rec.candidates.push_back(candidate_of(*r.unit, r.sel, "unabatable"));
            continue;
          }
          commit(c, *r.unit, *fresh, ctx, learning, used);
          rec.candidates.push_back(candidate_of(*r.unit, fresh, "started"));
          erase_unit(c.pending, r.unit);
          ++taken;
        } else {
          rec.candidates.push_back(candidate_of(*r.unit, r.sel, "not_selected"));
        }
      }
      // Slots that found no abatable unit roll into the next slot year.
      if (taken < want) {
        auto next = std::next(slot);
        if (next != c.slots.end()) next->second += want - taken;
      }
      result.decisions.push_back(std::move(rec));
    }

    // (b) new-build reservations decided at t
    auto [lo, hi] = reservations.equal_range(t);
    for (auto it = lo; it != hi; ++it) {
      Cell& c = *it->second.first;
      const PlanningUnit& u = *it->second.second;
      const int online = std::max(u.demand_year, s.first_online_year);
      auto sel = try_select_option(u, {TimingKind::fixed_online, online, t}, learning, ctx,
                                   &used);
      DecisionRecord rec{s.id, c.region, c.group, t, "newbuild", {}};
      if (!sel) {
        rec.candidates.push_back(candidate_of(u, sel, "unabatable"));
        unabatable_newbuilds.emplace_back(&c, &u);
      } else {
        commit(c, u, *sel, ctx, learning, used);
        rec.candidates.push_back(candidate_of(u, sel, "started"));
      }
      result.decisions.push_back(std::move(rec));
    }

    // (c) capital-cap starts at t
    if (t < s.earliest_start_year) continue;
    for (auto& [key, c] : cells) {
      if (c.mode != PlanMode::capital_cap || !c.has_options || c.pending.empty()) continue;
      std::vector<Ranked> ranked;
      for (const PlanningUnit* u : c.pending)
        ranked.push_back({u, try_select_option(*u, {TimingKind::fixed_start, t, {}},
                                               learning, ctx, &used)});
      rank(ranked);
      DecisionRecord rec{s.id, c.region, c.group, t, "cap_start", {}};
      for (Ranked& r : ranked) {
        if (!r.sel) continue;
        auto fresh = try_select_option(*r.unit, {TimingKind::fixed_start, t, {}}, learning,
                                       ctx, &used);
        if (!fresh) {
          rec.candidates.push_back(candidate_of(*r.unit, r.sel, "unabatable"));
          continue;
        }
        const AbatementProject trial = make_project(*r.unit, *fresh, *ctx.finance);
        if (peak(trial.outlay) > c.cap * (1.0 + kCapSlack)) {
          c.blocked.insert(r.unit->facility_id);
          rec.candidates.push_back(candidate_of(*r.unit, fresh, "blocked"));
        } else if (fits(c, trial)) {
          c.blocked.erase(r.unit->facility_id);
          commit(c, *r.unit, *fresh, ctx, learning, used);
          rec.candidates.push_back(candidate_of(*r.unit, fresh, "started"));
          erase_unit(c.pending, r.unit);
        } else {
          c.blocked.erase(r.unit->facility_id);
          rec.candidates.push_back(candidate_of(*r.unit, fresh, "deferred"));
        }
      }
      if (!rec.candidates.empty()) result.decisions.push_back(std::move(rec));
    }
  }

  for (auto& [key, c] : cells) {
    DeploymentSchedule& out = c.out;
    out.annual_capex = capex_series(out.projects);
    for (const PlanningUnit* u : c.pending) {
      out.unabated.push_back(u->facility_id);
      if (c.blocked.count(u->facility_id)) out.blocked.push_back(u->facility_id);
    }
    for (auto& [cell, u] : unabatable_newbuilds)
      if (cell == &c) out.unabated.push_back(u->facility_id);
    if (c.mode == PlanMode::capital_cap && c.has_options)
      for (int y = kCapexFirstYear; y <= kHorizonYear; ++y)
        if (out.capex_in(y) > c.cap * (1.0 + kCapSlack)) out.cap_overrun_years.push_back(y);
    if (c.pending.empty() && out.existing_units > 0) {
      int last = 0;
      for (const AbatementProject& p : out.projects)
        if (p.build_type == BuildType::retrofit) last = std::max(last, p.online_year);
      out.completion_year = last;
    }
    result.schedules.push_back(std::move(out));
  }
  return result;
}

namespace {

ScenarioParams single_mode(const ScenarioParams& base, const std::vector<PlanningUnit>& units,
                           PlanMode mode) {
  ScenarioParams s = base;
  for (const PlanningUnit& u : units) s.mode[u.region] = mode;
  return s;
}

DeploymentSchedule only_schedule(PlanResult r) {
  if (r.schedules.size() != 1)
    throw InputError("single-cell planning needs units from exactly one region and group");
  return std::move(r.schedules.front());
}

}  // namespace

DeploymentSchedule plan_deadline(const std::vector<PlanningUnit>& units, int deadline,
                                 int initial_wave, const PlanningContext& ctx) {
  ScenarioParams s = single_mode(*ctx.scenario, units, PlanMode::deadline);
  s.initial_wave = initial_wave;
  PlanningContext local = ctx;
  local.scenario = &s;
  PlanOptions o;
  o.deadline_override = deadline;
  return only_schedule(plan(units, local, o));
}

DeploymentSchedule plan_capital_cap(const std::vector<PlanningUnit>& units, double cap,
                                    const PlanningContext& ctx) {
  if (!(cap > 0.0)) throw InputError("capital cap must be > 0");
  ScenarioParams s = single_mode(*ctx.scenario, units, PlanMode::capital_cap);
  // The override is the cap; record it for every group so validation passes.
  for (const PlanningUnit& u : units)
    for (Group g : kGroups) s.caps[{u.region, g}] = cap;
  PlanningContext local = ctx;
  local.scenario = &s;
  PlanOptions o;
  o.cap_override = cap;
  return only_schedule(plan(units, local, o));
}

}  // namespace chemdecarb

namespace chemdecarb {

PathwayResult simulate_pathway(const std::vector<DeploymentSchedule>& schedules,
                               int horizon) {
  if (horizon > kHorizonYear || horizon < kBaseYear)
    throw InputError("simulate_pathway: horizon outside the modelled range");
  PathwayResult r;
  r.capex.assign(static_cast<std::size_t>(kHorizonYear - kCapexFirstYear + 1), 0.0);
  r.co2_stored.assign(static_cast<std::size_t>(kHorizonYear - kBaseYear + 1), 0.0);
  for (const DeploymentSchedule& s : schedules)
    for (const AbatementProject& p : s.projects) {
      for (int y = p.development_start; y < p.online_year && y <= horizon; ++y)
        if (y >= kCapexFirstYear) r.capex[static_cast<std::size_t>(y - kCapexFirstYear)] += p.outlay_in(y);
      for (int y = std::max(p.online_year, kBaseYear); y <= horizon; ++y)
        r.co2_stored[static_cast<std::size_t>(y - kBaseYear)] += p.co2_to_storage;
      r.project_lcoa.emplace_back(p.facility_id, p.lcoa_at_decision);
      r.status[p.facility_id] = {p.tech_id, p.online_year};
      r.total_capex += p.total_capex;
    }
  return r;
}

}  // namespace chemdecarb

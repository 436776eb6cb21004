#include <numeric>

#include <catch_amalgamated.hpp>

#include "builders.hpp"

using namespace chemdecarb;

namespace {

EmissionFactors flat_factors(double grid) {
  EmissionFactors f;
  for (Region r : kRegions) f.grid_ci[r] = grid;
  return f;
}

Series constant(double v) { return Series(kSeriesYears, v); }

Series ramp_to(double from, double to) {
  // Linear from 2023 to 2050, flat afterwards.
  Series s(kSeriesYears);
  for (int y = kBaseYear; y <= kHorizonYear; ++y) {
    const double t = std::min(1.0, (y - kBaseYear) / double(2050 - kBaseYear));
    s[y - kBaseYear] = from + t * (to - from);
  }
  return s;
}

AssetRecord electric(double mwh_per_t) {
  AssetRecord a = build::cracker("E", 1.0e6);
  a.fuel_intensity = a.steam_intensity = a.feedstock_intensity = 0.0;
  a.electricity_intensity = mwh_per_t;
  return a;
}

}  // namespace

TEST_CASE("scope 2 is electricity times grid intensity") {
  const auto e = asset_emissions(electric(0.5), 2023, 1.0e6, nullptr, flat_factors(0.4));
  CHECK(e.scope2 == Catch::Approx(0.2e6));
  CHECK(e.scope1() == 0.0);
}

TEST_CASE("CCS leaves five percent of the combustion stream") {
  const Catalog c = default_catalog();
  AssetRecord a = build::cracker("C", 1.0e6);
  a.steam_intensity = 0.0;
  a.fuel_intensity = 1.0 / kGasEmissionFactor;
  const EmissionFactors f = flat_factors(0.4);
  const AbatementState ccs{&c.get(TechId::ccs_postcombustion), 2030};
  const auto before = asset_emissions(a, 2029, 1.0e6, nullptr, f, ccs);
  const auto after = asset_emissions(a, 2030, 1.0e6, nullptr, f, ccs);
  CHECK(before.scope1_combustion == Catch::Approx(1.0e6));
  CHECK(before.co2_stored == 0.0);
  const auto b = option_performance(*ccs.option, a);
  const double regen = b.delta_fuel_gas * kGasEmissionFactor * 1.0e6;
  CHECK(after.scope1_combustion == Catch::Approx(0.05e6 + 0.05 * regen));
  CHECK(after.co2_stored == Catch::Approx(0.95e6 + 0.95 * regen));
}

TEST_CASE("chlor-alkali scope 2 follows the grid to zero") {
  AssetRecord a = electric(2.5);
  a.chemical = Chemical::chlor_alkali;
  a.process = Process::electrolysis_chlor_alkali;
  ScenarioParams s = preset("SU");
  for (Region r : kRegions) s.grid_multiplier[r] = Trajectory{{{2023, 1.0}, {2060, 0.0}}};
  const EmissionFactors f = default_emission_factors();
  const double e2023 = asset_emissions(a, 2023, 1.0e6, &s, f).scope2;
  CHECK(e2023 > 0.0);
  CHECK(asset_emissions(a, 2040, 1.0e6, &s, f).scope2 < e2023);
  CHECK(asset_emissions(a, 2060, 1.0e6, &s, f).scope2 == 0.0);
}

TEST_CASE("emissions years outside the horizon are rejected") {
  const EmissionFactors f = default_emission_factors();
  CHECK_THROWS_AS(asset_emissions(electric(1), 2022, 1.0, nullptr, f), InputError);
  CHECK_THROWS_AS(asset_emissions(electric(1), 2081, 1.0, nullptr, f), InputError);
  CHECK_THROWS_AS(asset_emissions(electric(1), 2030, -1.0, nullptr, f), InputError);
}

TEST_CASE("every shipped option lowers scope 1 and well-to-gate emissions") {
  const Catalog c = default_catalog();
  const EmissionFactors f = default_emission_factors();
  const ScenarioParams s = preset("SU");
  AssetRecord methanol = build::ammonia("M", 1.0e6);
  methanol.chemical = Chemical::methanol;
  methanol.process = Process::smr_methanol;
  AssetRecord coal = build::ammonia("K", 1.0e6, Region::China);
  coal.process = Process::coal_ammonia;
  coal.feedstock_type = Feedstock::coal;
  std::vector<AssetRecord> assets{build::cracker("C", 1.0e6), build::ammonia("N", 1.0e6),
                                  methanol, coal};
  int pairs = 0;
  for (const auto& a : assets)
    for (const auto& opt : c.options())
      for (BuildType bt : {BuildType::retrofit, BuildType::newbuild}) {
        if (!option_applies(opt, a, bt, 2050, &s)) continue;
        const auto pre = asset_intensity(a, 2050, &s, f);
        const auto post = asset_intensity(a, 2050, &s, f, {&opt, 2030});
        INFO(to_string(opt.tech_id) << " on " << to_string(a.process));
        CHECK(post.scope1() < pre.scope1());
        CHECK(post.total() < pre.total());
        ++pairs;
      }
  CHECK(pairs >= 8);
}

TEST_CASE("frozen reference is exactly proportional to production") {
  const AssetRecord a = build::cracker("C", 1.0e6);
  const AssetTable t = build::table_of({a});
  const EmissionFactors f = default_emission_factors();
  const double p0 = a.production();
  const auto intensity = asset_intensity(a, kBaseYear, nullptr, f);

  SECTION("constant production gives constant emissions") {
    const auto ref = frozen_reference(t, {{Region::NorthAmerica, Chemical::ethylene, constant(p0)}}, f);
    for (const auto& [k, s] : ref)
      for (double v : s) CHECK(v == Catch::Approx(s.front()).epsilon(1e-14));
  }
  SECTION("production up 70 percent gives emissions up 70 percent") {
    const auto ref =
        frozen_reference(t, {{Region::NorthAmerica, Chemical::ethylene, ramp_to(p0, 1.7 * p0)}}, f);
    for (const auto& [k, s] : ref) {
      CHECK(k.scenario == "REF");
      CHECK(s[2050 - kBaseYear] == Catch::Approx(1.7 * s.front()).epsilon(1e-12));
      CHECK(s.front() == Catch::Approx(intensity.get(*k.scope) * p0).epsilon(1e-12));
    }
  }
}

TEST_CASE("cumulative sums inclusive ranges") {
  CHECK(cumulative(constant(1.0e9), 2025, 2080) == Catch::Approx(56.0e9));
  CHECK(cumulative(constant(0.0), 2025, 2080) == 0.0);
  CHECK(cumulative(constant(2.0), 2030, 2030) == 2.0);
  CHECK_THROWS_AS(cumulative(constant(1.0), 2040, 2030), InputError);
  CHECK_THROWS_AS(cumulative(constant(1.0), 2020, 2030), InputError);
  CHECK(at_year(ramp_to(0, 27), 2032) == Catch::Approx(9.0));
}

TEST_CASE("aggregation preserves grand totals") {
  SeriesTable t;
  int k = 0;
  for (Region r : kRegions)
    for (Scope s : kScopes)
      t[{std::string("SU"), r, Chemical::ammonia, s}] = constant(++k);
  const auto world = aggregate(t, {});
  REQUIRE(world.size() == 1);
  const double grand = world.begin()->second.front();
  CHECK(grand == k * (k + 1) / 2.0);
  const auto by_scope = aggregate(t, {.scope = true});
  CHECK(by_scope.size() == 4);
  double sum = 0.0;
  for (const auto& [key, s] : by_scope) sum += s.front();
  CHECK(sum == grand);

  SeriesTable bad = t;
  bad[{std::string("GA"), Region::China, Chemical::ammonia, Scope::scope2}] = Series(3, 1.0);
  CHECK_THROWS_AS(aggregate(bad, {}), InputError);
}

TEST_CASE("fleet emissions at constant production are constant without abatement") {
  const AssetTable t = build::table_of({build::cracker("C", 1.0e6), build::ammonia("N", 1.0e6)});
  ProductionPlan plan;
  for (const auto& a : t.rows) {
    plan.members.push_back({&a, kBaseYear, false});
    plan.production.push_back(constant(a.production()));
  }
  ScenarioParams s = preset("SU");
  for (Region r : kRegions) {
    s.grid_multiplier[r] = Trajectory{{{2023, 1.0}}};
    s.upstream_multiplier[r] = Trajectory{{{2023, 1.0}}};
  }
  s.circular_feedstock.clear();
  const auto fe = fleet_emissions(plan, s, default_emission_factors(), {});
  for (const auto& [k, series] : aggregate(fe.emissions, {.scope = true}))
    for (double v : series) CHECK(v == Catch::Approx(series.front()).epsilon(1e-14));
}

TEST_CASE("intensity trajectories scale the grid anchor") {
  const EmissionFactors f = default_emission_factors();
  const ScenarioParams s = preset("SU");
  const auto tr = intensity_trajectory(Region::Europe, s, f);
  CHECK(tr.grid_ci.front() == Catch::Approx(f.grid_anchor(Region::Europe)));
  CHECK(tr.grid_ci[2050 - kBaseYear] ==
        Catch::Approx(f.grid_anchor(Region::Europe) * s.grid_factor(Region::Europe, 2050)));
}

#include <catch_amalgamated.hpp>

#include "properties.hpp"

namespace {

void expect(const prop::Result& r, int min_cases) {
  INFO(r.name << ": " << r.failures << " failures, first: " << r.first_failure);
  CHECK(r.cases >= min_cases);
  CHECK(r.ok());
}

}  // namespace

TEST_CASE("property: outlay profiles conserve the total") {
  expect(prop::outlay_conservation(2000, 101), 2000);
}

TEST_CASE("property: learning is monotone and continuous") {
  expect(prop::learning_monotone(1000, 202), 1000);
}

TEST_CASE("property: capital caps hold every year") {
  expect(prop::cap_feasibility(500, 303), 500);
}

TEST_CASE("property: selection is the argmin of independent quotes") {
  expect(prop::argmin_selection(600, 404), 600);
}

TEST_CASE("property: frozen reference is proportional to production") {
  expect(prop::frozen_proportionality(500, 505), 500);
}

TEST_CASE("property: aggregation preserves grand totals") {
  expect(prop::aggregation_invariance(500, 606), 500);
}

TEST_CASE("property: runs are deterministic in the seed") {
  expect(prop::seed_determinism(500, 707), 500);
}

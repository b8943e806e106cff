// Serial and OpenMP paths of each parallel kernel must agree exactly.

#include <random>

#include "doctest.h"
#include "powersched/curve.hpp"
#include "powersched/flow_uni.hpp"
#include "powersched/oracle.hpp"
#include "reference.hpp"

using namespace powersched;

TEST_CASE("frontier sampling: serial equals parallel") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const Instance inst(ref::random_jobs(rng, 40), 3.0);
    const Frontier f = build_frontier(inst);
    const auto a = sample_frontier(f, 0.1, 5000.0, 1000, Execution::serial);
    const auto b = sample_frontier(f, 0.1, 5000.0, 1000, Execution::parallel);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].energy == b[k].energy);
      CHECK(a[k].makespan == b[k].makespan);
      CHECK(a[k].d1 == b[k].d1);
      CHECK(a[k].d2 == b[k].d2);
      CHECK(a[k].segment == b[k].segment);
      CHECK(a[k].breakpoint == b[k].breakpoint);
    }
  }
}

TEST_CASE("pinned-regime scan: serial equals parallel") {
  const Instance three({{0, 1, 1}, {0, 1, 2}, {1, 1, 3}}, 3.0);
  const auto a = pinned_regime_bounds(three, {}, {}, Execution::serial);
  const auto b = pinned_regime_bounds(three, {}, {}, Execution::parallel);
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  CHECK(a->first == b->first);
  CHECK(a->second == b->second);
}

TEST_CASE("assignment enumeration: serial equals parallel") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 4; ++trial) {
    const Instance inst(ref::random_jobs(rng, 5, true), 3.0, 2);
    for (Metric metric : {Metric::makespan, Metric::flow}) {
      const auto a = enumerate_assignments(inst, 20.0, metric, {}, Execution::serial);
      const auto b = enumerate_assignments(inst, 20.0, metric, {}, Execution::parallel);
      CHECK(a.value == b.value);
      CHECK(a.best.processor_of == b.best.processor_of);
      CHECK(a.evaluated == b.evaluated);
    }
  }
}

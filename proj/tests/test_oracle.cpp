#include <numeric>
#include <random>

#include "doctest.h"
#include "powersched/flow_uni.hpp"
#include "powersched/multi.hpp"
#include "powersched/oracle.hpp"
#include "reference.hpp"

using namespace powersched;

namespace {

std::vector<std::size_t> identity(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

}  // namespace

TEST_CASE("oracle on one job") {
  const Instance one({{0, 1, 1}}, 3.0);
  const auto r = convex_oracle(one, identity(1), 1.0, Metric::makespan);
  REQUIRE(r.durations.size() == 1);
  CHECK(r.durations[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("oracle on the three-job example") {
  const Instance example({{0, 5, 1}, {5, 2, 2}, {6, 1, 3}}, 3.0);
  CHECK(convex_oracle(example, identity(3), 2.0, Metric::makespan).value ==
        doctest::Approx(16.0).epsilon(1e-4));
  CHECK(convex_oracle(example, identity(3), 17.0, Metric::makespan).value ==
        doctest::Approx(6.5).epsilon(1e-4));
}

TEST_CASE("oracle flow on the three unit jobs") {
  const Instance inst({{0, 1, 1}, {0, 1, 2}, {1, 1, 3}}, 3.0);
  const double oracle = convex_oracle(inst, identity(3), 9.0, Metric::flow).value;
  CHECK(relative_error(oracle, min_flow_for_energy(inst, 9.0).flow) <= 1e-4);
}

TEST_CASE("oracle outputs are feasible") {
  std::mt19937_64 rng(121);
  std::uniform_int_distribution<std::size_t> n(1, 8);
  for (int trial = 0; trial < 40; ++trial) {
    const Instance inst(ref::random_jobs(rng, n(rng)), trial % 2 ? 2.0 : 3.0);
    const double e = inst.total_work();
    for (Metric metric : {Metric::makespan, Metric::flow}) {
      const auto r = convex_oracle(inst, identity(inst.size()), e, metric);
      double energy = 0.0, t = 0.0;
      for (std::size_t k = 0; k < inst.size(); ++k) {
        CHECK(r.starts[k] >= inst[k].release);
        CHECK(r.starts[k] >= t - 1e-12);
        t = r.starts[k] + r.durations[k];
        energy += std::pow(inst[k].work, inst.alpha()) / std::pow(r.durations[k], inst.alpha() - 1);
      }
      CHECK(energy <= e * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("oracle is stable under more iterations") {
  const Instance example({{0, 5, 1}, {5, 2, 2}, {6, 1, 3}}, 3.0);
  OracleConfig base;
  OracleConfig more = base;
  more.max_rounds *= 2;
  for (double e : {2.0, 9.0, 20.0}) {
    const double a = convex_oracle(example, identity(3), e, Metric::makespan, base).value;
    const double b = convex_oracle(example, identity(3), e, Metric::makespan, more).value;
    CHECK(std::fabs(a - b) <= base.duration_tolerance * a);
  }
}

TEST_CASE("oracle reports non-convergence") {
  const Instance example({{0, 5, 1}, {5, 2, 2}, {6, 1, 3}}, 3.0);
  OracleConfig tiny;
  tiny.max_rounds = 2;
  CHECK_THROWS_AS(convex_oracle(example, identity(3), 9.0, Metric::flow, tiny), ConvergenceError);
}

TEST_CASE("oracle rejects malformed orders and budgets") {
  const Instance example({{0, 5, 1}, {5, 2, 2}, {6, 1, 3}}, 3.0);
  const std::vector<std::size_t> dup{0, 0, 1};
  CHECK_THROWS_AS(convex_oracle(example, dup, 9.0, Metric::flow), InvalidArgument);
  CHECK_THROWS_AS(convex_oracle(example, identity(3), 0.0, Metric::flow), InvalidArgument);
}

TEST_CASE("block-partition energy matches the densest-suffix reference") {
  std::mt19937_64 rng(131);
  std::uniform_int_distribution<std::size_t> n(1, 10);
  std::uniform_real_distribution<double> extra(0.1, 20.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance inst(ref::random_jobs(rng, n(rng)), trial % 2 ? 2.0 : 3.0);
    const double deadline = inst.jobs().back().release + extra(rng);
    const double expected = ref::min_energy_for_deadline(inst.jobs(), deadline, inst.alpha());
    const double got = min_energy_for_deadline_bruteforce(inst.jobs(), deadline, inst.alpha());
    CHECK(relative_error(got, expected) <= 1e-12);
  }
}

TEST_CASE("assignment enumeration examples") {
  const Instance four({{0, 1, 1}, {0, 1, 2}, {0, 1, 3}, {0, 1, 4}}, 3.0, 2);
  for (Metric metric : {Metric::makespan, Metric::flow}) {
    const auto best = enumerate_assignments(four, 6.0, metric);
    CHECK(best.evaluated == 16);
    const double cyclic = evaluate_assignment(four, cyclic_assign(4, 2), 6.0, metric);
    CHECK(relative_error(best.value, cyclic) <= 1e-9);
  }

  const Instance lone({{1, 2, 1}}, 3.0, 3);
  const auto one = enumerate_assignments(lone, 4.0, Metric::makespan);
  CHECK(one.evaluated == 3);
  for (std::size_t p = 1; p <= 3; ++p) {
    Assignment a{{p}, 3};
    CHECK(evaluate_assignment(lone, a, 4.0, Metric::makespan) ==
          doctest::Approx(one.value).epsilon(1e-12));
  }

  const auto red = partition_to_instance({{1, 2, 3, 4}});
  CHECK(enumerate_assignments(red.instance, red.budget, Metric::makespan).value ==
        doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("assignment enumeration respects the cap") {
  const Instance big(std::vector<Job>(17, Job{0, 1, 0}), 3.0, 2);
  CHECK_THROWS_AS(enumerate_assignments(big, 10.0, Metric::makespan), TooLarge);
}

#include <random>

#include "doctest.h"
#include "powersched/flow_uni.hpp"
#include "powersched/makespan_uni.hpp"
#include "powersched/multi.hpp"
#include "powersched/oracle.hpp"
#include "reference.hpp"

using namespace powersched;

namespace {

Instance random_equal_work(std::mt19937_64& rng, std::size_t max_n, std::size_t m) {
  std::uniform_int_distribution<std::size_t> n(1, max_n);
  std::uniform_int_distribution<int> a(0, 1);
  return Instance(ref::random_jobs(rng, n(rng), true), a(rng) ? 3.0 : 2.0, m);
}

double random_budget(std::mt19937_64& rng, const Instance& inst) {
  std::uniform_real_distribution<double> ls(std::log(0.2), std::log(5.0));
  return inst.total_work() * std::pow(std::exp(ls(rng)), inst.alpha() - 1.0);
}

}  // namespace

TEST_CASE("cyclic assignment") {
  CHECK(cyclic_assign(5, 2).processor_of == std::vector<std::size_t>{2, 1, 2, 1, 2});
  CHECK(cyclic_assign(3, 1).processor_of == std::vector<std::size_t>{1, 1, 1});
  CHECK(cyclic_assign(2, 4).processor_of == std::vector<std::size_t>{2, 3});
  CHECK_THROWS_AS(cyclic_assign(0, 2), InvalidArgument);
  CHECK_THROWS_AS(cyclic_assign(2, 0), InvalidArgument);
}

TEST_CASE("multiprocessor makespan examples") {
  const Instance four({{0, 1, 1}, {0, 1, 2}, {0, 1, 3}, {0, 1, 4}}, 3.0, 2);
  const MultiResult r = multi_makespan_equal_work(four, 4.0);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
  for (const auto& item : r.combined.items) CHECK(item.speed == doctest::Approx(1.0).epsilon(1e-9));

  const Instance example({{0, 5, 1}, {5, 2, 2}, {6, 1, 3}}, 3.0, 1);
  CHECK(multi_makespan_equal_work(example, 17.0).value == doctest::Approx(6.5).epsilon(1e-12));
  CHECK_THROWS_AS(multi_makespan_equal_work(example.with_processors(2), 17.0), UnsupportedInstance);

  const Instance pair({{0, 1, 1}, {0, 1, 2}}, 3.0, 2);
  const MultiResult p = multi_makespan_equal_work(pair, 2.0);
  CHECK(p.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("one processor reduces to the uniprocessor solvers") {
  std::mt19937_64 rng(111);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance inst = random_equal_work(rng, 10, 1);
    const double e = random_budget(rng, inst);
    const MultiResult mk = multi_makespan_equal_work(inst, e);
    const Schedule uni = inc_merge(inst, e);
    REQUIRE(mk.combined.items.size() == uni.items.size());
    for (std::size_t k = 0; k < uni.items.size(); ++k) {
      CHECK(approx_equal(mk.combined.items[k].speed, uni.items[k].speed));
      CHECK(approx_equal(mk.combined.items[k].start, uni.items[k].start));
    }
    const MultiResult fl = multi_flow_equal_work(inst, e);
    CHECK(approx_equal(fl.value, min_flow_for_energy(inst, e).flow));
  }
}

TEST_CASE("one processor on the three unit jobs matches the uniprocessor flow") {
  const Instance inst({{0, 1, 1}, {0, 1, 2}, {1, 1, 3}}, 3.0, 1);
  const MultiResult r = multi_flow_equal_work(inst, 9.0);
  CHECK(r.value == doctest::Approx(min_flow_for_energy(inst, 9.0).flow).epsilon(1e-12));
  double sq = 0.0;
  for (const auto& item : r.combined.items) sq += item.speed * item.speed;
  CHECK(std::fabs(sq - 9.0) <= 1e-6);
}

TEST_CASE("multiprocessor flow examples") {
  const Instance pair({{0, 1, 1}, {0, 1, 2}}, 3.0, 2);
  const MultiResult r = multi_flow_equal_work(pair, 2.0);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
  for (const auto& item : r.combined.items) CHECK(item.speed == doctest::Approx(1.0).epsilon(1e-8));

  std::mt19937_64 rng(222);
  std::uniform_real_distribution<double> e(1.0, 30.0);
  const Instance four({{0, 1, 1}, {0, 1, 2}, {0, 1, 3}, {0, 1, 4}}, 3.0, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const MultiResult f = multi_flow_equal_work(four, e(rng));
    const double last1 = f.per_processor[0].on_processor(1).back().speed;
    const double last2 = f.per_processor[1].on_processor(2).back().speed;
    CHECK(approx_equal(last1, last2));
  }
}

TEST_CASE("multiprocessor solvers equalize finish times and spend the budget") {
  std::mt19937_64 rng(333);
  std::uniform_int_distribution<std::size_t> m(2, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance inst = random_equal_work(rng, 12, m(rng));
    const double e = random_budget(rng, inst);
    const MultiResult mk = multi_makespan_equal_work(inst, e);
    CHECK(relative_error(mk.energy, e) <= 1e-9);
    CHECK(check_valid(mk.combined, inst).ok());
    double lo = INFINITY, hi = 0.0;
    for (const auto& s : mk.per_processor) {
      if (s.items.empty()) continue;
      lo = std::min(lo, makespan(s));
      hi = std::max(hi, makespan(s));
    }
    CHECK((hi - lo) / hi <= 1e-7);

    const MultiResult fl = multi_flow_equal_work(inst, e);
    CHECK(relative_error(fl.energy, e) <= 1e-9);
    CHECK(check_valid(fl.combined, inst).ok());
  }
}

TEST_CASE("cyclic assignment is optimal for equal works") {
  std::mt19937_64 rng(444);
  for (int trial = 0; trial < 12; ++trial) {
    const Instance inst = random_equal_work(rng, 6, 2);
    const double e = random_budget(rng, inst);
    const double mk = multi_makespan_equal_work(inst, e).value;
    CHECK(relative_error(mk, enumerate_assignments(inst, e, Metric::makespan).value) <= 1e-6);
    const double fl = multi_flow_equal_work(inst, e).value;
    CHECK(relative_error(fl, enumerate_assignments(inst, e, Metric::flow).value) <= 1e-6);
  }
}

TEST_CASE("partition reduction instances") {
  const auto r = partition_to_instance({{1, 2, 3, 4}});
  CHECK(r.instance.size() == 4);
  CHECK(r.instance.processors() == 2);
  CHECK(r.budget == 10.0);
  CHECK(r.target_makespan == 5.0);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(r.instance[k].release == 0.0);
    CHECK(r.instance[k].work == static_cast<double>(k + 1));
  }
  CHECK(partition_to_instance({{1}}).budget == 1.0);
  CHECK(partition_to_instance({{1}}).target_makespan == 0.5);
  CHECK(partition_to_instance({{2, 2}}).budget == 4.0);
  CHECK(partition_to_instance({{2, 2}}).target_makespan == 2.0);
  CHECK_THROWS_AS(partition_to_instance({{}}), InvalidArgument);
  CHECK_THROWS_AS(partition_to_instance({{1, 0}}), InvalidArgument);
}

TEST_CASE("partition decisions") {
  const auto yes = decide_partition_detailed({{1, 2, 3, 4}});
  CHECK(yes.partitionable);
  REQUIRE(yes.witness.has_value());
  long long a = 0, b = 0;
  for (long long v : (*yes.witness)[0]) a += v;
  for (long long v : (*yes.witness)[1]) b += v;
  CHECK(a == 5);
  CHECK(b == 5);

  CHECK_FALSE(decide_partition_via_schedule({{1, 1, 3}}));
  CHECK(decide_partition_via_schedule({{3, 3, 4, 4, 5, 5}}));
  CHECK_FALSE(decide_partition_via_schedule({{1, 2, 5}}));
  CHECK_THROWS_AS(decide_partition_via_schedule({std::vector<long long>(17, 2)}), TooLarge);
}

TEST_CASE("partition decisions agree with subset sums") {
  std::mt19937_64 rng(555);
  std::uniform_int_distribution<std::size_t> n(1, 8);
  std::uniform_int_distribution<long long> v(1, 20);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<long long> values(n(rng));
    for (auto& x : values) x = v(rng);
    CHECK(decide_partition_via_schedule({values}) == ref::subset_sum_splits(values));
  }
}

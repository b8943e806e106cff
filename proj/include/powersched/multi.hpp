#pragma once

// Multiprocessor scheduling with a shared energy supply. For equal-work jobs
// the cyclic assignment (job i on processor (i mod m) + 1) is optimal for any
// symmetric non-decreasing metric, which reduces both metrics to coupled
// uniprocessor problems: equal finish times for makespan, equal final-job
// speeds for total flow. With unequal works makespan is NP-hard; the
// Partition reduction below demonstrates it.

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "powersched/core.hpp"
#include "powersched/flow_uni.hpp"

namespace powersched {

struct OracleConfig;

/// processor_of[k] is the 1-based processor of the k-th job in release order.
struct Assignment {
  std::vector<std::size_t> processor_of;
  std::size_t processors = 1;
};

Assignment cyclic_assign(std::size_t n, std::size_t m);

/// Jobs of each processor (release order). Rows may be empty.
std::vector<std::vector<Job>> split_by_assignment(const Instance& instance,
                                                  const Assignment& assignment);

struct MultiResult {
  std::vector<Schedule> per_processor;  // one per processor; empty processors have no items
  Schedule combined;
  Assignment assignment;
  double value = 0.0;  // makespan or total flow
  double energy = 0.0;
};

MultiResult multi_makespan_equal_work(const Instance& instance, double energy_budget);

MultiResult multi_flow_equal_work(const Instance& instance, double energy_budget,
                                  const FlowSolverConfig& config = {});

struct PartitionInstance {
  std::vector<long long> elements;

  long long total() const;
};

struct PartitionReduction {
  Instance instance;
  double budget = 0.0;
  double target_makespan = 0.0;
};

/// One job per element (release 0, work a_i) on two processors, with enough
/// energy to run all work at speed 1 and a makespan target of half the total.
PartitionReduction partition_to_instance(const PartitionInstance& partition, double alpha = 3.0);

struct PartitionDecision {
  bool partitionable = false;
  std::optional<std::array<std::vector<long long>, 2>> witness;
  std::optional<double> best_makespan;  // absent when the total is odd
};

PartitionDecision decide_partition_detailed(const PartitionInstance& partition,
                                            const OracleConfig& config);
PartitionDecision decide_partition_detailed(const PartitionInstance& partition);

bool decide_partition_via_schedule(const PartitionInstance& partition);

}  // namespace powersched

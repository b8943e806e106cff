#pragma once

// Uniprocessor makespan under an energy budget (laptop problem) and its
// inverse, the least energy meeting a deadline (server problem).
//
// Job positions below are 0-based indices into Instance::jobs(), i.e. into
// release order.

#include <cstddef>
#include <vector>

#include "powersched/core.hpp"

namespace powersched {

/// A maximal run of jobs executed back to back at one speed.
struct Block {
  std::size_t first = 0;
  std::size_t last = 0;
  double start = 0.0;
  double speed = 0.0;
  double work = 0.0;
  bool fixed = false;  // speed forced by the next release rather than by the budget
};

/// Speed of non-last block [first, last]: its work over the time until the
/// release following it. Requires last + 1 < n.
double fixed_block_speed(const Instance& instance, std::size_t first, std::size_t last);

struct IncMergeResult {
  Schedule schedule;
  std::vector<Block> blocks;
  std::size_t merges = 0;  // includes forced merges of jobs sharing a release
};

/// The unique schedule that is optimal for makespan at exactly `energy_budget`.
IncMergeResult inc_merge_detailed(const Instance& instance, double energy_budget);

inline Schedule inc_merge(const Instance& instance, double energy_budget) {
  return inc_merge_detailed(instance, energy_budget).schedule;
}

/// Least energy whose optimal makespan equals `deadline`. Throws
/// InfeasibleDeadline when the deadline does not exceed the last release.
double energy_for_deadline(const Instance& instance, double deadline);

/// Builds the per-block schedule items, jobs back to back from each block start.
Schedule schedule_from_blocks(const Instance& instance, const std::vector<Block>& blocks,
                              std::size_t processor = 1);

}  // namespace powersched

#pragma once

// Internal block stack shared by IncMerge and the frontier enumerator.

#include <cstddef>
#include <vector>

#include "powersched/core.hpp"
#include "powersched/makespan_uni.hpp"

namespace powersched::detail {

/// Consecutive jobs whose releases coincide (within tolerance) always share a
/// block, so they are fed to the stack as one unit.
struct ReleaseUnit {
  std::size_t first;
  std::size_t last;
  double release;
  double work;
};

std::vector<ReleaseUnit> release_units(const Instance& instance, Tolerance tol = {});

struct StackEntry {
  Block block;
  double energy_below = 0.0;  // total energy of the fixed blocks under this entry
};

class BlockStack {
 public:
  explicit BlockStack(double alpha) : alpha_(alpha) {}

  /// Pushes a unit followed by a release at `next_release` and merges while the
  /// top block is slower than its predecessor.
  void push_fixed(const ReleaseUnit& unit, double next_release);

  /// Pushes the final unit; its speed is set later from the budget.
  void push_last(const ReleaseUnit& unit);

  /// Merges the top block into its predecessor, which becomes budget-driven.
  void merge_top();

  double block_energy(const Block& b) const;

  std::vector<StackEntry>& entries() { return entries_; }
  const std::vector<StackEntry>& entries() const { return entries_; }
  std::size_t merges() const { return merges_; }
  void count_merges(std::size_t k) { merges_ += k; }

 private:
  double alpha_;
  std::vector<StackEntry> entries_;
  std::size_t merges_ = 0;
};

}  // namespace powersched::detail

#pragma once

// The complete energy/makespan tradeoff of a uniprocessor instance as a
// piecewise closed form. Between consecutive breakpoints only the last block
// changes speed, so each piece is
//
//   makespan(E) = s + W^(a/(a-1)) * (E - e_fixed)^(-1/(a-1))
//
// with s and W the start and work of the last block and e_fixed the energy of
// every other block.

#include <cstddef>
#include <limits>
#include <vector>

#include "powersched/core.hpp"
#include "powersched/makespan_uni.hpp"

namespace powersched {

struct CurveSegment {
  std::size_t fixed_blocks = 0;  // number of release-forced blocks before the last one
  double e_fixed = 0.0;
  double last_start = 0.0;
  double last_work = 0.0;
  double e_lo = 0.0;
  double e_hi = std::numeric_limits<double>::infinity();
  double alpha = 3.0;

  bool contains(double energy) const { return energy >= e_lo && energy < e_hi; }

  double makespan(double energy) const;
  /// d makespan / dE
  double first_derivative(double energy) const;
  /// d^2 makespan / dE^2
  double second_derivative(double energy) const;
  /// Inverse of makespan(E) on this segment's closed form.
  double energy_for(double makespan) const;
};

struct Frontier {
  double alpha = 3.0;
  std::vector<Block> top_blocks;       // configuration at unbounded energy
  std::vector<CurveSegment> segments;  // decreasing energy; the last one reaches down to 0
  std::vector<double> breakpoints;     // strictly decreasing

  /// Index of the segment whose range holds `energy` (> 0).
  std::size_t locate(double energy) const;

  /// Block configuration of segment `index` with the last block's speed at `energy`.
  std::vector<Block> configuration(std::size_t index, double energy) const;
};

Frontier build_frontier(const Instance& instance);

double eval_makespan(const Frontier& frontier, double energy);

struct FrontierSample {
  double energy = 0.0;
  double makespan = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  std::size_t segment = 0;
  bool breakpoint = false;
};

/// `count` evenly spaced energies on [e_lo, e_hi] plus every breakpoint in that
/// range, in increasing energy order.
std::vector<FrontierSample> sample_frontier(const Frontier& frontier, double e_lo, double e_hi,
                                            std::size_t count,
                                            Execution exec = Execution::parallel);

double energy_for_deadline(const Frontier& frontier, double deadline);

}  // namespace powersched

#pragma once

// Total flow of equal-work jobs on one processor under an energy budget.
//
// For a fixed speed of the final job (the tail speed sigma_n) the optimal
// schedule splits into chains: runs of jobs executed back to back from the
// first job's release. Inside a chain consecutive speeds satisfy
// s_k^a = s_{k+1}^a + sigma_n^a. A chain ends either before the next release
// (its tail runs at sigma_n) or exactly at it (pinned; its tail lies between
// sigma_n and (head_next^a + sigma_n^a)^(1/a)). Total energy grows strictly
// with sigma_n, so an outer bisection matches any budget.

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "powersched/core.hpp"

namespace powersched {

struct FlowChain {
  std::size_t first = 0;
  std::size_t last = 0;
  double start = 0.0;
  double tail_speed = 0.0;
  bool pinned = false;  // completion equals the next release

  std::size_t length() const { return last - first + 1; }
};

struct FlowSolverConfig {
  double epsilon_energy = 1e-9;  // relative budget mismatch
  double epsilon_speed = 1e-12;  // absolute bracket width when pinning a tail
  int max_iterations = 200;
};

/// Speeds of a chain of `length` jobs, head first: (tail^a + t*sigma_n^a)^(1/a)
/// for t = length-1 down to 0.
std::vector<double> chain_speeds(std::size_t length, double tail_speed, double sigma_n,
                                 double alpha);

struct TailSpeedSchedule {
  Schedule schedule;
  std::vector<FlowChain> chains;
  double sigma_n = 0.0;
};

TailSpeedSchedule schedule_for_tail_speed_detailed(const Instance& instance, double sigma_n,
                                                   const FlowSolverConfig& config = {});

inline Schedule schedule_for_tail_speed(const Instance& instance, double sigma_n,
                                        const FlowSolverConfig& config = {}) {
  return schedule_for_tail_speed_detailed(instance, sigma_n, config).schedule;
}

struct FlowResult {
  Schedule schedule;
  std::vector<FlowChain> chains;
  double sigma_n = 0.0;
  double flow = 0.0;
  double energy = 0.0;
  int iterations = 0;
};

FlowResult min_flow_for_energy(const Instance& instance, double energy_budget,
                               const FlowSolverConfig& config = {});

enum class SpeedRelation { gap, overlap, pinned };

const char* to_string(SpeedRelation r);

/// Which speed relation holds between job k and job k+1 of a uniprocessor flow
/// schedule, and how far the speeds are from satisfying it (relative).
struct RelationCheck {
  std::size_t job = 0;  // id of the earlier job
  std::size_t next_job = 0;
  SpeedRelation relation = SpeedRelation::gap;
  double residual = 0.0;
};

std::vector<RelationCheck> speed_relations(const Schedule& schedule, Tolerance tol = {});

struct EnergyWindow {
  double lo = 1.0;
  double hi = 100.0;
  std::size_t grid = 256;
};

/// Energy interval inside `window` where the job just before the last release
/// finishes exactly at that release. nullopt when no such regime is found.
std::optional<std::pair<double, double>> pinned_regime_bounds(
    const Instance& instance, const FlowSolverConfig& config = {}, EnergyWindow window = {},
    Execution exec = Execution::parallel);

namespace detail {

void require_equal_work(const Instance& instance);

/// Bisection on a common tail speed until `energy_of(sigma)` matches the budget.
/// `initial_hi` must satisfy energy_of(initial_hi) >= budget.
double bisect_tail_speed(const std::function<double(double)>& energy_of, double budget,
                         double initial_hi, const FlowSolverConfig& config, int& iterations);

}  // namespace detail

}  // namespace powersched

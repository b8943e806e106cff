#pragma once

// Slow reference optimizers, independent of the structural solvers, used to
// validate them on small instances.
//
//  * convex_oracle: for a fixed job order the problem is convex in
//    (start, completion) pairs. It is solved with a log-barrier interior point
//    method (damped Newton on the barrier, Eigen for the linear algebra).
//  * enumerate_assignments: exhausts all m^n job-to-processor maps. Makespan
//    uses block-partition enumeration per processor plus a bisection on the
//    common finish time; flow solves one joint convex program per map.

#include <cstddef>
#include <span>
#include <vector>

#include "powersched/core.hpp"
#include "powersched/multi.hpp"

namespace powersched {

enum class Metric { makespan, flow };

const char* to_string(Metric m);

struct OracleConfig {
  double duration_tolerance = 1e-11;  // target relative duality gap
  int max_rounds = 2000;              // Newton steps across all barrier stages
  std::size_t assignment_cap = 16;
};

struct OracleResult {
  std::vector<double> starts;     // per entry of `order`
  std::vector<double> durations;  // per entry of `order`
  double value = 0.0;
  double energy = 0.0;
  int rounds = 0;
};

/// Optimal metric value for jobs run on one processor in `order` (positions
/// into instance.jobs()) under `energy_budget`.
OracleResult convex_oracle(const Instance& instance, std::span<const std::size_t> order,
                           double energy_budget, Metric metric, const OracleConfig& config = {});

/// Same as convex_oracle for several processors sharing one budget; each row
/// lists the positions run on one processor, in execution order.
OracleResult convex_oracle_multi(const Instance& instance,
                                 const std::vector<std::vector<std::size_t>>& rows,
                                 double energy_budget, Metric metric,
                                 const OracleConfig& config = {});

/// Least energy to finish `jobs` (release order, one processor) by `deadline`,
/// minimized over every split into consecutive blocks. Infinity when infeasible.
double min_energy_for_deadline_bruteforce(std::span<const Job> jobs, double deadline,
                                          double alpha);

/// Optimal value of the metric for a fixed assignment.
double evaluate_assignment(const Instance& instance, const Assignment& assignment,
                           double energy_budget, Metric metric, const OracleConfig& config = {});

struct AssignmentSearch {
  Assignment best;
  double value = 0.0;
  std::size_t evaluated = 0;
};

AssignmentSearch enumerate_assignments(const Instance& instance, double energy_budget,
                                       Metric metric, const OracleConfig& config = {},
                                       Execution exec = Execution::parallel);

}  // namespace powersched

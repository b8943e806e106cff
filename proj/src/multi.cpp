#include "powersched/multi.hpp"

#include <numeric>

#include "powersched/curve.hpp"
#include "powersched/makespan_uni.hpp"
#include "powersched/oracle.hpp"

namespace powersched {

namespace {

void relabel(Schedule& schedule, std::size_t processor, std::size_t processors) {
  schedule.processors = processors;
  for (auto& item : schedule.items) item.processor = processor;
}

struct SubProblems {
  Assignment assignment;
  std::vector<std::vector<Job>> rows;
  std::vector<std::size_t> nonempty;  // 0-based processor indices with jobs
};

SubProblems cyclic_subproblems(const Instance& instance) {
  SubProblems sp;
  sp.assignment = cyclic_assign(instance.size(), instance.processors());
  sp.rows = split_by_assignment(instance, sp.assignment);
  for (std::size_t p = 0; p < sp.rows.size(); ++p) {
    if (!sp.rows[p].empty()) sp.nonempty.push_back(p);
  }
  return sp;
}

MultiResult assemble(const Instance& instance, Assignment assignment,
                     std::vector<Schedule> per_processor, double value) {
  MultiResult out;
  out.assignment = std::move(assignment);
  out.per_processor = std::move(per_processor);
  out.combined = combine(out.per_processor, instance.processors());
  out.combined.alpha = instance.alpha();
  out.value = value;
  out.energy = total_energy(out.combined);
  return out;
}

std::vector<Schedule> empty_schedules(const Instance& instance) {
  Schedule blank;
  blank.alpha = instance.alpha();
  blank.processors = instance.processors();
  return std::vector<Schedule>(instance.processors(), blank);
}

}  // namespace

Assignment cyclic_assign(std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw InvalidArgument("cyclic assignment needs n >= 1 and m >= 1");
  Assignment a;
  a.processors = m;
  a.processor_of.resize(n);
  for (std::size_t i = 1; i <= n; ++i) a.processor_of[i - 1] = i % m + 1;
  return a;
}

std::vector<std::vector<Job>> split_by_assignment(const Instance& instance,
                                                  const Assignment& assignment) {
  if (assignment.processor_of.size() != instance.size()) {
    throw InvalidArgument("assignment does not cover every job");
  }
  std::vector<std::vector<Job>> rows(assignment.processors);
  for (std::size_t k = 0; k < instance.size(); ++k) {
    const std::size_t p = assignment.processor_of[k];
    if (p == 0 || p > assignment.processors) throw InvalidArgument("processor index out of range");
    rows[p - 1].push_back(instance[k]);
  }
  return rows;
}

MultiResult multi_makespan_equal_work(const Instance& instance, double energy_budget) {
  if (!(energy_budget > 0.0) || !std::isfinite(energy_budget)) {
    throw InvalidArgument("energy budget must be positive");
  }
  // One processor needs no assignment, so IncMerge applies to any works.
  if (instance.processors() > 1) detail::require_equal_work(instance);
  const double alpha = instance.alpha();
  SubProblems sp = cyclic_subproblems(instance);
  auto schedules = empty_schedules(instance);

  if (sp.nonempty.size() == 1) {
    const std::size_t p = sp.nonempty.front();
    schedules[p] = inc_merge(Instance(sp.rows[p], alpha), energy_budget);
    relabel(schedules[p], p + 1, instance.processors());
    const double value = makespan(schedules[p]);
    return assemble(instance, std::move(sp.assignment), std::move(schedules), value);
  }

  std::vector<Instance> subs;
  std::vector<Frontier> frontiers;
  double lo = 0.0;
  for (std::size_t p : sp.nonempty) {
    subs.emplace_back(sp.rows[p], alpha);
    frontiers.push_back(build_frontier(subs.back()));
    lo = std::max(lo, sp.rows[p].back().release);
  }
  auto energy_at = [&](double deadline) {
    double e = 0.0;
    for (const auto& f : frontiers) e += energy_for_deadline(f, deadline);
    return e;
  };

  // E(T) decreases strictly in T and diverges as T approaches the latest release.
  double width = std::max(1.0, lo);
  while (energy_at(lo + width) > energy_budget) width *= 2.0;
  double hi = lo + width;
  double deadline = hi;
  bool converged = false;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double e = energy_at(mid);
    deadline = mid;
    if (relative_error(e, energy_budget) <= 1e-13) {
      converged = true;
      break;
    }
    if (e > energy_budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!converged) {
    deadline = 0.5 * (lo + hi);
    if (relative_error(energy_at(deadline), energy_budget) > 1e-9) {
      throw ConvergenceError("finish-time bisection missed the energy budget", deadline);
    }
  }

  for (std::size_t q = 0; q < sp.nonempty.size(); ++q) {
    const std::size_t p = sp.nonempty[q];
    schedules[p] = inc_merge(subs[q], energy_for_deadline(frontiers[q], deadline));
    relabel(schedules[p], p + 1, instance.processors());
  }
  MultiResult out = assemble(instance, std::move(sp.assignment), std::move(schedules), 0.0);
  out.value = makespan(out.combined);
  return out;
}

MultiResult multi_flow_equal_work(const Instance& instance, double energy_budget,
                                  const FlowSolverConfig& config) {
  detail::require_equal_work(instance);
  if (!(energy_budget > 0.0) || !std::isfinite(energy_budget)) {
    throw InvalidArgument("energy budget must be positive");
  }
  const double alpha = instance.alpha();
  SubProblems sp = cyclic_subproblems(instance);
  auto schedules = empty_schedules(instance);

  if (sp.nonempty.size() == 1) {
    const std::size_t p = sp.nonempty.front();
    FlowResult r = min_flow_for_energy(Instance(sp.rows[p], alpha), energy_budget, config);
    schedules[p] = std::move(r.schedule);
    relabel(schedules[p], p + 1, instance.processors());
    return assemble(instance, std::move(sp.assignment), std::move(schedules), r.flow);
  }

  std::vector<Instance> subs;
  for (std::size_t p : sp.nonempty) subs.emplace_back(sp.rows[p], alpha);

  // Final jobs of all processors share one speed.
  auto energy_of = [&](double sigma) {
    double e = 0.0;
    for (const auto& sub : subs) e += total_energy(schedule_for_tail_speed(sub, sigma, config));
    return e;
  };
  const double n = static_cast<double>(instance.size());
  const double hi = std::pow(energy_budget / (n * instance[0].work), 1.0 / (alpha - 1.0));
  int iterations = 0;
  const double sigma = detail::bisect_tail_speed(energy_of, energy_budget, hi, config, iterations);

  double flow = 0.0;
  for (std::size_t q = 0; q < sp.nonempty.size(); ++q) {
    const std::size_t p = sp.nonempty[q];
    schedules[p] = schedule_for_tail_speed(subs[q], sigma, config);
    relabel(schedules[p], p + 1, instance.processors());
    flow += total_flow(schedules[p]);
  }
  return assemble(instance, std::move(sp.assignment), std::move(schedules), flow);
}

long long PartitionInstance::total() const {
  return std::accumulate(elements.begin(), elements.end(), 0LL);
}

PartitionReduction partition_to_instance(const PartitionInstance& partition, double alpha) {
  if (partition.elements.empty()) throw InvalidArgument("partition multiset is empty");
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < partition.elements.size(); ++i) {
    if (partition.elements[i] <= 0) throw InvalidArgument("partition elements must be positive");
    jobs.push_back(Job{0.0, static_cast<double>(partition.elements[i]), i + 1});
  }
  const double total = static_cast<double>(partition.total());
  // Work B at speed 1 costs B * 1^(alpha-1) = B.
  return PartitionReduction{Instance(std::move(jobs), alpha, 2), total, total / 2.0};
}

PartitionDecision decide_partition_detailed(const PartitionInstance& partition,
                                            const OracleConfig& config) {
  PartitionReduction red = partition_to_instance(partition);
  PartitionDecision out;
  if (partition.total() % 2 != 0) return out;
  if (partition.elements.size() > config.assignment_cap) {
    throw TooLarge("partition demo is capped at " + std::to_string(config.assignment_cap) +
                   " elements");
  }
  const AssignmentSearch best =
      enumerate_assignments(red.instance, red.budget, Metric::makespan, config);
  out.best_makespan = best.value;
  out.partitionable = best.value <= red.target_makespan * (1.0 + 1e-9);
  if (out.partitionable) {
    std::array<std::vector<long long>, 2> split;
    for (std::size_t k = 0; k < red.instance.size(); ++k) {
      const std::size_t element = red.instance[k].id - 1;
      split[best.best.processor_of[k] - 1].push_back(partition.elements[element]);
    }
    out.witness = std::move(split);
  }
  return out;
}

PartitionDecision decide_partition_detailed(const PartitionInstance& partition) {
  return decide_partition_detailed(partition, OracleConfig{});
}

bool decide_partition_via_schedule(const PartitionInstance& partition) {
  return decide_partition_detailed(partition).partitionable;
}

}  // namespace powersched

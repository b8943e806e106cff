#include "powersched/makespan_uni.hpp"

#include "block_stack.hpp"
#include "powersched/curve.hpp"

namespace powersched {
namespace detail {

std::vector<ReleaseUnit> release_units(const Instance& instance, Tolerance tol) {
  std::vector<ReleaseUnit> units;
  const auto& jobs = instance.jobs();
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    if (!units.empty() && approx_equal(jobs[k].release, units.back().release, tol)) {
      units.back().last = k;
      units.back().work += jobs[k].work;
    } else {
      units.push_back(ReleaseUnit{k, k, jobs[k].release, jobs[k].work});
    }
  }
  return units;
}

double BlockStack::block_energy(const Block& b) const {
  return b.work * std::pow(b.speed, alpha_ - 1.0);
}

void BlockStack::push_fixed(const ReleaseUnit& unit, double next_release) {
  Block b{unit.first, unit.last, unit.release, unit.work / (next_release - unit.release),
          unit.work, true};
  const double below =
      entries_.empty() ? 0.0 : entries_.back().energy_below + block_energy(entries_.back().block);
  entries_.push_back(StackEntry{b, below});

  while (entries_.size() >= 2) {
    Block& top = entries_.back().block;
    Block& prev = entries_[entries_.size() - 2].block;
    if (!definitely_less(top.speed, prev.speed)) break;
    prev.last = top.last;
    prev.work += top.work;
    prev.speed = prev.work / (next_release - prev.start);
    entries_.pop_back();
    ++merges_;
  }
}

void BlockStack::push_last(const ReleaseUnit& unit) {
  Block b{unit.first, unit.last, unit.release, 0.0, unit.work, false};
  const double below =
      entries_.empty() ? 0.0 : entries_.back().energy_below + block_energy(entries_.back().block);
  entries_.push_back(StackEntry{b, below});
}

void BlockStack::merge_top() {
  Block top = entries_.back().block;
  entries_.pop_back();
  Block& prev = entries_.back().block;
  prev.last = top.last;
  prev.work += top.work;
  prev.fixed = false;
  ++merges_;
}

}  // namespace detail

double fixed_block_speed(const Instance& instance, std::size_t first, std::size_t last) {
  if (first > last || last >= instance.size()) {
    throw InvalidArgument("block indices out of range");
  }
  if (last + 1 == instance.size()) {
    throw InvalidArgument("the last block has no release-forced speed");
  }
  const double start = instance[first].release;
  const double end = instance[last + 1].release;
  if (end - start <= Tolerance{}.slack(end, start)) {
    throw DegenerateRelease("block starts at the release that follows it");
  }
  double work = 0.0;
  for (std::size_t k = first; k <= last; ++k) work += instance[k].work;
  return work / (end - start);
}

Schedule schedule_from_blocks(const Instance& instance, const std::vector<Block>& blocks,
                              std::size_t processor) {
  Schedule schedule;
  schedule.alpha = instance.alpha();
  schedule.processors = std::max<std::size_t>(processor, 1);
  schedule.items.reserve(instance.size());
  for (const Block& b : blocks) {
    double t = b.start;
    for (std::size_t k = b.first; k <= b.last; ++k) {
      schedule.items.push_back(ScheduledJob{instance[k], t, b.speed, processor});
      t += instance[k].work / b.speed;
    }
  }
  return schedule;
}

IncMergeResult inc_merge_detailed(const Instance& instance, double energy_budget) {
  if (!(energy_budget > 0.0) || !std::isfinite(energy_budget)) {
    throw InvalidArgument("energy budget must be positive");
  }
  const PowerModel model = instance.model();
  const auto units = detail::release_units(instance);

  detail::BlockStack stack(model.alpha());
  stack.count_merges(instance.size() - units.size());
  for (std::size_t u = 0; u + 1 < units.size(); ++u) {
    stack.push_fixed(units[u], units[u + 1].release);
  }
  stack.push_last(units.back());

  auto& entries = stack.entries();
  for (;;) {
    auto& top = entries.back();
    const double remaining = energy_budget - top.energy_below;
    if (entries.size() >= 2) {
      const double prev_speed = entries[entries.size() - 2].block.speed;
      if (remaining <= 0.0 ||
          definitely_less(speed_for_energy(top.block.work, remaining, model), prev_speed)) {
        stack.merge_top();
        continue;
      }
    }
    top.block.speed = speed_for_energy(top.block.work, remaining, model);
    top.block.fixed = false;
    break;
  }

  IncMergeResult result;
  result.blocks.reserve(entries.size());
  for (const auto& e : entries) result.blocks.push_back(e.block);
  result.merges = stack.merges();
  result.schedule = schedule_from_blocks(instance, result.blocks);
  return result;
}

double energy_for_deadline(const Instance& instance, double deadline) {
  return energy_for_deadline(build_frontier(instance), deadline);
}

}  // namespace powersched

#include "powersched/core.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace powersched {

PowerModel::PowerModel(double alpha) : alpha_(alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw InvalidArgument("power exponent must be a finite number > 1");
  }
}

double energy_of_run(double work, double speed, const PowerModel& model) {
  if (!(work > 0.0) || !(speed > 0.0)) {
    throw InvalidArgument("energy_of_run requires positive work and speed");
  }
  return work * std::pow(speed, model.alpha() - 1.0);
}

double speed_for_energy(double work, double energy, const PowerModel& model) {
  if (!(work > 0.0) || !(energy > 0.0)) {
    throw InvalidArgument("speed_for_energy requires positive work and energy");
  }
  return std::pow(energy / work, 1.0 / (model.alpha() - 1.0));
}

Instance::Instance(std::vector<Job> jobs, double alpha, std::size_t processors)
    : jobs_(std::move(jobs)), alpha_(PowerModel(alpha).alpha()), processors_(processors) {
  if (jobs_.empty()) throw InvalidArgument("instance has no jobs");
  if (processors_ == 0) throw InvalidArgument("processor count must be positive");
  for (const Job& job : jobs_) {
    if (!(job.work > 0.0) || !std::isfinite(job.work)) {
      throw InvalidArgument("job " + std::to_string(job.id) + " has nonpositive work");
    }
    if (!(job.release >= 0.0) || !std::isfinite(job.release)) {
      throw InvalidArgument("job " + std::to_string(job.id) + " has a negative release time");
    }
  }
  std::stable_sort(jobs_.begin(), jobs_.end(), [](const Job& a, const Job& b) {
    if (a.release != b.release) return a.release < b.release;
    return a.id < b.id;
  });
}

Instance Instance::from_arrays(std::span<const double> releases, std::span<const double> works,
                               double alpha, std::size_t processors) {
  if (releases.size() != works.size()) {
    throw InvalidArgument("release and work arrays differ in length");
  }
  std::vector<Job> jobs(releases.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) jobs[i] = Job{releases[i], works[i], i + 1};
  return Instance(std::move(jobs), alpha, processors);
}

double Instance::total_work() const {
  return std::accumulate(jobs_.begin(), jobs_.end(), 0.0,
                         [](double acc, const Job& j) { return acc + j.work; });
}

bool Instance::has_equal_work(double rel) const {
  const double w0 = jobs_.front().work;
  return std::all_of(jobs_.begin(), jobs_.end(),
                     [&](const Job& j) { return std::fabs(j.work - w0) <= rel * w0; });
}

Instance Instance::with_processors(std::size_t processors) const {
  return Instance(jobs_, alpha_, processors);
}

std::vector<ScheduledJob> Schedule::on_processor(std::size_t processor) const {
  std::vector<ScheduledJob> out;
  for (const auto& item : items) {
    if (item.processor == processor) out.push_back(item);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ScheduledJob& a, const ScheduledJob& b) { return a.start < b.start; });
  return out;
}

Schedule combine(std::span<const Schedule> parts, std::size_t processors) {
  Schedule out;
  out.processors = processors;
  if (!parts.empty()) out.alpha = parts.front().alpha;
  for (const auto& part : parts) {
    out.items.insert(out.items.end(), part.items.begin(), part.items.end());
  }
  return out;
}

double makespan(const Schedule& schedule) {
  if (schedule.items.empty()) throw InvalidArgument("makespan of an empty schedule");
  double best = schedule.items.front().completion();
  for (const auto& item : schedule.items) best = std::max(best, item.completion());
  return best;
}

double total_flow(const Schedule& schedule) {
  if (schedule.items.empty()) throw InvalidArgument("total flow of an empty schedule");
  double sum = 0.0;
  for (const auto& item : schedule.items) sum += item.completion() - item.job.release;
  return sum;
}

double total_energy(const Schedule& schedule) {
  const PowerModel model(schedule.alpha);
  double sum = 0.0;
  for (const auto& item : schedule.items) sum += energy_of_run(item.job.work, item.speed, model);
  return sum;
}

ValidityReport check_valid(const Schedule& schedule, const Instance& instance, Tolerance tol) {
  ValidityReport report;
  std::ostringstream msg;

  std::map<std::size_t, int> seen;
  for (const auto& item : schedule.items) ++seen[item.job.id];
  for (const Job& job : instance.jobs()) {
    auto it = seen.find(job.id);
    if (it == seen.end() || it->second != 1) {
      report.every_job_once = false;
      msg << "job " << job.id << " is not scheduled exactly once; ";
    }
  }
  if (seen.size() != instance.size()) report.every_job_once = false;

  for (const auto& item : schedule.items) {
    if (!(item.speed > 0.0) || !std::isfinite(item.speed)) {
      report.positive_speeds = false;
      msg << "job " << item.job.id << " has a nonpositive speed; ";
    }
    if (definitely_less(item.start, item.job.release, tol)) {
      report.releases_respected = false;
      msg << "job " << item.job.id << " starts before its release; ";
    }
    if (item.processor == 0 || item.processor > schedule.processors) {
      report.no_overlap = false;
      msg << "job " << item.job.id << " is on an unknown processor; ";
    }
  }

  for (std::size_t p = 1; p <= schedule.processors; ++p) {
    const auto row = schedule.on_processor(p);
    for (std::size_t k = 1; k < row.size(); ++k) {
      if (definitely_less(row[k].start, row[k - 1].completion(), tol)) {
        report.no_overlap = false;
        msg << "jobs " << row[k - 1].job.id << " and " << row[k].job.id << " overlap; ";
      }
    }
  }
  report.message = msg.str();
  return report;
}

CanonicalReport check_canonical(const Schedule& schedule, Tolerance tol) {
  if (schedule.items.empty()) throw InvalidArgument("canonical check of an empty schedule");
  const std::size_t proc = schedule.items.front().processor;
  for (const auto& item : schedule.items) {
    if (item.processor != proc) {
      throw InvalidArgument("canonical check applies to one processor at a time");
    }
  }
  const auto row = schedule.on_processor(proc);

  CanonicalReport report;

  std::unordered_set<std::size_t> ids;
  report.single_speed = true;
  for (const auto& item : row) {
    if (!ids.insert(item.job.id).second || !(item.speed > 0.0)) report.single_speed = false;
  }

  report.release_order = true;
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (definitely_less(row[k].start, row[k].job.release, tol)) report.release_order = false;
    if (k > 0 && row[k].job.release < row[k - 1].job.release) report.release_order = false;
  }

  double first_release = row.front().job.release;
  for (const auto& item : row) first_release = std::min(first_release, item.job.release);
  report.no_idle = approx_equal(row.front().start, first_release, tol);
  for (std::size_t k = 1; k < row.size(); ++k) {
    if (!approx_equal(row[k].start, row[k - 1].completion(), tol)) report.no_idle = false;
  }

  report.block_constant_speed = true;
  report.nondecreasing_block_speeds = true;
  for (std::size_t k = 0; k + 1 < row.size(); ++k) {
    const double completion = row[k].completion();
    const double next_release = row[k + 1].job.release;
    const bool continues = completion > next_release + tol.slack(completion, next_release);
    if (continues) {
      if (!approx_equal(row[k].speed, row[k + 1].speed, tol)) report.block_constant_speed = false;
    } else if (definitely_less(row[k + 1].speed, row[k].speed, tol)) {
      report.nondecreasing_block_speeds = false;
    }
  }
  return report;
}

}  // namespace powersched

#pragma once

// Domain types shared by every solver: jobs, instances, the power-law model,
// timed schedules, schedule metrics and the canonical-structure checker.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace powersched {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two releases coincide where a forced (finite) block speed is required.
class DegenerateRelease : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InfeasibleDeadline : public Error {
 public:
  using Error::Error;
};

/// The instance is valid but outside what the solver handles (e.g. unequal works).
class UnsupportedInstance : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_value)
      : Error(what), best_value_(best_value) {}
  double best_value() const { return best_value_; }

 private:
  double best_value_;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Tolerances
// ---------------------------------------------------------------------------

/// Relative tolerance with an absolute floor, applied to times, speeds and energies.
struct Tolerance {
  double rel = 1e-9;
  double abs = 1e-12;

  double slack(double a, double b) const {
    return std::max(abs, rel * std::max(std::fabs(a), std::fabs(b)));
  }
};

inline bool approx_equal(double a, double b, Tolerance tol = {}) {
  if (a == b) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::fabs(a - b) <= tol.slack(a, b);
}

/// a < b by more than the tolerance.
inline bool definitely_less(double a, double b, Tolerance tol = {}) {
  if (!std::isfinite(a) || !std::isfinite(b)) return a < b;
  return a < b - tol.slack(a, b);
}

inline double relative_error(double value, double reference) {
  return std::fabs(value - reference) / std::max(std::fabs(reference), 1e-300);
}

enum class Execution { serial, parallel };

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

struct Job {
  double release = 0.0;
  double work = 1.0;
  std::size_t id = 0;  // 1-based input index
};

/// power = speed^alpha, alpha > 1.
class PowerModel {
 public:
  explicit PowerModel(double alpha);

  double alpha() const { return alpha_; }
  double power(double speed) const { return std::pow(speed, alpha_); }

 private:
  double alpha_;
};

/// Energy of running `work` at constant `speed`: work * speed^(alpha-1).
double energy_of_run(double work, double speed, const PowerModel& model);

/// Constant speed at which `work` consumes exactly `energy`.
double speed_for_energy(double work, double energy, const PowerModel& model);

/// Jobs sorted by release (ties by id), the power exponent and the processor count.
class Instance {
 public:
  Instance(std::vector<Job> jobs, double alpha, std::size_t processors = 1);

  /// Builds jobs with ids 1..n from parallel release/work arrays.
  static Instance from_arrays(std::span<const double> releases, std::span<const double> works,
                              double alpha, std::size_t processors = 1);

  const std::vector<Job>& jobs() const { return jobs_; }
  const Job& operator[](std::size_t i) const { return jobs_[i]; }
  std::size_t size() const { return jobs_.size(); }
  double alpha() const { return alpha_; }
  PowerModel model() const { return PowerModel(alpha_); }
  std::size_t processors() const { return processors_; }
  double total_work() const;

  /// True when all works agree within `rel` relative tolerance.
  bool has_equal_work(double rel = 1e-12) const;

  Instance with_processors(std::size_t processors) const;

 private:
  std::vector<Job> jobs_;
  double alpha_;
  std::size_t processors_;
};

struct ScheduledJob {
  Job job;
  double start = 0.0;
  double speed = 1.0;
  std::size_t processor = 1;  // 1-based

  double duration() const { return job.work / speed; }
  double completion() const { return start + job.work / speed; }
};

/// Timed executions of jobs, possibly spread over several processors.
struct Schedule {
  std::vector<ScheduledJob> items;
  double alpha = 3.0;
  std::size_t processors = 1;

  /// Items on one processor, ordered by start time.
  std::vector<ScheduledJob> on_processor(std::size_t processor) const;
};

/// Concatenates per-processor schedules into one multiprocessor schedule.
Schedule combine(std::span<const Schedule> parts, std::size_t processors);

double makespan(const Schedule& schedule);
double total_flow(const Schedule& schedule);
double total_energy(const Schedule& schedule);

struct ValidityReport {
  bool every_job_once = true;
  bool releases_respected = true;
  bool no_overlap = true;
  bool positive_speeds = true;
  std::string message;

  bool ok() const { return every_job_once && releases_respected && no_overlap && positive_speeds; }
};

ValidityReport check_valid(const Schedule& schedule, const Instance& instance, Tolerance tol = {});

/// The five structural properties that characterize the unique optimal
/// uniprocessor makespan schedule.
struct CanonicalReport {
  bool single_speed = false;
  bool release_order = false;
  bool no_idle = false;
  bool block_constant_speed = false;
  bool nondecreasing_block_speeds = false;

  bool all() const {
    return single_speed && release_order && no_idle && block_constant_speed &&
           nondecreasing_block_speeds;
  }
};

/// Uniprocessor only. A pair of consecutive jobs continues a block when the
/// first completes strictly after the second's release (beyond tolerance);
/// a completion within tolerance of the release is a permissible boundary.
CanonicalReport check_canonical(const Schedule& schedule, Tolerance tol = {});

}  // namespace powersched

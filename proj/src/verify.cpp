#include "powersched/verify.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <numeric>

#include "powersched/flow_uni.hpp"
#include "powersched/makespan_uni.hpp"
#include "powersched/multi.hpp"
#include "powersched/oracle.hpp"

namespace powersched {

Instance random_instance(std::mt19937_64& rng, const RandomInstanceOptions& shape) {
  if (shape.min_jobs == 0 || shape.max_jobs < shape.min_jobs || shape.alphas.empty()) {
    throw InvalidArgument("bad random instance options");
  }
  std::uniform_int_distribution<std::size_t> count(shape.min_jobs, shape.max_jobs);
  std::uniform_int_distribution<std::size_t> pick_alpha(0, shape.alphas.size() - 1);
  // Releases on a half-unit grid so that ties occur now and then.
  std::uniform_int_distribution<int> release_steps(0, static_cast<int>(2.0 * shape.max_release));
  std::uniform_real_distribution<double> work(0.5, shape.max_work);

  const std::size_t n = count(rng);
  const double alpha = shape.alphas[pick_alpha(rng)];
  const double common = work(rng);
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = 0.5 * release_steps(rng);
    jobs.push_back(Job{r, shape.equal_work ? common : work(rng), i + 1});
  }
  return Instance(std::move(jobs), alpha, shape.processors);
}

double random_budget(std::mt19937_64& rng, const Instance& instance) {
  std::uniform_real_distribution<double> log_speed(std::log(0.3), std::log(3.0));
  const double speed = std::exp(log_speed(rng));
  return instance.total_work() * std::pow(speed, instance.alpha() - 1.0);
}

namespace {

struct Check {
  std::string name;
  double error = 0.0;
  bool ok = true;
  std::string note;
};

std::string format_line(std::size_t index, const Instance& inst, const Instance& multi,
                        const std::vector<Check>& checks, bool passed) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "instance %zu n=%zu alpha=%g multi_n=%zu m=%zu", index,
                inst.size(), inst.alpha(), multi.size(), multi.processors());
  std::string line = buf;
  for (const auto& c : checks) {
    if (!c.note.empty()) {
      line += " " + c.name + "=" + c.note;
    } else {
      std::snprintf(buf, sizeof buf, " %s=%.1e", c.name.c_str(), c.error);
      line += buf;
    }
  }
  line += passed ? " PASS" : " FAIL";
  return line;
}

template <class F>
Check run_check(const std::string& name, double tolerance, F&& f) {
  Check c;
  c.name = name;
  try {
    c.error = f();
    c.ok = c.error <= tolerance;
  } catch (const std::exception& e) {
    c.ok = false;
    c.note = "error";
  }
  return c;
}

std::vector<std::size_t> identity(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

VerifyLine verify_one(const VerifyOptions& options, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint64_t>(options.seed), static_cast<std::uint64_t>(index)};
  std::mt19937_64 rng(seq);
  std::vector<Check> checks;

  RandomInstanceOptions shape;
  shape.max_jobs = options.max_jobs;
  const Instance inst = random_instance(rng, shape);
  const double budget = random_budget(rng, inst);
  const auto order = identity(inst.size());

  checks.push_back(run_check("makespan", options.tolerance, [&] {
    const Schedule s = inc_merge(inst, budget);
    if (!check_canonical(s).all()) throw InternalError("non-canonical schedule");
    return relative_error(makespan(s), convex_oracle(inst, order, budget, Metric::makespan).value);
  }));

  shape.equal_work = true;
  const Instance eq = random_instance(rng, shape);
  const double eq_budget = random_budget(rng, eq);
  checks.push_back(run_check("flow", options.tolerance, [&] {
    const FlowResult r = min_flow_for_energy(eq, eq_budget);
    return relative_error(r.flow, convex_oracle(eq, identity(eq.size()), eq_budget, Metric::flow).value);
  }));

  // Multiprocessor checks on a smaller equal-work instance.
  shape.max_jobs = std::min<std::size_t>(options.max_jobs, 6);
  shape.processors = 2 + index % 2;
  const Instance multi = random_instance(rng, shape);
  const double multi_budget = random_budget(rng, multi);
  checks.push_back(run_check("multi_makespan", options.tolerance, [&] {
    const MultiResult r = multi_makespan_equal_work(multi, multi_budget);
    return relative_error(r.value, enumerate_assignments(multi, multi_budget, Metric::makespan).value);
  }));
  checks.push_back(run_check("multi_flow", options.tolerance, [&] {
    const MultiResult r = multi_flow_equal_work(multi, multi_budget);
    return relative_error(r.value, enumerate_assignments(multi, multi_budget, Metric::flow).value);
  }));

  bool passed = true;
  for (const auto& c : checks) passed = passed && c.ok;
  VerifyLine line;
  line.index = index;
  line.passed = passed;
  line.text = format_line(index, inst, multi, checks, passed);
  return line;
}

}  // namespace

std::vector<VerifyLine> run_verification(const VerifyOptions& options) {
  if (options.max_jobs == 0 || options.max_jobs > 12) {
    throw InvalidArgument("verify supports 1 to 12 jobs per instance");
  }
  std::vector<VerifyLine> lines;
  lines.reserve(options.count);
  for (std::size_t i = 0; i < options.count; ++i) lines.push_back(verify_one(options, i));
  return lines;
}

}  // namespace powersched

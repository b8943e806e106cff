#include "powersched/flow_uni.hpp"

#include <exception>
#include <limits>
#include <sstream>

namespace powersched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Chain construction for one tail speed. Segments live on a stack; each is
/// resolved against the release that follows it, and a pinned segment whose
/// tail exceeds what its successor's head allows is merged into it.
class ChainBuilder {
 public:
  ChainBuilder(const Instance& instance, double sigma_n, const FlowSolverConfig& config)
      : inst_(instance),
        config_(config),
        alpha_(instance.alpha()),
        work_(instance[0].work),
        sigma_n_(sigma_n),
        sigma_n_pow_(std::pow(sigma_n, instance.alpha())) {}

  std::vector<FlowChain> run() {
    const std::size_t n = inst_.size();
    for (std::size_t j = 0; j < n; ++j) {
      stack_.push_back(FlowChain{j, j, inst_[j].release, 0.0, false});
      resolve(stack_.back());
      while (stack_.size() >= 2 && violates(stack_[stack_.size() - 2], stack_.back())) {
        const std::size_t last = stack_.back().last;
        stack_.pop_back();
        stack_.back().last = last;
        resolve(stack_.back());
      }
    }
    return stack_;
  }

 private:
  double duration(std::size_t length, double tail) const {
    if (tail == kInf) return 0.0;
    const double tail_pow = std::pow(tail, alpha_);
    double d = 0.0;
    for (std::size_t t = 0; t < length; ++t) {
      d += work_ / std::pow(tail_pow + static_cast<double>(t) * sigma_n_pow_, 1.0 / alpha_);
    }
    return d;
  }

  double head_pow(const FlowChain& c) const {
    if (c.tail_speed == kInf) return kInf;
    return std::pow(c.tail_speed, alpha_) + static_cast<double>(c.length() - 1) * sigma_n_pow_;
  }

  bool violates(const FlowChain& prev, const FlowChain& next) const {
    if (!prev.pinned) return false;
    const double allowed = sigma_n_pow_ + head_pow(next);
    if (allowed == kInf) return false;
    if (prev.tail_speed == kInf) return true;
    const double tail_pow = std::pow(prev.tail_speed, alpha_);
    return tail_pow > allowed + Tolerance{}.slack(tail_pow, allowed);
  }

  void resolve(FlowChain& c) const {
    const std::size_t n = inst_.size();
    if (c.last + 1 == n) {
      c.tail_speed = sigma_n_;
      c.pinned = false;
      return;
    }
    const double next_release = inst_[c.last + 1].release;
    const double available = next_release - c.start;
    if (available <= Tolerance{}.slack(next_release, c.start)) {
      c.tail_speed = kInf;
      c.pinned = true;
      return;
    }
    const std::size_t len = c.length();
    if (duration(len, sigma_n_) <= available) {
      c.tail_speed = sigma_n_;
      c.pinned = false;
      return;
    }
    // Completion is strictly decreasing in the tail speed; every member runs at
    // least at the tail speed, so `hi` finishes within the available time.
    double lo = sigma_n_;
    double hi = std::max(sigma_n_, static_cast<double>(len) * work_ / available);
    int it = 0;
    for (;;) {
      const double width = hi - lo;
      if (width <= config_.epsilon_speed * std::min(1.0, lo)) break;
      const double mid = lo + 0.5 * width;
      if (mid <= lo || mid >= hi) break;
      if (duration(len, mid) > available) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (++it > config_.max_iterations) {
        throw ConvergenceError("pinned tail speed did not converge", 0.5 * (lo + hi));
      }
    }
    c.tail_speed = 0.5 * (lo + hi);
    c.pinned = true;
  }

  const Instance& inst_;
  FlowSolverConfig config_;
  double alpha_;
  double work_;
  double sigma_n_;
  double sigma_n_pow_;
  std::vector<FlowChain> stack_;
};

}  // namespace

namespace detail {

void require_equal_work(const Instance& instance) {
  if (!instance.has_equal_work()) {
    throw UnsupportedInstance("this solver requires jobs with equal work");
  }
}

double bisect_tail_speed(const std::function<double(double)>& energy_of, double budget,
                         double initial_hi, const FlowSolverConfig& config, int& iterations) {
  const double eps = config.epsilon_energy;
  iterations = 0;
  double hi = initial_hi;
  double e_hi = energy_of(hi);
  if (relative_error(e_hi, budget) <= eps) return hi;
  if (e_hi < budget) {
    std::ostringstream msg;
    msg << "tail speed " << hi << " uses " << e_hi << " < budget " << budget
        << "; upper bracket invalid";
    throw InternalError(msg.str());
  }

  double lo = 0.5 * hi;
  double e_lo = energy_of(lo);
  while (e_lo >= budget) {
    if (relative_error(e_lo, budget) <= eps) return lo;
    if (e_lo > e_hi) {
      std::ostringstream msg;
      msg << "energy not monotone in tail speed: E(" << lo << ")=" << e_lo << " > E(" << hi
          << ")=" << e_hi;
      throw InternalError(msg.str());
    }
    hi = lo;
    e_hi = e_lo;
    lo *= 0.5;
    e_lo = energy_of(lo);
    if (++iterations > config.max_iterations) {
      throw ConvergenceError("could not bracket the budget from below", lo);
    }
  }

  while (iterations++ < config.max_iterations) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double e_mid = energy_of(mid);
    if (relative_error(e_mid, budget) <= eps) return mid;
    if (e_mid < e_lo || e_mid > e_hi) {
      std::ostringstream msg;
      msg << "energy not monotone in tail speed near " << mid << ": " << e_lo << " / " << e_mid
          << " / " << e_hi;
      throw InternalError(msg.str());
    }
    if (e_mid < budget) {
      lo = mid;
      e_lo = e_mid;
    } else {
      hi = mid;
      e_hi = e_mid;
    }
  }
  throw ConvergenceError("tail speed bisection did not reach the energy tolerance",
                         0.5 * (lo + hi));
}

}  // namespace detail

std::vector<double> chain_speeds(std::size_t length, double tail_speed, double sigma_n,
                                 double alpha) {
  if (length == 0) throw InvalidArgument("chain length must be positive");
  if (!(sigma_n > 0.0) || !std::isfinite(tail_speed)) {
    throw InvalidArgument("chain speeds need a positive tail speed");
  }
  if (tail_speed < sigma_n * (1.0 - 1e-12)) {
    throw InvalidArgument("chain tail speed below the final job's speed");
  }
  const double tail_pow = std::pow(tail_speed, alpha);
  const double base = std::pow(sigma_n, alpha);
  std::vector<double> speeds(length);
  for (std::size_t k = 0; k < length; ++k) {
    const double t = static_cast<double>(length - 1 - k);
    speeds[k] = t == 0.0 ? tail_speed : std::pow(tail_pow + t * base, 1.0 / alpha);
  }
  return speeds;
}

TailSpeedSchedule schedule_for_tail_speed_detailed(const Instance& instance, double sigma_n,
                                                   const FlowSolverConfig& config) {
  detail::require_equal_work(instance);
  if (!(sigma_n > 0.0) || !std::isfinite(sigma_n)) {
    throw InvalidArgument("tail speed must be positive");
  }
  TailSpeedSchedule out;
  out.sigma_n = sigma_n;
  out.chains = ChainBuilder(instance, sigma_n, config).run();
  out.schedule.alpha = instance.alpha();
  out.schedule.processors = 1;
  out.schedule.items.reserve(instance.size());
  for (const FlowChain& c : out.chains) {
    const auto speeds = chain_speeds(c.length(), c.tail_speed, sigma_n, instance.alpha());
    double t = c.start;
    for (std::size_t k = c.first; k <= c.last; ++k) {
      const double speed = speeds[k - c.first];
      out.schedule.items.push_back(ScheduledJob{instance[k], t, speed, 1});
      t += instance[k].work / speed;
    }
  }
  return out;
}

FlowResult min_flow_for_energy(const Instance& instance, double energy_budget,
                               const FlowSolverConfig& config) {
  detail::require_equal_work(instance);
  if (!(energy_budget > 0.0) || !std::isfinite(energy_budget)) {
    throw InvalidArgument("energy budget must be positive");
  }
  const double n = static_cast<double>(instance.size());
  const double work = instance[0].work;
  // Every job runs at least at the tail speed, so this tail speed overspends.
  const double hi = std::pow(energy_budget / (n * work), 1.0 / (instance.alpha() - 1.0));

  FlowResult result;
  const double sigma = detail::bisect_tail_speed(
      [&](double s) { return total_energy(schedule_for_tail_speed(instance, s, config)); },
      energy_budget, hi, config, result.iterations);

  auto detailed = schedule_for_tail_speed_detailed(instance, sigma, config);
  result.schedule = std::move(detailed.schedule);
  result.chains = std::move(detailed.chains);
  result.sigma_n = sigma;
  result.flow = total_flow(result.schedule);
  result.energy = total_energy(result.schedule);
  return result;
}

const char* to_string(SpeedRelation r) {
  switch (r) {
    case SpeedRelation::gap:
      return "gap";
    case SpeedRelation::overlap:
      return "overlap";
    case SpeedRelation::pinned:
      return "pinned";
  }
  return "?";
}

std::vector<RelationCheck> speed_relations(const Schedule& schedule, Tolerance tol) {
  if (schedule.items.empty()) throw InvalidArgument("empty schedule");
  const auto row = schedule.on_processor(schedule.items.front().processor);
  if (row.size() != schedule.items.size()) {
    throw InvalidArgument("speed relations apply to one processor at a time");
  }
  const double a = schedule.alpha;
  const double sigma_n = row.back().speed;
  const double sigma_n_pow = std::pow(sigma_n, a);

  std::vector<RelationCheck> out;
  for (std::size_t k = 0; k + 1 < row.size(); ++k) {
    RelationCheck rc;
    rc.job = row[k].job.id;
    rc.next_job = row[k + 1].job.id;
    const double completion = row[k].completion();
    const double next_release = row[k + 1].job.release;
    const double s = row[k].speed;
    const double s_pow = std::pow(s, a);
    const double overlap_gap = s_pow - std::pow(row[k + 1].speed, a) - sigma_n_pow;
    if (definitely_less(completion, next_release, tol)) {
      rc.relation = SpeedRelation::gap;
      rc.residual = std::fabs(s - sigma_n) / sigma_n;
    } else if (definitely_less(next_release, completion, tol)) {
      rc.relation = SpeedRelation::overlap;
      rc.residual = std::fabs(overlap_gap) / s_pow;
    } else {
      rc.relation = SpeedRelation::pinned;
      rc.residual = std::max(0.0, sigma_n - s) / sigma_n + std::max(0.0, overlap_gap) / s_pow;
    }
    out.push_back(rc);
  }
  return out;
}

std::optional<std::pair<double, double>> pinned_regime_bounds(const Instance& instance,
                                                              const FlowSolverConfig& config,
                                                              EnergyWindow window,
                                                              Execution exec) {
  detail::require_equal_work(instance);
  if (!(window.lo > 0.0) || !(window.hi > window.lo) || window.grid < 2) {
    throw InvalidArgument("energy window must satisfy 0 < lo < hi with at least two grid points");
  }
  const std::size_t n = instance.size();
  const double last_release = instance[n - 1].release;
  std::optional<std::size_t> boundary;
  for (std::size_t k = n - 1; k-- > 0;) {
    if (definitely_less(instance[k].release, last_release)) {
      boundary = k;
      break;
    }
  }
  if (!boundary) return std::nullopt;

  auto pinned_at = [&](double energy) {
    const FlowResult r = min_flow_for_energy(instance, energy, config);
    for (const FlowChain& c : r.chains) {
      if (c.last == *boundary) return c.pinned;
    }
    return false;
  };

  const std::size_t g = window.grid;
  std::vector<double> grid(g);
  const double ratio = std::log(window.hi / window.lo);
  for (std::size_t k = 0; k < g; ++k) {
    grid[k] = k + 1 == g ? window.hi
                         : window.lo * std::exp(ratio * static_cast<double>(k) /
                                                static_cast<double>(g - 1));
  }

  std::vector<char> flags(g, 0);
  const auto gn = static_cast<std::ptrdiff_t>(g);
  if (exec == Execution::parallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < gn; ++k) {
      try {
        flags[k] = pinned_at(grid[k]) ? 1 : 0;
      } catch (...) {
#pragma omp critical
        failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (std::ptrdiff_t k = 0; k < gn; ++k) flags[k] = pinned_at(grid[k]) ? 1 : 0;
  }

  std::size_t first = 0;
  while (first < g && !flags[first]) ++first;
  if (first == g) return std::nullopt;
  std::size_t last = first;
  while (last + 1 < g && flags[last + 1]) ++last;

  // Refines the edge between an energy where the predicate is `inside` and one where it is not.
  auto refine = [&](double inside, double outside) {
    for (int it = 0; it < 100 && std::fabs(outside - inside) > 1e-10 * inside; ++it) {
      const double mid = 0.5 * (inside + outside);
      if (pinned_at(mid)) {
        inside = mid;
      } else {
        outside = mid;
      }
    }
    return 0.5 * (inside + outside);
  };

  const double lower = first == 0 ? window.lo : refine(grid[first], grid[first - 1]);
  const double upper = last + 1 == g ? window.hi : refine(grid[last], grid[last + 1]);
  return std::make_pair(lower, upper);
}

}  // namespace powersched

#include "powersched/oracle.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <exception>
#include <limits>
#include <sstream>

namespace powersched {

const char* to_string(Metric m) { return m == Metric::makespan ? "makespan" : "flow"; }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Variables: (S_k, C_k) for every scheduled job k, then T for makespan.
// Constraints a.x - b > 0 plus the energy budget.
class BarrierProgram {
 public:
  BarrierProgram(const Instance& instance, const std::vector<std::vector<std::size_t>>& rows,
                 double budget, Metric metric)
      : alpha_(instance.alpha()), budget_(budget), metric_(metric) {
    for (const auto& row : rows) {
      for (std::size_t pos : row) jobs_.push_back(instance.jobs().at(pos));
    }
    n_jobs_ = jobs_.size();
    n_vars_ = 2 * n_jobs_ + (metric == Metric::makespan ? 1 : 0);

    std::size_t k = 0;
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i, ++k) {
        add({{s(k), 1.0}}, jobs_[k].release);
        add({{c(k), 1.0}, {s(k), -1.0}}, 0.0);
        if (i > 0) add({{s(k), 1.0}, {c(k - 1), -1.0}}, 0.0);
        if (metric == Metric::makespan && i + 1 == row.size()) add({{t(), 1.0}, {c(k), -1.0}}, 0.0);
      }
    }
    initial_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_vars_));
    // Equal energy shares, jobs separated by a small idle margin.
    double horizon = 0.0;
    std::vector<double> dur(n_jobs_);
    for (std::size_t j = 0; j < n_jobs_; ++j) {
      const double share = 0.5 * budget / static_cast<double>(n_jobs_);
      dur[j] = std::pow(std::pow(jobs_[j].work, alpha_) / share, 1.0 / (alpha_ - 1.0));
      horizon = std::max(horizon, jobs_[j].release) + dur[j];
    }
    const double margin = 1e-3 * horizon / static_cast<double>(n_jobs_ + 1);
    k = 0;
    double latest = 0.0;
    for (const auto& row : rows) {
      double prev = -kInf;
      for (std::size_t i = 0; i < row.size(); ++i, ++k) {
        const double start = std::max(jobs_[k].release, prev) + margin;
        initial_[s(k)] = start;
        initial_[c(k)] = start + dur[k];
        prev = start + dur[k];
        latest = std::max(latest, prev);
      }
    }
    if (metric == Metric::makespan) initial_[t()] = latest + margin;
  }

  std::size_t constraint_count() const { return rows_.size() + 1; }
  const Eigen::VectorXd& initial() const { return initial_; }

  double objective(const Eigen::VectorXd& x) const {
    if (metric_ == Metric::makespan) return x[t()];
    double f = 0.0;
    for (std::size_t k = 0; k < n_jobs_; ++k) f += x[c(k)] - jobs_[k].release;
    return f;
  }

  double energy(const Eigen::VectorXd& x) const {
    double e = 0.0;
    for (std::size_t k = 0; k < n_jobs_; ++k) {
      const double d = x[c(k)] - x[s(k)];
      e += std::pow(jobs_[k].work, alpha_) * std::pow(d, 1.0 - alpha_);
    }
    return e;
  }

  bool feasible(const Eigen::VectorXd& x) const {
    for (const auto& r : rows_) {
      if (!(slack(r, x) > 0.0)) return false;
    }
    return budget_ - energy(x) > 0.0;
  }

  /// Barrier value t*f(x) - sum log(slacks); infinity outside the domain.
  double barrier(const Eigen::VectorXd& x, double tscale) const {
    double v = tscale * objective(x);
    for (const auto& r : rows_) {
      const double sl = slack(r, x);
      if (!(sl > 0.0)) return kInf;
      v -= std::log(sl);
    }
    const double h = budget_ - energy(x);
    if (!(h > 0.0)) return kInf;
    return v - std::log(h);
  }

  void derivatives(const Eigen::VectorXd& x, double tscale, Eigen::VectorXd& grad,
                   Eigen::MatrixXd& hess) const {
    const auto nv = static_cast<Eigen::Index>(n_vars_);
    grad = Eigen::VectorXd::Zero(nv);
    hess = Eigen::MatrixXd::Zero(nv, nv);
    if (metric_ == Metric::makespan) {
      grad[t()] += tscale;
    } else {
      for (std::size_t k = 0; k < n_jobs_; ++k) grad[c(k)] += tscale;
    }
    for (const auto& r : rows_) {
      const double sl = slack(r, x);
      for (const auto& [i, a] : r.terms) {
        grad[i] -= a / sl;
        for (const auto& [j, b] : r.terms) hess(i, j) += a * b / (sl * sl);
      }
    }
    const double h = budget_ - energy(x);
    Eigen::VectorXd eg = Eigen::VectorXd::Zero(nv);
    for (std::size_t k = 0; k < n_jobs_; ++k) {
      const double d = x[c(k)] - x[s(k)];
      const double wa = std::pow(jobs_[k].work, alpha_);
      const double g1 = (1.0 - alpha_) * wa * std::pow(d, -alpha_);
      const double g2 = alpha_ * (alpha_ - 1.0) * wa * std::pow(d, -alpha_ - 1.0) / h;
      eg[c(k)] = g1;
      eg[s(k)] = -g1;
      hess(c(k), c(k)) += g2;
      hess(s(k), s(k)) += g2;
      hess(c(k), s(k)) -= g2;
      hess(s(k), c(k)) -= g2;
    }
    grad += eg / h;
    hess += eg * eg.transpose() / (h * h);
  }

  std::vector<double> starts(const Eigen::VectorXd& x) const {
    std::vector<double> out(n_jobs_);
    for (std::size_t k = 0; k < n_jobs_; ++k) out[k] = x[s(k)];
    return out;
  }
  std::vector<double> durations(const Eigen::VectorXd& x) const {
    std::vector<double> out(n_jobs_);
    for (std::size_t k = 0; k < n_jobs_; ++k) out[k] = x[c(k)] - x[s(k)];
    return out;
  }

 private:
  struct Row {
    std::vector<std::pair<Eigen::Index, double>> terms;
    double rhs;
  };

  Eigen::Index s(std::size_t k) const { return static_cast<Eigen::Index>(2 * k); }
  Eigen::Index c(std::size_t k) const { return static_cast<Eigen::Index>(2 * k + 1); }
  Eigen::Index t() const { return static_cast<Eigen::Index>(2 * n_jobs_); }

  void add(std::vector<std::pair<Eigen::Index, double>> terms, double rhs) {
    rows_.push_back(Row{std::move(terms), rhs});
  }

  static double slack(const Row& r, const Eigen::VectorXd& x) {
    double v = -r.rhs;
    for (const auto& [i, a] : r.terms) v += a * x[i];
    return v;
  }

  std::vector<Job> jobs_;
  std::size_t n_jobs_ = 0;
  std::size_t n_vars_ = 0;
  double alpha_;
  double budget_;
  Metric metric_;
  std::vector<Row> rows_;
  Eigen::VectorXd initial_;
};

OracleResult solve_barrier(const BarrierProgram& prog, const OracleConfig& config) {
  Eigen::VectorXd x = prog.initial();
  if (!prog.feasible(x)) throw InternalError("oracle start point is infeasible");
  const double m = static_cast<double>(prog.constraint_count());
  double tscale = m / std::max(std::fabs(prog.objective(x)), 1e-12);
  int rounds = 0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;

  for (;;) {
    // Centering by damped Newton.
    for (int inner = 0; inner < 200; ++inner) {
      prog.derivatives(x, tscale, grad, hess);
      const Eigen::VectorXd step = hess.ldlt().solve(-grad);
      const double decrement = -grad.dot(step);
      if (!std::isfinite(decrement)) break;
      if (decrement * 0.5 <= 1e-13) break;
      const double phi = prog.barrier(x, tscale);
      double len = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 80; ++ls, len *= 0.5) {
        const Eigen::VectorXd trial = x + len * step;
        const double v = prog.barrier(trial, tscale);
        if (v <= phi - 0.25 * len * decrement) {
          x = trial;
          moved = true;
          break;
        }
      }
      if (++rounds > config.max_rounds) {
        throw ConvergenceError("oracle exceeded its Newton step budget", prog.objective(x));
      }
      if (!moved) break;
    }
    const double value = std::fabs(prog.objective(x));
    if (m / tscale <= config.duration_tolerance * std::max(value, 1e-12)) break;
    tscale *= 8.0;
  }

  OracleResult out;
  out.starts = prog.starts(x);
  out.durations = prog.durations(x);
  out.value = prog.objective(x);
  out.energy = prog.energy(x);
  out.rounds = rounds;
  return out;
}

void check_budget(double budget) {
  if (!(budget > 0.0) || !std::isfinite(budget)) {
    throw InvalidArgument("energy budget must be positive");
  }
}

/// Common finish time T with sum over processors of min energy(T) = budget.
double makespan_for_rows(const std::vector<std::vector<Job>>& rows, double budget, double alpha) {
  double lo = 0.0;
  for (const auto& row : rows) {
    if (!row.empty()) lo = std::max(lo, row.back().release);
  }
  auto energy_at = [&](double deadline) {
    double e = 0.0;
    for (const auto& row : rows) {
      if (!row.empty()) e += min_energy_for_deadline_bruteforce(row, deadline, alpha);
    }
    return e;
  };
  double width = std::max(1.0, lo);
  double hi = lo + width;
  for (int it = 0; energy_at(hi) > budget; ++it) {
    width *= 2.0;
    hi = lo + width;
    if (it > 2000) throw ConvergenceError("could not bracket the finish time", hi);
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (energy_at(mid) > budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace

OracleResult convex_oracle_multi(const Instance& instance,
                                 const std::vector<std::vector<std::size_t>>& rows,
                                 double energy_budget, Metric metric, const OracleConfig& config) {
  check_budget(energy_budget);
  std::vector<char> used(instance.size(), 0);
  std::size_t count = 0;
  for (const auto& row : rows) {
    for (std::size_t pos : row) {
      if (pos >= instance.size() || used[pos]) {
        throw InvalidArgument("job order must list every job exactly once");
      }
      used[pos] = 1;
      ++count;
    }
  }
  if (count != instance.size()) throw InvalidArgument("job order must list every job exactly once");
  BarrierProgram prog(instance, rows, energy_budget, metric);
  return solve_barrier(prog, config);
}

OracleResult convex_oracle(const Instance& instance, std::span<const std::size_t> order,
                           double energy_budget, Metric metric, const OracleConfig& config) {
  std::vector<std::vector<std::size_t>> rows{std::vector<std::size_t>(order.begin(), order.end())};
  return convex_oracle_multi(instance, rows, energy_budget, metric, config);
}

double min_energy_for_deadline_bruteforce(std::span<const Job> jobs, double deadline,
                                          double alpha) {
  const std::size_t k = jobs.size();
  if (k == 0) return 0.0;
  if (k > 24) throw TooLarge("block enumeration limited to 24 jobs per processor");
  const Tolerance tol;
  double best = kInf;
  const std::uint64_t masks = std::uint64_t{1} << (k - 1);
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    // Bit i set: a block ends after job i.
    double energy = 0.0;
    bool ok = true;
    std::size_t first = 0;
    for (std::size_t j = 0; j < k && ok; ++j) {
      const bool ends = j + 1 == k || ((mask >> j) & 1U);
      if (!ends) continue;
      const double start = jobs[first].release;
      const double end = j + 1 == k ? deadline : jobs[j + 1].release;
      if (!(end > start)) {
        ok = false;
        break;
      }
      double work = 0.0;
      for (std::size_t i = first; i <= j; ++i) work += jobs[i].work;
      const double speed = work / (end - start);
      double t = start;
      for (std::size_t i = first; i <= j; ++i) {
        if (definitely_less(t, jobs[i].release, tol)) {
          ok = false;
          break;
        }
        t += jobs[i].work / speed;
      }
      energy += work * std::pow(speed, alpha - 1.0);
      first = j + 1;
    }
    if (ok) best = std::min(best, energy);
  }
  return best;
}

double evaluate_assignment(const Instance& instance, const Assignment& assignment,
                           double energy_budget, Metric metric, const OracleConfig& config) {
  check_budget(energy_budget);
  if (metric == Metric::makespan) {
    return makespan_for_rows(split_by_assignment(instance, assignment), energy_budget,
                             instance.alpha());
  }
  std::vector<std::vector<std::size_t>> rows(assignment.processors);
  for (std::size_t k = 0; k < instance.size(); ++k) {
    rows.at(assignment.processor_of.at(k) - 1).push_back(k);
  }
  return convex_oracle_multi(instance, rows, energy_budget, metric, config).value;
}

AssignmentSearch enumerate_assignments(const Instance& instance, double energy_budget,
                                       Metric metric, const OracleConfig& config,
                                       Execution exec) {
  check_budget(energy_budget);
  const std::size_t n = instance.size();
  const std::size_t m = instance.processors();
  if (n > config.assignment_cap) {
    throw TooLarge("assignment enumeration is capped at " + std::to_string(config.assignment_cap) +
                   " jobs");
  }
  double total = std::pow(static_cast<double>(m), static_cast<double>(n));
  if (total > 1e9) throw TooLarge("too many assignments to enumerate");
  const auto count = static_cast<std::size_t>(total);

  auto decode = [&](std::size_t index) {
    Assignment a;
    a.processors = m;
    a.processor_of.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      a.processor_of[k] = index % m + 1;
      index /= m;
    }
    return a;
  };

  std::vector<double> values(count, kInf);
  const auto cn = static_cast<std::ptrdiff_t>(count);
  if (exec == Execution::parallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < cn; ++i) {
      try {
        values[i] = evaluate_assignment(instance, decode(static_cast<std::size_t>(i)),
                                        energy_budget, metric, config);
      } catch (...) {
#pragma omp critical
        failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (std::ptrdiff_t i = 0; i < cn; ++i) {
      values[i] = evaluate_assignment(instance, decode(static_cast<std::size_t>(i)),
                                      energy_budget, metric, config);
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < count; ++i) {
    if (values[i] < values[best]) best = i;
  }
  return AssignmentSearch{decode(best), values[best], count};
}

}  // namespace powersched

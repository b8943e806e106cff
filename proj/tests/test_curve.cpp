#include <random>

#include "doctest.h"
#include "powersched/curve.hpp"
#include "reference.hpp"

using namespace powersched;

namespace {

Instance three_job_instance() { return Instance({{0, 5, 1}, {5, 2, 2}, {6, 1, 3}}, 3.0); }

}  // namespace

TEST_CASE("frontier of the three-job example") {
  const Frontier f = build_frontier(three_job_instance());
  REQUIRE(f.segments.size() == 3);
  REQUIRE(f.breakpoints.size() == 2);
  CHECK(f.breakpoints[0] == doctest::Approx(17.0).epsilon(1e-12));
  CHECK(f.breakpoints[1] == doctest::Approx(8.0).epsilon(1e-12));

  const CurveSegment& top = f.segments[0];
  CHECK(top.last_start == 6.0);
  CHECK(top.last_work == 1.0);
  CHECK(top.e_fixed == doctest::Approx(13.0));
  for (double e : {13.5, 17.0, 20.0, 100.0}) {
    CHECK(top.makespan(e) == doctest::Approx(6.0 + 1.0 / std::sqrt(e - 13.0)).epsilon(1e-12));
  }
}

TEST_CASE("single job frontier has one segment") {
  const Frontier f = build_frontier(Instance({{2, 3, 1}}, 3.0));
  CHECK(f.segments.size() == 1);
  CHECK(f.breakpoints.empty());
  CHECK(eval_makespan(f, 9.0) == doctest::Approx(2.0 + 3.0 * std::sqrt(3.0 / 9.0)));
}

TEST_CASE("frontier evaluation on the three-job example") {
  const Frontier f = build_frontier(three_job_instance());
  CHECK(eval_makespan(f, 17.0) == doctest::Approx(6.5).epsilon(1e-12));
  CHECK(eval_makespan(f, 2.0) == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(eval_makespan(f, 8.0) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(f.segments[1].makespan(8.0) == doctest::Approx(f.segments[2].makespan(8.0)).epsilon(1e-12));
  CHECK_THROWS_AS(eval_makespan(f, 0.0), InvalidArgument);
  CHECK_THROWS_AS(eval_makespan(f, -1.0), InvalidArgument);
}

TEST_CASE("derivatives at the breakpoints of the three-job example") {
  const Frontier f = build_frontier(three_job_instance());
  // Above 17: 6 + (E-13)^(-1/2); below: 5 + 3^(3/2) (E-5)^(-1/2).
  CHECK(f.segments[0].first_derivative(17.0) == doctest::Approx(-1.0 / 16.0).epsilon(1e-12));
  CHECK(f.segments[1].first_derivative(17.0) == doctest::Approx(-1.0 / 16.0).epsilon(1e-12));
  CHECK(f.segments[0].second_derivative(17.0) == doctest::Approx(3.0 / 128.0).epsilon(1e-12));
  CHECK(f.segments[1].second_derivative(17.0) == doctest::Approx(1.0 / 128.0).epsilon(1e-12));
  for (std::size_t k = 0; k + 1 < f.segments.size(); ++k) {
    const double b = f.breakpoints[k];
    CHECK(relative_error(f.segments[k].first_derivative(b), f.segments[k + 1].first_derivative(b)) <=
          1e-9);
    CHECK(std::fabs(f.segments[k].second_derivative(b) - f.segments[k + 1].second_derivative(b)) >
          1e-6);
  }
}

TEST_CASE("analytic derivatives agree with finite differences") {
  const Frontier f = build_frontier(three_job_instance());
  for (double e : {3.0, 11.0, 25.0}) {
    const CurveSegment& s = f.segments[f.locate(e)];
    const double h = 1e-4;
    const double fd1 = (s.makespan(e + h) - s.makespan(e - h)) / (2 * h);
    const double fd2 = (s.makespan(e + h) - 2 * s.makespan(e) + s.makespan(e - h)) / (h * h);
    CHECK(fd1 == doctest::Approx(s.first_derivative(e)).epsilon(1e-6));
    CHECK(fd2 == doctest::Approx(s.second_derivative(e)).epsilon(1e-3));
  }
}

TEST_CASE("sampling the frontier") {
  const Frontier f = build_frontier(three_job_instance());
  const auto wide = sample_frontier(f, 1.0, 30.0, 200);
  for (std::size_t k = 1; k < wide.size(); ++k) CHECK(wide[k].makespan < wide[k - 1].makespan);
  std::size_t flagged = 0;
  for (const auto& s : wide) {
    if (s.breakpoint) {
      ++flagged;
      CHECK((s.energy == 8.0 || s.energy == 17.0));
    }
  }
  CHECK(flagged == 2);

  const auto between = sample_frontier(f, 8.0, 17.0, 2);
  REQUIRE(between.size() == 2);
  CHECK(between.front().energy == 8.0);
  CHECK(between.back().energy == 17.0);

  const auto across = sample_frontier(f, 1.0, 30.0, 2);
  REQUIRE(across.size() == 4);
  CHECK(across[1].energy == 8.0);
  CHECK(across[2].energy == 17.0);

  CHECK_THROWS_AS(sample_frontier(f, 5.0, 5.0, 10), InvalidArgument);
  CHECK_THROWS_AS(sample_frontier(f, 0.0, 5.0, 10), InvalidArgument);
  CHECK_THROWS_AS(sample_frontier(f, 1.0, 5.0, 1), InvalidArgument);
}

TEST_CASE("frontier agrees with IncMerge on random instances") {
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<std::size_t> n(1, 30);
  std::uniform_real_distribution<double> le(std::log(0.05), std::log(500.0));
  for (int trial = 0; trial < 40; ++trial) {
    const Instance inst(ref::random_jobs(rng, n(rng)), trial % 2 ? 2.0 : 3.0);
    const Frontier f = build_frontier(inst);
    CHECK(f.breakpoints.size() + 1 == f.segments.size());
    CHECK(f.breakpoints.size() <= inst.size() - 1);
    for (std::size_t k = 1; k < f.breakpoints.size(); ++k) {
      CHECK(f.breakpoints[k] < f.breakpoints[k - 1]);
    }
    for (std::size_t k = 0; k < f.breakpoints.size(); ++k) {
      const double b = f.breakpoints[k];
      CHECK(relative_error(f.segments[k].makespan(b), f.segments[k + 1].makespan(b)) <= 1e-9);
      CHECK(relative_error(f.segments[k].first_derivative(b),
                           f.segments[k + 1].first_derivative(b)) <= 1e-9);
    }
    for (int s = 0; s < 200; ++s) {
      const double e = std::exp(le(rng)) * inst.total_work() / 10.0;
      CHECK(relative_error(eval_makespan(f, e), makespan(inc_merge(inst, e))) <= 1e-9);
    }
  }
}

TEST_CASE("energy for a deadline through the frontier") {
  const Frontier f = build_frontier(three_job_instance());
  CHECK(energy_for_deadline(f, 6.5) == doctest::Approx(17.0).epsilon(1e-12));
  CHECK(energy_for_deadline(f, 8.0) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(energy_for_deadline(f, 16.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(energy_for_deadline(f, 6.0), InfeasibleDeadline);
}

TEST_CASE("configurations along the frontier") {
  const Frontier f = build_frontier(three_job_instance());
  const auto top = f.configuration(0, 20.0);
  REQUIRE(top.size() == 3);
  CHECK(top[2].speed == doctest::Approx(std::sqrt(7.0)));
  const auto middle = f.configuration(1, 10.0);
  REQUIRE(middle.size() == 2);
  CHECK(middle[1].first == 1);
  CHECK(middle[1].last == 2);
  CHECK(middle[1].speed == doctest::Approx(std::sqrt(5.0 / 3.0)));
}

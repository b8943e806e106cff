#pragma once

// Seeded random instances and the solver-versus-oracle agreement suite behind
// the `verify` subcommand.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "powersched/core.hpp"

namespace powersched {

struct RandomInstanceOptions {
  std::size_t min_jobs = 1;
  std::size_t max_jobs = 8;
  double max_release = 10.0;
  double max_work = 10.0;
  std::vector<double> alphas{2.0, 3.0};
  bool equal_work = false;
  std::size_t processors = 1;
};

Instance random_instance(std::mt19937_64& rng, const RandomInstanceOptions& shape);

/// A budget scaled to the instance so speeds stay in a moderate range.
double random_budget(std::mt19937_64& rng, const Instance& instance);

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::size_t count = 20;
  std::size_t max_jobs = 8;
  double tolerance = 1e-4;
};

struct VerifyLine {
  std::size_t index = 0;
  std::string text;
  bool passed = true;
};

std::vector<VerifyLine> run_verification(const VerifyOptions& options);

}  // namespace powersched

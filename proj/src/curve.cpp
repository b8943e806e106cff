#include "powersched/curve.hpp"

#include <algorithm>

#include "block_stack.hpp"

namespace powersched {

double CurveSegment::makespan(double energy) const {
  const double p = 1.0 / (alpha - 1.0);
  const double x = energy - e_fixed;
  return last_start + last_work * std::pow(last_work / x, p);
}

double CurveSegment::first_derivative(double energy) const {
  const double p = 1.0 / (alpha - 1.0);
  const double x = energy - e_fixed;
  return -p * last_work * std::pow(last_work / x, p) / x;
}

double CurveSegment::second_derivative(double energy) const {
  const double p = 1.0 / (alpha - 1.0);
  const double x = energy - e_fixed;
  return p * (p + 1.0) * last_work * std::pow(last_work / x, p) / (x * x);
}

double CurveSegment::energy_for(double makespan) const {
  return e_fixed + last_work * std::pow(last_work / (makespan - last_start), alpha - 1.0);
}

std::size_t Frontier::locate(double energy) const {
  if (!(energy > 0.0)) throw InvalidArgument("energy must be positive");
  auto it = std::partition_point(segments.begin(), segments.end(),
                                 [&](const CurveSegment& s) { return s.e_lo > energy; });
  if (it == segments.end()) throw InternalError("frontier does not cover the energy");
  return static_cast<std::size_t>(it - segments.begin());
}

std::vector<Block> Frontier::configuration(std::size_t index, double energy) const {
  const CurveSegment& seg = segments.at(index);
  std::vector<Block> blocks(top_blocks.begin(),
                            top_blocks.begin() + static_cast<std::ptrdiff_t>(seg.fixed_blocks));
  Block last;
  last.first = top_blocks[seg.fixed_blocks].first;
  last.last = top_blocks.back().last;
  last.start = seg.last_start;
  last.work = seg.last_work;
  last.speed = std::pow((energy - seg.e_fixed) / seg.last_work, 1.0 / (alpha - 1.0));
  last.fixed = false;
  blocks.push_back(last);
  return blocks;
}

Frontier build_frontier(const Instance& instance) {
  const double alpha = instance.alpha();
  const auto units = detail::release_units(instance);

  detail::BlockStack stack(alpha);
  for (std::size_t u = 0; u + 1 < units.size(); ++u) {
    stack.push_fixed(units[u], units[u + 1].release);
  }
  stack.push_last(units.back());

  Frontier frontier;
  frontier.alpha = alpha;
  for (const auto& e : stack.entries()) frontier.top_blocks.push_back(e.block);
  frontier.top_blocks.back().speed = std::numeric_limits<double>::infinity();

  auto& entries = stack.entries();
  double e_hi = std::numeric_limits<double>::infinity();
  while (entries.size() >= 2) {
    const auto& top = entries.back();
    const Block& prev = entries[entries.size() - 2].block;
    // Budget at which the last block slows to its predecessor's speed.
    const double threshold = top.energy_below + top.block.work * std::pow(prev.speed, alpha - 1.0);
    if (definitely_less(threshold, e_hi)) {
      frontier.segments.push_back(CurveSegment{entries.size() - 1, top.energy_below,
                                               top.block.start, top.block.work, threshold, e_hi,
                                               alpha});
      frontier.breakpoints.push_back(threshold);
      e_hi = threshold;
    }
    stack.merge_top();
  }
  const Block& only = entries.front().block;
  frontier.segments.push_back(
      CurveSegment{0, 0.0, only.start, only.work, 0.0, e_hi, alpha});
  return frontier;
}

double eval_makespan(const Frontier& frontier, double energy) {
  return frontier.segments[frontier.locate(energy)].makespan(energy);
}

namespace {

FrontierSample evaluate_sample(const Frontier& frontier, double energy, bool breakpoint) {
  const std::size_t k = frontier.locate(energy);
  const CurveSegment& seg = frontier.segments[k];
  return FrontierSample{energy, seg.makespan(energy), seg.first_derivative(energy),
                        seg.second_derivative(energy), k, breakpoint};
}

}  // namespace

std::vector<FrontierSample> sample_frontier(const Frontier& frontier, double e_lo, double e_hi,
                                            std::size_t count, Execution exec) {
  if (!(e_lo > 0.0) || !(e_hi > e_lo) || !std::isfinite(e_hi)) {
    throw InvalidArgument("sampling range must satisfy 0 < from < to");
  }
  if (count < 2) throw InvalidArgument("at least two samples are required");

  struct Point {
    double energy;
    bool breakpoint;
  };
  std::vector<Point> points(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(count - 1);
    points[k] = Point{k + 1 == count ? e_hi : e_lo + (e_hi - e_lo) * t, false};
  }
  for (double b : frontier.breakpoints) {
    if (b < e_lo - Tolerance{}.slack(b, e_lo) || b > e_hi + Tolerance{}.slack(b, e_hi)) continue;
    auto same = std::find_if(points.begin(), points.end(),
                             [&](const Point& p) { return approx_equal(p.energy, b); });
    if (same != points.end()) {
      *same = Point{b, true};
    } else {
      points.push_back(Point{b, true});
    }
  }
  std::sort(points.begin(), points.end(),
            [](const Point& a, const Point& b) { return a.energy < b.energy; });

  std::vector<FrontierSample> samples(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      samples[k] = evaluate_sample(frontier, points[k].energy, points[k].breakpoint);
    }
  } else {
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      samples[k] = evaluate_sample(frontier, points[k].energy, points[k].breakpoint);
    }
  }
  return samples;
}

double energy_for_deadline(const Frontier& frontier, double deadline) {
  const CurveSegment& top = frontier.segments.front();
  if (!std::isfinite(deadline) || !(deadline > top.last_start + Tolerance{}.slack(deadline, top.last_start))) {
    throw InfeasibleDeadline("deadline must exceed the last release time");
  }
  // Segments are ordered by increasing makespan; the last one is unbounded.
  auto it = std::partition_point(
      frontier.segments.begin(), frontier.segments.end() - 1,
      [&](const CurveSegment& s) { return s.makespan(s.e_lo) < deadline; });
  return it->energy_for(deadline);
}

}  // namespace powersched

#include "powersched/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "powersched/curve.hpp"
#include "powersched/flow_uni.hpp"
#include "powersched/io.hpp"
#include "powersched/makespan_uni.hpp"
#include "powersched/multi.hpp"
#include "powersched/oracle.hpp"
#include "powersched/verify.hpp"

namespace powersched {

using nlohmann::json;

namespace {

struct Request {
  std::string instance_path;
  std::optional<double> energy;
  std::optional<double> deadline;
  double epsilon = FlowSolverConfig{}.epsilon_energy;
  int max_iterations = FlowSolverConfig{}.max_iterations;
  std::optional<std::size_t> processors;
  std::string out_path;

  double from = 1.0;
  double to = 100.0;
  std::size_t samples = 100;
  std::size_t grid = EnergyWindow{}.grid;
  std::string format = "json";

  std::vector<long long> values;
  double alpha = 3.0;

  std::uint64_t seed = 1;
  std::size_t count = 20;
  std::size_t max_jobs = 8;
};

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Instance load(const Request& req) {
  Instance inst = load_instance(req.instance_path);
  if (req.processors) inst = inst.with_processors(*req.processors);
  return inst;
}

FlowSolverConfig flow_config(const Request& req) {
  FlowSolverConfig cfg;
  cfg.epsilon_energy = req.epsilon;
  cfg.max_iterations = req.max_iterations;
  return cfg;
}

json relations_json(const Schedule& schedule) {
  json out = json::array();
  for (const auto& rel : speed_relations(schedule)) {
    out.push_back({{"job", rel.job},
                   {"next_job", rel.next_job},
                   {"relation", to_string(rel.relation)},
                   {"residual", rel.residual}});
  }
  return out;
}

void cmd_makespan(const Request& req, std::ostream& out) {
  const Instance inst = load(req);
  json doc;
  if (inst.processors() == 1) {
    doc = schedule_to_json(inc_merge(inst, *req.energy));
  } else {
    doc = schedule_to_json(multi_makespan_equal_work(inst, *req.energy).combined);
  }
  out << doc.dump(2) << '\n';
}

void cmd_energy_for_deadline(const Request& req, std::ostream& out) {
  const Instance inst = load(req);
  double energy = 0.0;
  if (inst.processors() == 1) {
    energy = energy_for_deadline(inst, *req.deadline);
  } else {
    detail::require_equal_work(inst);
    const auto rows = split_by_assignment(inst, cyclic_assign(inst.size(), inst.processors()));
    for (const auto& row : rows) {
      if (!row.empty()) energy += energy_for_deadline(Instance(row, inst.alpha()), *req.deadline);
    }
  }
  out << json{{"deadline", *req.deadline}, {"energy", energy}}.dump(2) << '\n';
}

void cmd_curve(const Request& req, std::ostream& out) {
  const Instance inst = load(req);
  if (inst.processors() != 1) throw UnsupportedInstance("curve is defined for one processor");
  const Frontier frontier = build_frontier(inst);
  const auto samples = sample_frontier(frontier, req.from, req.to, req.samples);
  if (req.format == "csv") {
    out << "energy,makespan,d1,d2,segment\n";
    for (const auto& s : samples) {
      out << fmt17(s.energy) << ',' << fmt17(s.makespan) << ',' << fmt17(s.d1) << ','
          << fmt17(s.d2) << ',' << s.segment << '\n';
    }
    return;
  }
  json segments = json::array();
  for (const auto& seg : frontier.segments) {
    segments.push_back({{"fixed_blocks", seg.fixed_blocks},
                        {"e_fixed", seg.e_fixed},
                        {"last_start", seg.last_start},
                        {"last_work", seg.last_work},
                        {"e_lo", seg.e_lo},
                        {"e_hi", std::isfinite(seg.e_hi) ? json(seg.e_hi) : json(nullptr)},
                        {"alpha", seg.alpha}});
  }
  json rows = json::array();
  for (const auto& s : samples) {
    rows.push_back({{"energy", s.energy},
                    {"makespan", s.makespan},
                    {"d1", s.d1},
                    {"d2", s.d2},
                    {"segment", s.segment},
                    {"breakpoint", s.breakpoint}});
  }
  out << json{{"breakpoints", frontier.breakpoints}, {"segments", segments}, {"samples", rows}}
             .dump(2)
      << '\n';
}

void cmd_flow(const Request& req, std::ostream& out) {
  const Instance inst = load(req);
  const FlowSolverConfig cfg = flow_config(req);
  json doc;
  if (inst.processors() == 1) {
    const FlowResult r = min_flow_for_energy(inst, *req.energy, cfg);
    doc = schedule_to_json(r.schedule);
    doc["sigma_n"] = r.sigma_n;
    doc["iterations"] = r.iterations;
    doc["relations"] = relations_json(r.schedule);
  } else {
    const MultiResult r = multi_flow_equal_work(inst, *req.energy, cfg);
    doc = schedule_to_json(r.combined);
    json rel = json::array();
    for (const auto& s : r.per_processor) rel.push_back(relations_json(s));
    doc["relations"] = rel;
  }
  out << doc.dump(2) << '\n';
}

void cmd_pinned_range(const Request& req, std::ostream& out) {
  const Instance inst = load(req);
  const auto bounds = pinned_regime_bounds(inst, flow_config(req),
                                           EnergyWindow{req.from, req.to, req.grid});
  json doc{{"window", {req.from, req.to}}, {"pinned", bounds.has_value()}};
  if (bounds) {
    doc["lo"] = bounds->first;
    doc["hi"] = bounds->second;
  }
  out << doc.dump(2) << '\n';
}

void cmd_partition_demo(const Request& req, std::ostream& out) {
  const PartitionInstance partition{req.values};
  const PartitionReduction red = partition_to_instance(partition, req.alpha);
  const PartitionDecision decision = decide_partition_detailed(partition);
  json doc{{"multiset", partition.elements},
           {"instance", instance_to_json(red.instance)},
           {"budget", red.budget},
           {"target_makespan", red.target_makespan},
           {"partitionable", decision.partitionable}};
  doc["best_makespan"] = decision.best_makespan ? json(*decision.best_makespan) : json(nullptr);
  if (decision.witness) doc["witness"] = {(*decision.witness)[0], (*decision.witness)[1]};
  out << doc.dump(2) << '\n';
}

bool cmd_verify(const Request& req, std::ostream& out) {
  VerifyOptions opts;
  opts.seed = req.seed;
  opts.count = req.count;
  opts.max_jobs = req.max_jobs;
  std::size_t failed = 0;
  for (const auto& line : run_verification(opts)) {
    out << line.text << '\n';
    if (!line.passed) ++failed;
  }
  out << "summary: " << (req.count - failed) << '/' << req.count << " passed\n";
  return failed == 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Power-aware scheduling solvers"};
  app.require_subcommand(1);
  Request req;

  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("--instance", req.instance_path, "instance JSON file")->required();
    sub->add_option("--processors", req.processors, "override the instance's processor count")
        ->check(CLI::PositiveNumber);
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", req.out_path, "write the result to this file");
  };
  auto add_epsilon = [&](CLI::App* sub) {
    sub->add_option("--epsilon", req.epsilon, "relative energy tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-iterations", req.max_iterations, "bisection steps on the tail speed")
        ->check(CLI::PositiveNumber);
  };

  auto* makespan_cmd = app.add_subcommand("makespan", "minimum makespan for an energy budget");
  add_instance(makespan_cmd);
  makespan_cmd->add_option("--energy", req.energy)->required();
  add_out(makespan_cmd);

  auto* deadline_cmd =
      app.add_subcommand("energy-for-deadline", "minimum energy to finish by a deadline");
  add_instance(deadline_cmd);
  deadline_cmd->add_option("--deadline", req.deadline)->required();
  add_out(deadline_cmd);

  auto* curve_cmd = app.add_subcommand("curve", "sample the energy/makespan frontier");
  add_instance(curve_cmd);
  curve_cmd->add_option("--from", req.from)->required();
  curve_cmd->add_option("--to", req.to)->required();
  curve_cmd->add_option("--samples", req.samples)->check(CLI::PositiveNumber);
  curve_cmd->add_option("--format", req.format)->check(CLI::IsMember({"csv", "json"}));
  add_out(curve_cmd);

  auto* flow_cmd = app.add_subcommand("flow", "minimum total flow for equal-work jobs");
  add_instance(flow_cmd);
  flow_cmd->add_option("--energy", req.energy)->required();
  add_epsilon(flow_cmd);
  add_out(flow_cmd);

  auto* pinned_cmd =
      app.add_subcommand("pinned-range", "energies at which the last boundary is pinned");
  add_instance(pinned_cmd);
  pinned_cmd->add_option("--from", req.from, "lower end of the energy window");
  pinned_cmd->add_option("--to", req.to, "upper end of the energy window");
  pinned_cmd->add_option("--grid", req.grid, "scan points")->check(CLI::Range(2, 1 << 20));
  add_epsilon(pinned_cmd);
  add_out(pinned_cmd);

  auto* partition_cmd =
      app.add_subcommand("partition-demo", "decide Partition through the scheduling reduction");
  partition_cmd->add_option("--values", req.values, "positive integers")
      ->required()
      ->delimiter(',');
  partition_cmd->add_option("--alpha", req.alpha);
  add_out(partition_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "solver-versus-oracle agreement suite");
  verify_cmd->add_option("--seed", req.seed);
  verify_cmd->add_option("--count", req.count);
  verify_cmd->add_option("--max-jobs", req.max_jobs)->check(CLI::Range(1, 12));
  add_out(verify_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  std::ostringstream buffer;
  int status = kExitOk;
  try {
    if (*makespan_cmd) {
      cmd_makespan(req, buffer);
    } else if (*deadline_cmd) {
      cmd_energy_for_deadline(req, buffer);
    } else if (*curve_cmd) {
      if (!(req.to > req.from)) throw InvalidArgument("--to must exceed --from");
      cmd_curve(req, buffer);
    } else if (*flow_cmd) {
      cmd_flow(req, buffer);
    } else if (*pinned_cmd) {
      cmd_pinned_range(req, buffer);
    } else if (*partition_cmd) {
      cmd_partition_demo(req, buffer);
    } else if (*verify_cmd) {
      if (!cmd_verify(req, buffer)) status = kExitUsage;
    }
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitMalformed;
  } catch (const json::exception& e) {
    err << "error: malformed JSON: " << e.what() << '\n';
    return kExitMalformed;
  } catch (const InfeasibleDeadline& e) {
    err << "error: infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const ConvergenceError& e) {
    err << "error: no convergence: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (req.out_path.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(req.out_path);
    if (!file) {
      err << "error: cannot write " << req.out_path << '\n';
      return kExitUsage;
    }
    file << buffer.str();
  }
  return status;
}

}  // namespace powersched

#include "powersched/io.hpp"

#include <fstream>
#include <unordered_map>

namespace powersched {

using nlohmann::json;

namespace {

double number_field(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_number()) {
    throw FormatError(std::string("missing or non-numeric field \"") + key + "\"");
  }
  return obj.at(key).get<double>();
}

}  // namespace

Instance instance_from_json(const json& doc) {
  if (!doc.is_object()) throw FormatError("instance must be a JSON object");
  double alpha = 3.0;
  if (doc.contains("alpha")) alpha = number_field(doc, "alpha");
  std::size_t processors = 1;
  if (doc.contains("processors")) {
    if (!doc.at("processors").is_number_integer() || doc.at("processors").get<long long>() < 1) {
      throw FormatError("\"processors\" must be a positive integer");
    }
    processors = doc.at("processors").get<std::size_t>();
  }
  if (!doc.contains("jobs") || !doc.at("jobs").is_array()) {
    throw FormatError("instance needs a \"jobs\" array");
  }
  std::vector<Job> jobs;
  std::size_t id = 1;
  for (const auto& entry : doc.at("jobs")) {
    if (!entry.is_object()) throw FormatError("each job must be an object");
    jobs.push_back(Job{number_field(entry, "release"), number_field(entry, "work"), id++});
  }
  return Instance(std::move(jobs), alpha, processors);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open instance file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed JSON in ") + path + ": " + e.what());
  }
  return instance_from_json(doc);
}

json instance_to_json(const Instance& instance) {
  std::vector<Job> by_id = instance.jobs();
  std::sort(by_id.begin(), by_id.end(), [](const Job& a, const Job& b) { return a.id < b.id; });
  json jobs = json::array();
  for (const Job& j : by_id) jobs.push_back({{"release", j.release}, {"work", j.work}});
  return {{"alpha", instance.alpha()}, {"processors", instance.processors()}, {"jobs", jobs}};
}

json schedule_to_json(const Schedule& schedule) {
  json rows = json::array();
  for (std::size_t p = 1; p <= schedule.processors; ++p) {
    json row = json::array();
    for (const auto& item : schedule.on_processor(p)) {
      row.push_back({{"job", item.job.id},
                     {"start", item.start},
                     {"speed", item.speed},
                     {"completion", item.completion()}});
    }
    rows.push_back(std::move(row));
  }
  return {{"schedule", rows},
          {"makespan", makespan(schedule)},
          {"total_flow", total_flow(schedule)},
          {"energy", total_energy(schedule)}};
}

Schedule schedule_from_json(const json& doc, const Instance& instance) {
  if (!doc.is_object() || !doc.contains("schedule") || !doc.at("schedule").is_array()) {
    throw FormatError("schedule document needs a \"schedule\" array");
  }
  std::unordered_map<std::size_t, const Job*> by_id;
  for (const Job& j : instance.jobs()) by_id[j.id] = &j;

  Schedule schedule;
  schedule.alpha = instance.alpha();
  schedule.processors = doc.at("schedule").size();
  std::size_t p = 0;
  for (const auto& row : doc.at("schedule")) {
    ++p;
    if (!row.is_array()) throw FormatError("each processor entry must be an array");
    for (const auto& entry : row) {
      if (!entry.contains("job") || !entry.at("job").is_number_integer()) {
        throw FormatError("schedule entry lacks an integer \"job\"");
      }
      auto it = by_id.find(entry.at("job").get<std::size_t>());
      if (it == by_id.end()) throw FormatError("schedule refers to an unknown job");
      ScheduledJob item{*it->second, number_field(entry, "start"), number_field(entry, "speed"), p};
      if (!(item.speed > 0.0)) throw FormatError("schedule entry has a nonpositive speed");
      if (entry.contains("completion") &&
          !approx_equal(number_field(entry, "completion"), item.completion())) {
        throw FormatError("completion disagrees with start, speed and work");
      }
      schedule.items.push_back(item);
    }
  }
  return schedule;
}

}  // namespace powersched

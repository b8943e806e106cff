#pragma once

// JSON instance and schedule formats.
//
// Instance: {"alpha": 3, "processors": 1, "jobs": [{"release": 0, "work": 5}, ...]}
//   alpha defaults to 3 and processors to 1; jobs may be unsorted.
// Schedule: {"schedule": [[{"job", "start", "speed", "completion"}, ...], ...],
//            "makespan", "total_flow", "energy"}
//   with one inner array per processor.

#include <string>

#include "json.hpp"

#include "powersched/core.hpp"

namespace powersched {

/// Malformed or schema-violating JSON input.
class FormatError : public Error {
 public:
  using Error::Error;
};

Instance instance_from_json(const nlohmann::json& doc);
Instance load_instance(const std::string& path);
nlohmann::json instance_to_json(const Instance& instance);

nlohmann::json schedule_to_json(const Schedule& schedule);

/// Rebuilds a schedule against `instance`; job entries refer to instance ids.
Schedule schedule_from_json(const nlohmann::json& doc, const Instance& instance);

}  // namespace powersched

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "schema.hpp"

namespace lorentz::cli {

struct Operation {
  std::string name;               // run name, e.g. "model-tau"
  std::vector<std::string> path;  // subcommand path, e.g. {"model", "tau"}
  std::string help;
  std::vector<Field> fields;
  // Receives the validated config; returns the "result" member of the report.
  std::function<Json(const Json&)> run;
};

// Every operation, with `workers` defaulting to `default_workers`.
std::vector<Operation> operations(int default_workers);

// Worker count from LORENTZ_WORKERS, else the available parallelism. Throws
// UsageError on a malformed value.
int workers_from_env();

}  // namespace lorentz::cli

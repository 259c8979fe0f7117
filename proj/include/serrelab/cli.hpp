#pragma once

#include "serrelab/dsl.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace serrelab {

/// Outcome of one executed task. timing_ms is kept at zero in reports so
/// identical inputs and seed produce byte-identical output.
struct TaskResult {
  std::string task;
  std::string status;  // verified | refuted | error | exhausted
  std::uint64_t seed = 0;
  std::int64_t timing_ms = 0;
  nlohmann::ordered_json detail = nlohmann::ordered_json::object();
};

nlohmann::ordered_json result_json(const TaskResult& r);
std::string format_results(const std::vector<TaskResult>& results, const std::string& format);

/// 0 all verified, 1 any refuted or exhausted, 2 any error.
int results_exit_code(const std::vector<TaskResult>& results);

/// Full command-line entry point; args excludes the program name. Reports go
/// to out, usage errors to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace serrelab

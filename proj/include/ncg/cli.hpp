#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace ncg::cli {

enum class Status { ok, invalid_input, undecided };

/// ok = 0, invalid_input = 2, undecided = 3.
int exit_code(Status s);
std::string to_string(Status s);

struct CommandResult {
  Status status = Status::ok;
  nlohmann::json payload;
  std::string human_text;
  bool json_output = false;  // --json was given
};

/// Runs one invocation; `args` excludes the program name. Input errors are
/// returned as invalid_input, never thrown.
CommandResult run(const std::vector<std::string>& args);

/// Text written to stdout for a result: the JSON payload or the human text.
std::string render(const CommandResult& r);

}  // namespace ncg::cli

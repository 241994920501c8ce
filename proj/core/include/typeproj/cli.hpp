#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace typeproj::cli {

/// Schema check only; throws ValidationError naming the missing, extra, or
/// malformed field. No computation happens.
void validate_config(const nlohmann::json& config);

struct RunOutput {
  std::string payload;  // full output file content (JSON or CSV)
  bool is_csv = false;
  std::vector<std::string> diagnostics;
};

/// Validates and executes one experiment config. Typed errors propagate to
/// the caller (the binary maps them to exit codes).
RunOutput run_config(const nlohmann::json& config, int threads = 1);

/// Full command-line entry point: typeproj <kind|validate> --config FILE
/// [--set k=v]... [--out PATH] [--threads N] [--seed S].
/// Exit codes: 0 success, 2 validation error, 3 infeasibility, 4 resource cap.
int main(int argc, const char* const* argv);

}  // namespace typeproj::cli

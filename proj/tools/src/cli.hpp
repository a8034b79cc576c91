#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "quasicomb/io.hpp"

namespace quasicomb::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kUnsupported = 3,
  kVerificationFailed = 4,
};

/// Entry point of the `quasicomb` tool. Documents go to `out` (or the
/// --out file), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Result of one preset of `verify-example`.
struct ExampleResult {
  bool ok = false;
  io::Json report;
};

/// Names accepted by `verify-example`.
const std::vector<std::string>& example_names();
/// Runs a preset; throws std::out_of_range for an unknown name.
ExampleResult run_example(const std::string& name);

}  // namespace quasicomb::cli

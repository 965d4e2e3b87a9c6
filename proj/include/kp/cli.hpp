#ifndef KP_CLI_HPP
#define KP_CLI_HPP

#include <string>
#include <vector>

#include "kp/jsonio.hpp"

namespace kp {

// One invocation = one report.  status is "ok" iff every certificate passed,
// "fail" when a mathematical certificate failed (exit 1), "error" on usage or
// input-format problems (exit 2).  Reports are byte-deterministic.
struct CliResult {
  int exit_code = 2;
  std::string out_path;  // empty: standard output
  Json report;
};

CliResult dispatch(const std::vector<std::string>& args);

// parse argv, run, print the report, return the exit code
int run_cli(int argc, char** argv);

}  // namespace kp

#endif

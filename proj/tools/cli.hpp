#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sigmaflow/models.hpp"

namespace sigmaflow::cli {

enum ExitCode : int {
  kPass = 0,
  kVerifyFail = 1,
  kInputError = 2,
  kGeometryError = 3,
  kFlowAbort = 4,
};

// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Metric spec document:
//   {"dim": n, "metric": [[expr, ...], ...], "domain": [[lo, hi], ...],
//    "periodic": [bool, ...], "potential": expr, "vector_field": [expr, ...],
//    "lambda": expr, "k": int, "l": int}
// Throws ParseError (with byte offset) for malformed JSON and InputError
// for schema violations.
ModelManifold parse_metric_spec(const std::string& text, const std::string& name = "spec");

}  // namespace sigmaflow::cli

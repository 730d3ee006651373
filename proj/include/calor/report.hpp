#pragma once

#include <string>

#include "json.hpp"

namespace calor::report {

struct SolveOptions {
  bool fe = false;
  double tol = 1e-3;            // relative FE tolerance (QoI and energy)
  std::string commonsense_path;  // empty: use the embedded database
  std::string out_dir = ".";
  bool json_only = false;  // skip figures and field export
  bool timing = false;     // timing block breaks byte-determinism, opt-in
};

struct SolveOutcome {
  int exit_code = 0;  // 0 ok, 1 pipeline error, 2 well-posedness defects
  nlohmann::ordered_json report;
};

// Full pipeline behind `calor solve`: parse, assemble, classify, solve,
// write <stem>_report.json plus the three figures into out_dir.  Never
// throws; failures become the machine-readable `error` object and a nonzero
// exit code.
SolveOutcome run_solve(const std::string& input_path, const SolveOptions& opt);

}  // namespace calor::report

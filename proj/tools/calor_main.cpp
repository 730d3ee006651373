#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "calor/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"calor: controlled-English steady heat-conduction solver"};
  app.require_subcommand(1);

  calor::report::SolveOptions opt;
  std::string input;
  bool out_given = false;

  CLI::App* solve = app.add_subcommand(
      "solve", "parse a problem statement, solve it, write report and figures");
  solve->add_option("file", input, "problem statement (controlled English)")
      ->required()
      ->check(CLI::ExistingFile);
  solve->add_flag("--fe", opt.fe,
                  "certify the QoI with the adaptive finite element solver");
  solve->add_option("--tol", opt.tol,
                    "relative FE tolerance (QoI and energy estimates)")
      ->check(CLI::PositiveNumber);
  solve->add_option("--commonsense", opt.commonsense_path,
                    "replacement commonsense database")
      ->check(CLI::ExistingFile);
  CLI::Option* out_opt =
      solve->add_option("--out", opt.out_dir, "output directory");
  solve->add_flag("--json-only", opt.json_only,
                  "write the JSON report only, no figures");

  CLI11_PARSE(app, argc, argv);

  out_given = out_opt->count() > 0;
  if (!out_given)
    if (const char* env = std::getenv("CALOR_OUT_DIR")) opt.out_dir = env;
  if (const char* env = std::getenv("CALOR_TIMING"))
    opt.timing = *env != '\0' && std::string(env) != "0";

  calor::report::SolveOutcome outcome =
      calor::report::run_solve(input, opt);
  std::cout << outcome.report.dump(2) << "\n";
  return outcome.exit_code;
}

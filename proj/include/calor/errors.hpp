#pragma once
#include <stdexcept>
#include <string>

namespace calor {

// Every failure mode the pipeline can report.  The code names are part of the
// CLI's machine-readable output, so keep them stable.
enum class ErrorCode {
  // text frontend
  UnbalancedDelimiter,
  EmptyInput,
  // frame parser
  MalformedDatabase,
  ConflictingState,
  CyclicInheritance,
  NoComponents,
  MissingDomain,
  OverlappingDomains,
  IncompleteRobin,
  UnknownFace,
  MissingConductivity,
  DuplicateBinding,
  NonNumericRHS,
  // template / model
  UncoveredBoundary,
  MissingBinding,
  Unclassifiable,
  NonPositiveDimension,
  NoSharedFace,
  DanglingComponent,
  // solvers
  DegenerateFin,
  SingularSystem,
  LocationOutsideDomain,
  DegenerateTriangle,
  BudgetExceeded,
  // misc
  Io,
  BadArguments,
};

const char* to_string(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, int sentence = -1)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code), sentence_(sentence) {}

  ErrorCode code() const { return code_; }
  // index of the offending sentence in the problem statement, -1 if n/a
  int sentence() const { return sentence_; }

 private:
  ErrorCode code_;
  int sentence_;
};

}  // namespace calor

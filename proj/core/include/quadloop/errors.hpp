#pragma once

#include <stdexcept>
#include <string>

namespace quadloop {

// Base for all numerical failures the library can signal. The kind string is
// stable and machine-readable; it ends up in CLI JSON reports.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define QUADLOOP_ERROR(Name, KindStr)                      \
  class Name : public NumericalError {                     \
   public:                                                 \
    explicit Name(const std::string& what)                 \
        : NumericalError(KindStr, what) {}                 \
  }

QUADLOOP_ERROR(BranchCutError, "BranchCut");
QUADLOOP_ERROR(ZeroPointError, "ZeroPoint");
QUADLOOP_ERROR(TrackingLossError, "TrackingLoss");
QUADLOOP_ERROR(CriticalPointError, "CriticalPoint");
QUADLOOP_ERROR(GridMismatchError, "GridMismatch");
QUADLOOP_ERROR(SpectralOverflowError, "SpectralOverflow");
QUADLOOP_ERROR(NewtonDivergenceError, "NewtonDivergence");
QUADLOOP_ERROR(OutOfChartError, "OutOfChart");
QUADLOOP_ERROR(LevelCurveNotFoundError, "LevelCurveNotFound");
QUADLOOP_ERROR(ConformalStallError, "ConformalStall");
QUADLOOP_ERROR(FejerBudgetError, "FejerBudget");
QUADLOOP_ERROR(InfeasibleError, "Infeasible");
QUADLOOP_ERROR(DegreeExhaustedError, "DegreeExhausted");
QUADLOOP_ERROR(LiftFailureError, "LiftFailure");
QUADLOOP_ERROR(StepFailureError, "StepFailure");
QUADLOOP_ERROR(DegenerateLiftError, "DegenerateLift");
QUADLOOP_ERROR(NotNullHomotopicError, "NotNullHomotopic");
QUADLOOP_ERROR(ExtensionHitsZeroError, "ExtensionHitsZero");
QUADLOOP_ERROR(TangencyViolationError, "TangencyViolation");
QUADLOOP_ERROR(PreconditionError, "Precondition");
QUADLOOP_ERROR(ConfigError, "Config");
QUADLOOP_ERROR(SerializationError, "Serialization");

#undef QUADLOOP_ERROR

}  // namespace quadloop

#pragma once

#include <stdexcept>
#include <string>

namespace scmi {

enum class ErrorCode {
    UnknownVariable,
    EvaluationError,
    NotFiniteSupport,
    SupportTooLarge,
    ZeroProbabilityEvidence,
    PartialObservation,
    NotInvertible,
    InconsistentFacts,
    NoFeasiblePoint,
    NonFiniteObjective,
    BudgetExhausted,
    DegenerateChain,
    BadBandwidth,
    InvalidQuery,
    InvalidModel,
};

// Stable machine-readable identifier, e.g. "zero_probability_evidence".
const char* error_code_name(ErrorCode code);

// Runtime failures of engine operations. Validation and parsing report
// Diagnostic lists instead; this type is for operations on validated models.
class EngineError : public std::runtime_error {
public:
    EngineError(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const { return code_; }
    const char* code_name() const { return error_code_name(code_); }

private:
    ErrorCode code_;
};

}  // namespace scmi

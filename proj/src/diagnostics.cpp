#include "scmi/diagnostics.hpp"

#include "scmi/errors.hpp"

namespace scmi {

const char* diag_code_name(DiagCode code) {
    switch (code) {
        case DiagCode::SyntaxError: return "syntax_error";
        case DiagCode::UnknownDistribution: return "unknown_distribution";
        case DiagCode::DuplicateDefinition: return "duplicate_definition";
        case DiagCode::UnknownReference: return "unknown_reference";
        case DiagCode::NoiseCardinalityViolation: return "noise_cardinality_violation";
        case DiagCode::BadDistributionParams: return "bad_distribution_params";
        case DiagCode::CycleDetected: return "cycle_detected";
        case DiagCode::InvalidInverse: return "invalid_inverse";
    }
    return "unknown";
}

std::string format_diagnostic(const Diagnostic& d) {
    std::string out;
    if (d.span.known()) {
        out += "line " + std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": ";
    }
    out += "error[";
    out += diag_code_name(d.code);
    out += "]: ";
    out += d.message;
    return out;
}

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownVariable: return "unknown_variable";
        case ErrorCode::EvaluationError: return "evaluation_error";
        case ErrorCode::NotFiniteSupport: return "not_finite_support";
        case ErrorCode::SupportTooLarge: return "support_too_large";
        case ErrorCode::ZeroProbabilityEvidence: return "zero_probability_evidence";
        case ErrorCode::PartialObservation: return "partial_observation";
        case ErrorCode::NotInvertible: return "not_invertible";
        case ErrorCode::InconsistentFacts: return "inconsistent_facts";
        case ErrorCode::NoFeasiblePoint: return "no_feasible_point";
        case ErrorCode::NonFiniteObjective: return "non_finite_objective";
        case ErrorCode::BudgetExhausted: return "budget_exhausted";
        case ErrorCode::DegenerateChain: return "degenerate_chain";
        case ErrorCode::BadBandwidth: return "bad_bandwidth";
        case ErrorCode::InvalidQuery: return "invalid_query";
        case ErrorCode::InvalidModel: return "invalid_model";
    }
    return "unknown";
}

}  // namespace scmi

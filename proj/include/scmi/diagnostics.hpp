#pragma once

#include <string>
#include <vector>

namespace scmi {

// Location of a token or statement in DSL source text. 1-based.
// Diagnostics produced from in-memory models carry the default span.
struct SourceSpan {
    int line = 0;
    int column = 0;
    int length = 0;

    bool known() const { return line >= 1 && column >= 1; }
};

enum class DiagCode {
    SyntaxError,
    UnknownDistribution,
    DuplicateDefinition,
    UnknownReference,
    NoiseCardinalityViolation,
    BadDistributionParams,
    CycleDetected,
    InvalidInverse,
};

const char* diag_code_name(DiagCode code);

struct Diagnostic {
    DiagCode code;
    std::string message;
    SourceSpan span;
};

std::string format_diagnostic(const Diagnostic& d);

using DiagnosticList = std::vector<Diagnostic>;

}  // namespace scmi

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "scmi/diagnostics.hpp"
#include "scmi/model.hpp"

namespace scmi {

// Textual model format, contract `dsl-v1`. One statement per line:
//
//   noise   IDENT "~" DIST "(" num ("," num)* ")"
//   var     IDENT "=" expr
//   inverse IDENT "=" expr            (noise name on the left)
//   # comment to end of line
//
// DIST is Point, Normal, Uniform or Categorical (values then probs).
// Expression precedence: * / over + - over comparisons over if-then-else.
// Comparisons are == != < <= > >= and yield 1.0 / 0.0.

inline constexpr const char* kDslVersion = "dsl-v1";

struct NoiseDeclStmt {
    NoiseSpec spec;
};

struct VarDeclStmt {
    std::string var;
    ExprPtr expr;
};

struct InverseDeclStmt {
    std::string noise_name;
    ExprPtr expr;
};

struct Statement {
    std::variant<NoiseDeclStmt, VarDeclStmt, InverseDeclStmt> node;
    SourceSpan span;
};

struct ModelDocument {
    std::vector<Statement> statements;  // source order
};

struct ParseResult {
    ModelDocument document;
    DiagnosticList diagnostics;
    bool ok() const { return diagnostics.empty(); }
};

// Total over arbitrary bytes: recovers at line boundaries and reports
// every statement-level error. LF and CRLF both accepted.
ParseResult parse_model(const std::string& text);

// Canonical formatting; parse_model(format_model(doc)) is structurally
// identical to doc. Comments and layout are not preserved.
std::string format_model(const ModelDocument& doc);

bool document_equal(const ModelDocument& a, const ModelDocument& b);

RawModel to_raw_model(const ModelDocument& doc);

// parse + validate in one step; parse diagnostics and validation
// diagnostics are merged.
ValidationResult load_model(const std::string& text);

// Canonical decimal rendering of a value: shortest text that parses back
// to the same double. Used by the formatter and the CLI output paths.
std::string format_number(double value);

}  // namespace scmi

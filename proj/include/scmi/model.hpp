#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "scmi/diagnostics.hpp"
#include "scmi/expr.hpp"

namespace scmi {

// Named values: facts, evidence, interventions, samples. Keys are declared
// endogenous or noise names; ordered map keeps iteration deterministic.
using Assignment = std::map<std::string, double>;

struct PointDist {
    double value = 0.0;
};

struct NormalDist {
    double mean = 0.0;
    double stddev = 1.0;
};

struct UniformDist {
    double lo = 0.0;
    double hi = 1.0;
};

struct CategoricalDist {
    std::vector<double> values;
    std::vector<double> probs;
};

using NoiseDistribution = std::variant<PointDist, NormalDist, UniformDist, CategoricalDist>;

bool finite_support(const NoiseDistribution& dist);
// (value, probability) pairs; only valid for finite-support distributions.
std::vector<std::pair<double, double>> support_atoms(const NoiseDistribution& dist);
double dist_mean(const NoiseDistribution& dist);
double dist_variance(const NoiseDistribution& dist);
const char* dist_name(const NoiseDistribution& dist);
bool dist_equal(const NoiseDistribution& a, const NoiseDistribution& b);

struct NoiseSpec {
    std::string name;
    NoiseDistribution dist;
};

// --- Unvalidated model, as produced by the DSL or built programmatically ---

struct RawNoiseDecl {
    NoiseSpec spec;
    SourceSpan span;
};

struct RawEquation {
    std::string var;
    ExprPtr expr;
    // Explicit noise association. Empty means: infer from the unique noise
    // symbol referenced by expr, or synthesize an inert Point(0) noise when
    // the expression references none.
    std::string noise_name;
    SourceSpan span;
};

struct RawInverseDecl {
    std::string noise_name;  // left-hand side
    ExprPtr expr;            // over the owning variable and its parents
    SourceSpan span;
};

struct RawModel {
    std::vector<RawNoiseDecl> noises;
    std::vector<RawEquation> equations;  // declaration order is significant
    std::vector<RawInverseDecl> inverses;
};

// --- Validated model ---

// Expression lowered to slot references for fast repeated evaluation.
// Variable slots index the endogenous value vector (declaration order);
// the only admissible noise reference is the equation's own noise.
class CompiledExpr {
public:
    double eval(const std::vector<double>& vars, double noise) const;

    struct Node {
        enum class Kind { Literal, Var, Noise, Neg, Binary, If } kind;
        double literal = 0.0;
        int slot = -1;
        BinaryOp op = BinaryOp::Add;
        int a = -1, b = -1, c = -1;
    };

    std::vector<Node> nodes;
    int root = -1;

private:
    double eval_node(int idx, const std::vector<double>& vars, double noise) const;
};

struct Equation {
    std::string var;
    ExprPtr expr;
    NoiseSpec noise;
    bool noise_referenced = false;  // expr mentions the noise symbol
    bool noise_implicit = false;    // noise synthesized, not declared in source
    ExprPtr inverse;                // null when not invertible
    bool inverse_synthesized = false;
    std::vector<int> parents;  // equation indices, ascending
    CompiledExpr compiled;
    CompiledExpr compiled_inverse;  // meaningful iff inverse != null
};

// Immutable after validation; all observers are const and thread-safe.
class Scm {
public:
    const std::vector<Equation>& equations() const { return equations_; }
    const Equation& equation(int idx) const { return equations_[idx]; }
    int size() const { return static_cast<int>(equations_.size()); }

    // Equation indices in evaluation order: the unique topological order
    // whose ties are broken by declaration order.
    const std::vector<int>& topo_order() const { return topo_order_; }

    int index_of(const std::string& var) const;    // -1 if unknown
    int noise_index_of(const std::string& noise) const;
    bool has_variable(const std::string& var) const { return index_of(var) >= 0; }

    std::vector<std::string> variable_names() const;  // declaration order
    std::vector<std::string> noise_names() const;     // aligned with variables

    // Direct causes of v, exactly the endogenous names referenced by its
    // expression. Throws EngineError(UnknownVariable) for unknown names.
    std::set<std::string> parents_of(const std::string& var) const;

    bool finite_support() const { return finite_support_; }
    // True when every noise with a directed path into var (including the
    // variable's own) is finite-support, so the variable's marginal has
    // finite support.
    bool var_finite(int idx) const { return var_finite_[idx] != 0; }

    // mask[i] = 1 iff equations_[i] is `from` itself or a descendant of it.
    std::vector<char> reachable_mask(int from) const;

private:
    friend struct ScmBuilder;
    std::vector<Equation> equations_;
    std::vector<int> topo_order_;
    std::map<std::string, int> var_index_;
    std::map<std::string, int> noise_index_;
    std::vector<char> var_finite_;
    bool finite_support_ = true;
};

struct ValidationResult {
    std::optional<Scm> scm;
    DiagnosticList diagnostics;
    bool ok() const { return scm.has_value(); }
};

// Structural validation: reference hygiene, noise bijection, distribution
// parameters, acyclicity, inverse round-trips. Reports every violation
// found, not just the first.
ValidationResult validate(const RawModel& raw);

// index_of with unknown names promoted to EngineError(UnknownVariable).
// Query boundaries use this; internal loops index directly.
int require_variable(const Scm& scm, const std::string& var);

// Reconstructs an unvalidated model from a validated one. Explicit noise
// associations are preserved, so validate(to_raw(scm)) succeeds and yields
// a structurally identical model.
RawModel to_raw(const Scm& scm);

bool scm_equal(const Scm& a, const Scm& b);

}  // namespace scmi

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "scmi/abduction.hpp"
#include "scmi/intervention.hpp"

namespace scmi {

// Abduction method selection for indiv(W).
struct ExactMethod {};
struct UpdateMethod {
    NoiseDraw baseline;  // empty: prior means
    UpdateOptions options;
};
struct RejectionMethod {
    RejectionOptions options;
};
struct McmcMethod {
    McmcOptions options;
};
using AbductionMethod = std::variant<ExactMethod, UpdateMethod, RejectionMethod, McmcMethod>;

// P(Y | indiv(W), do(X), Z). W may overlap the intervention keys: observing
// X=1 and asking about do(X=0) is the point of the query. Z conditions the
// propagated post-intervention distribution; W conditions only abduction.
struct IndividualQuery {
    Facts facts;
    Intervention dox;       // may be empty (posterior predictive)
    std::set<std::string> targets;
    Assignment evidence;    // may be empty
    AbductionMethod method;
    std::uint64_t seed = 0;
    // Window for continuous evidence coordinates when filtering propagated
    // samples, matching the Monte Carlo association semantics.
    double evidence_window = 1e-3;
};

// Paired two-arm comparison for the individual causal effect.
struct IceRequest {
    Facts facts;
    std::set<std::string> targets;
    Intervention do1;
    Intervention do2;
    AbductionMethod method;
    std::uint64_t seed = 0;
};

struct IceResult {
    std::vector<std::string> targets;
    // Mean of Y(do1) - Y(do2) per target over the shared abduced draws.
    std::vector<double> mean_difference;
    // Per-draw difference distribution; a single point for deterministic
    // abduction.
    DistributionResult differences;
};

// The indiv(W) operator: abduction dispatch. The result encodes the
// individualized population.
AbductionResult indiv(const Scm& scm, const Facts& w, const AbductionMethod& method,
                      std::uint64_t seed);

// Three steps: abduce U from facts, cut the graph for the intervention,
// propagate every abduced draw through the mutilated model. Deterministic
// abduction yields a single-point pmf; posteriors yield an empirical
// distribution. Nonempty evidence filters the propagated samples and
// raises ZeroProbabilityEvidence when nothing survives.
DistributionResult ici_query(const Scm& scm, const IndividualQuery& query);

// Steps two and three alone, for callers that already ran indiv() and want
// to keep its diagnostics. query.facts and query.method are ignored.
DistributionResult ici_propagate(const Scm& scm, const AbductionResult& abduced,
                                 const IndividualQuery& query);

// One abduction, two propagations: per-draw differences Y(do1) - Y(do2)
// share the abduced noise, so deterministic terms cancel exactly.
IceResult ice(const Scm& scm, const IceRequest& request);

// The two propagation arms alone, reusing an existing abduction.
IceResult ice_from(const Scm& scm, const AbductionResult& abduced, const IceRequest& request);

}  // namespace scmi

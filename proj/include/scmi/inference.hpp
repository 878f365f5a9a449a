#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "scmi/factor.hpp"
#include "scmi/model.hpp"
#include "scmi/rng.hpp"

namespace scmi {

// Complete joint draw of the exogenous variables, one entry per noise name.
using NoiseDraw = std::map<std::string, double>;

struct SummaryStats {
    double mean = 0.0;
    double variance = 0.0;
    double stddev = 0.0;
    // Weighted empirical quantiles at 0.05, 0.25, 0.5, 0.75, 0.95.
    double q05 = 0.0, q25 = 0.0, q50 = 0.0, q75 = 0.0, q95 = 0.0;
};

struct ExactPmf {
    std::vector<std::string> targets;
    std::vector<std::vector<double>> support;  // one tuple per atom, sorted
    std::vector<double> probs;                 // sums to 1 within 1e-9
};

struct Empirical {
    std::vector<std::string> targets;
    std::vector<std::vector<double>> samples;
    std::vector<double> weights;  // nonnegative, not all zero
    std::vector<SummaryStats> summary;  // per target
};

using DistributionResult = std::variant<ExactPmf, Empirical>;

SummaryStats summarize(const std::vector<double>& values, const std::vector<double>& weights);

// Engine selection for probability queries.
struct ExactEngine {};
struct MonteCarloEngine {
    std::int64_t n = 10'000;
    std::uint64_t seed = 0;
    int workers = 1;
    // Window half-width for conditioning on continuous evidence values;
    // finite-support values must match exactly.
    double evidence_window = 1e-3;
};
using Engine = std::variant<ExactEngine, MonteCarloEngine>;

struct InferenceLimits {
    // Cap on the exact joint support size (product of noise atom counts).
    std::int64_t max_joint_states = 1'000'000;
};

// Evaluates every structural equation in topological order under the given
// exogenous draw. Pure: the same draw always yields the same assignment.
Assignment forward_sample(const Scm& scm, const NoiseDraw& noise);

// Fast path used by the samplers: values indexed by equation position.
std::vector<double> forward_eval_indexed(const Scm& scm, const std::vector<double>& noise);

// n independent joint draws of all noises, mutually independent across
// names. Splitting across `workers` shards preserves the stream per shard,
// so results depend only on (seed, workers), not on scheduling.
std::vector<NoiseDraw> sample_noise(const Scm& scm, std::uint64_t seed, std::int64_t n,
                                    int workers = 1);
std::vector<std::vector<double>> sample_noise_indexed(const Scm& scm, std::uint64_t seed,
                                                      std::int64_t n, int workers = 1);

NoiseDraw noise_draw_from_indexed(const Scm& scm, const std::vector<double>& indexed);
std::vector<double> indexed_from_noise_draw(const Scm& scm, const NoiseDraw& draw);

// Exact joint pmf over all endogenous variables (declaration order) by
// enumeration of the noise atom combinations. Requires finite support.
Factor enumerate_joint(const Scm& scm, const InferenceLimits& limits = {});

// Conditional pmf of v given concrete parent values: pushes each atom of
// v's noise through the structural equation.
Factor noise_to_conditional(const Scm& scm, const std::string& var, const Assignment& pa_values);

// P(targets | evidence). Exact: per-variable conditional factors, variable
// elimination, normalization. Monte Carlo: forward samples filtered by
// evidence (exact match for finite-support variables, |v-z| <= window
// otherwise). Targets may overlap the evidence; such coordinates come back
// as the conditioned value.
DistributionResult association_query(const Scm& scm, const std::set<std::string>& targets,
                                     const Assignment& evidence, const Engine& engine,
                                     const InferenceLimits& limits = {});

// Per-variable conditional factor P(var | parents) over the given parent
// supports. Exposed for the truncated-factorization path.
Factor conditional_factor(const Scm& scm, int eq_index,
                          const std::vector<std::vector<double>>& parent_supports);

// Reachable value sets per variable (declaration order), propagated in
// topological order over the product of parent supports.
std::vector<std::vector<double>> variable_supports(const Scm& scm,
                                                   const InferenceLimits& limits = {});

}  // namespace scmi

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scmi/inference.hpp"
#include "scmi/model.hpp"

namespace scmi {

// Observed individual characteristics W: a nonempty assignment over
// endogenous variables, possibly partial.
using Facts = Assignment;

struct DeterministicAbduction {
    NoiseDraw u_star;
};

struct PosteriorDiagnostics {
    double acceptance_rate = 0.0;
    std::int64_t n_proposed = 0;
    double ess = 0.0;
    bool budget_exhausted = false;
};

struct PosteriorAbduction {
    std::vector<NoiseDraw> samples;
    std::vector<double> weights;  // nonnegative
    PosteriorDiagnostics diagnostics;
};

using AbductionResult = std::variant<DeterministicAbduction, PosteriorAbduction>;

// --- Deterministic inversion, full observability ---
// Applies each equation's inverse in topological order to the observed
// (value, parents) pairs. Every endogenous variable must be observed and
// every noise-referencing equation invertible (declared inverse or the
// synthesized additive-noise one). The result pushed forward reproduces
// the facts within 1e-9; anything else raises InconsistentFacts.
DeterministicAbduction abduce_exact(const Scm& scm, const Facts& w);

// --- Constrained update: closest feasible noise vector to a baseline ---
struct UpdateOptions {
    // Per-noise weights in the distance  sum_i w_i (u_i - baseline_i)^2.
    // Missing names weigh 1.
    std::map<std::string, double> weights;
    double residual_tolerance = 1e-6;
};

// Penalty method: minimizes distance + lambda * sum of squared residuals on
// the observed variables, lambda escalating 1, 10, ..., 1e8, inner
// minimization by cyclic golden-section line searches with Nelder-Mead
// restarts. Noises with no directed path to an observed variable stay at
// the baseline. Raises NoFeasiblePoint when the residual never reaches the
// tolerance.
DeterministicAbduction abduce_update(const Scm& scm, const Facts& w, const NoiseDraw& baseline,
                                     const UpdateOptions& options = {});

// --- Rejection sampling from the fact-conditioned posterior ---
struct RejectionOptions {
    std::int64_t n_target = 10'000;
    std::uint64_t seed = 0;
    // Absolute acceptance window for observed variables with continuous
    // ancestry. Unset: calibrated per variable as 0.01 x its prior-
    // predictive stddev estimated from 1000 forward samples.
    std::optional<double> tolerance;
    // Proposal budget; 0 means max(100000, 1000 * n_target).
    std::int64_t max_proposals = 0;
    int workers = 1;
};

// Draw from the priors, run the model forward, keep draws that reproduce
// the facts (exactly on finite-support variables, within the window
// elsewhere). When the budget runs out first, the partial sample set is
// returned with diagnostics.budget_exhausted set.
PosteriorAbduction abduce_rejection(const Scm& scm, const Facts& w,
                                    const RejectionOptions& options = {});

// --- Random-walk Metropolis-Hastings on the noise vector ---
struct McmcOptions {
    std::int64_t n_samples = 10'000;
    // Negative: default 10% of n_samples.
    std::int64_t n_burnin = -1;
    std::uint64_t seed = 0;
    // Random-walk scale as a multiple of each prior stddev.
    double proposal_scale = 0.5;
    // Gaussian kernel bandwidth on observed residuals. Unset: same
    // calibration as the rejection window. Must be > 0 when given.
    std::optional<double> kernel_bandwidth;
    int chains = 1;
};

// Softened-ABC posterior: target density prior(u) * exp(-sum r_k^2/(2 h_k^2))
// over the residuals of continuous observed variables; finite-support
// observations enter as exact-match indicators and finite-support noise
// coordinates are proposed by resampling their prior. Returns the
// post-burn-in chain with acceptance rate and effective sample size;
// acceptance below 0.1% raises DegenerateChain.
PosteriorAbduction abduce_mcmc(const Scm& scm, const Facts& w, const McmcOptions& options = {});

// Observed-variable acceptance windows used by rejection (and as default
// MCMC bandwidths): 0 for finite-support variables (exact match), else
// 0.01 x prior-predictive stddev from 1000 forward draws seeded off the
// master seed. An explicit tolerance overrides the continuous entries.
std::vector<double> calibrate_windows(const Scm& scm, const std::vector<int>& observed_idx,
                                      std::optional<double> explicit_tolerance,
                                      std::uint64_t seed);

}  // namespace scmi

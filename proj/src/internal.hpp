#pragma once

// Cross-file helpers that are not part of the installed surface.

#include <set>
#include <string>
#include <vector>

#include "scmi/inference.hpp"
#include "scmi/model.hpp"
#include "scmi/rng.hpp"

namespace scmi::detail {

double sample_dist(const NoiseDistribution& dist, Rng& rng);

ExactPmf exact_conditional(const Scm& scm, const std::set<std::string>& targets,
                           const Assignment& evidence, const InferenceLimits& limits);

Empirical mc_conditional(const Scm& scm, const std::set<std::string>& targets,
                         const Assignment& evidence, const MonteCarloEngine& engine);

// Wraps raw target tuples into an Empirical with per-target summaries.
Empirical empirical_from_samples(const std::vector<std::string>& targets,
                                 std::vector<std::vector<double>> samples,
                                 std::vector<double> weights);

void check_query_names(const Scm& scm, const std::set<std::string>& targets,
                       const Assignment& evidence);

}  // namespace scmi::detail

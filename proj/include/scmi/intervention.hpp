#pragma once

#include "scmi/inference.hpp"
#include "scmi/model.hpp"

namespace scmi {

// do(X=x): keys are endogenous names.
using Intervention = Assignment;

// Graph surgery. Each intervened variable's equation becomes the constant
// intervention value; its noise keeps its name but turns into an inert,
// unreferenced Point(0), so the one-noise-per-variable invariant survives.
// Equations of untouched variables are shared unchanged. The result is
// revalidated before being returned.
Scm surgery(const Scm& scm, const Intervention& dox);

// Truncated factorization of the mutilated model: the product of the
// original conditionals over non-intervened variables times indicator
// factors fixing the intervention. Computed without graph surgery; equals
// enumerate_joint(surgery(scm, dox)) and serves as its cross-check.
Factor truncated_joint(const Scm& scm, const Intervention& dox,
                       const InferenceLimits& limits = {});

// P(targets | do(dox), evidence): association query on the mutilated model.
// Population-level; no abduction.
DistributionResult intervention_query(const Scm& scm, const std::set<std::string>& targets,
                                      const Intervention& dox, const Assignment& evidence,
                                      const Engine& engine, const InferenceLimits& limits = {});

}  // namespace scmi

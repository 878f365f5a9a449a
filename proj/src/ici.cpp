#include "scmi/ici.hpp"

#include <cmath>
#include <string>

#include "internal.hpp"
#include "scmi/errors.hpp"

namespace scmi {

namespace {

NoiseDraw prior_mean_baseline(const Scm& scm) {
    NoiseDraw out;
    for (int i = 0; i < scm.size(); ++i) {
        out[scm.equation(i).noise.name] = dist_mean(scm.equation(i).noise.dist);
    }
    return out;
}

struct Propagated {
    std::vector<std::vector<double>> tuples;  // one per surviving draw
    std::vector<double> weights;
};

// Pushes every abduced draw through the model, keeping target tuples of the
// draws that match the evidence.
Propagated propagate(const Scm& model, const AbductionResult& abduced,
                     const std::vector<std::string>& targets, const Assignment& evidence,
                     double evidence_window) {
    std::vector<int> target_idx;
    for (const auto& t : targets) target_idx.push_back(require_variable(model, t));
    struct Check {
        int idx;
        double value;
        bool exact;
    };
    std::vector<Check> checks;
    for (const auto& [z, v] : evidence) {
        const int idx = require_variable(model, z);
        checks.push_back({idx, v, model.var_finite(idx) || evidence_window == 0.0});
    }

    std::vector<const NoiseDraw*> draws;
    std::vector<double> weights;
    if (const auto* det = std::get_if<DeterministicAbduction>(&abduced)) {
        draws.push_back(&det->u_star);
        weights.push_back(1.0);
    } else {
        const auto& post = std::get<PosteriorAbduction>(abduced);
        if (post.samples.empty()) {
            std::string message = "abduction produced no posterior samples";
            if (post.diagnostics.budget_exhausted) {
                message += " (budget of " + std::to_string(post.diagnostics.n_proposed) +
                           " proposals exhausted; the facts may be too unlikely)";
            }
            throw EngineError(ErrorCode::ZeroProbabilityEvidence, message);
        }
        for (std::size_t k = 0; k < post.samples.size(); ++k) {
            draws.push_back(&post.samples[k]);
            weights.push_back(post.weights[k]);
        }
    }

    Propagated out;
    for (std::size_t k = 0; k < draws.size(); ++k) {
        const std::vector<double> u = indexed_from_noise_draw(model, *draws[k]);
        const std::vector<double> vars = forward_eval_indexed(model, u);
        bool ok = true;
        for (const auto& c : checks) {
            const double v = vars[static_cast<std::size_t>(c.idx)];
            if (c.exact ? (v != c.value) : (std::abs(v - c.value) > evidence_window)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        std::vector<double> tuple(target_idx.size());
        for (std::size_t t = 0; t < tuple.size(); ++t) {
            tuple[t] = vars[static_cast<std::size_t>(target_idx[t])];
        }
        out.tuples.push_back(std::move(tuple));
        out.weights.push_back(weights[k]);
    }
    if (out.tuples.empty()) {
        throw EngineError(ErrorCode::ZeroProbabilityEvidence,
                          "no abduced draw is compatible with the evidence");
    }
    return out;
}

DistributionResult wrap(const std::vector<std::string>& targets, Propagated propagated,
                        bool deterministic) {
    if (deterministic) {
        ExactPmf pmf;
        pmf.targets = targets;
        pmf.support.push_back(propagated.tuples.front());
        pmf.probs.push_back(1.0);
        return pmf;
    }
    return detail::empirical_from_samples(targets, std::move(propagated.tuples),
                                          std::move(propagated.weights));
}

}  // namespace

AbductionResult indiv(const Scm& scm, const Facts& w, const AbductionMethod& method,
                      std::uint64_t seed) {
    if (const auto* exact = std::get_if<ExactMethod>(&method)) {
        (void)exact;
        return abduce_exact(scm, w);
    }
    if (const auto* update = std::get_if<UpdateMethod>(&method)) {
        const NoiseDraw baseline =
            update->baseline.empty() ? prior_mean_baseline(scm) : update->baseline;
        return abduce_update(scm, w, baseline, update->options);
    }
    if (const auto* rejection = std::get_if<RejectionMethod>(&method)) {
        RejectionOptions options = rejection->options;
        options.seed = seed;
        return abduce_rejection(scm, w, options);
    }
    const auto& mcmc = std::get<McmcMethod>(method);
    McmcOptions options = mcmc.options;
    options.seed = seed;
    return abduce_mcmc(scm, w, options);
}

DistributionResult ici_propagate(const Scm& scm, const AbductionResult& abduced,
                                 const IndividualQuery& query) {
    detail::check_query_names(scm, query.targets, query.evidence);
    if (query.evidence_window < 0.0) {
        throw EngineError(ErrorCode::InvalidQuery, "evidence window must be >= 0");
    }

    const Scm mutilated = query.dox.empty() ? scm : surgery(scm, query.dox);
    const std::vector<std::string> targets(query.targets.begin(), query.targets.end());
    Propagated propagated =
        propagate(mutilated, abduced, targets, query.evidence, query.evidence_window);
    return wrap(targets, std::move(propagated),
                std::holds_alternative<DeterministicAbduction>(abduced));
}

DistributionResult ici_query(const Scm& scm, const IndividualQuery& query) {
    const AbductionResult abduced = indiv(scm, query.facts, query.method, query.seed);
    return ici_propagate(scm, abduced, query);
}

IceResult ice_from(const Scm& scm, const AbductionResult& abduced, const IceRequest& request) {
    detail::check_query_names(scm, request.targets, {});

    const Scm arm1 = request.do1.empty() ? scm : surgery(scm, request.do1);
    const Scm arm2 = request.do2.empty() ? scm : surgery(scm, request.do2);

    const std::vector<std::string> targets(request.targets.begin(), request.targets.end());
    Propagated p1 = propagate(arm1, abduced, targets, {}, 0.0);
    Propagated p2 = propagate(arm2, abduced, targets, {}, 0.0);

    Propagated diff;
    diff.weights = p1.weights;
    diff.tuples.resize(p1.tuples.size());
    for (std::size_t k = 0; k < p1.tuples.size(); ++k) {
        std::vector<double> d(targets.size());
        for (std::size_t t = 0; t < targets.size(); ++t) {
            d[t] = p1.tuples[k][t] - p2.tuples[k][t];
        }
        diff.tuples[k] = std::move(d);
    }

    IceResult result;
    result.targets = targets;
    result.mean_difference.assign(targets.size(), 0.0);
    double wsum = 0.0;
    for (double wk : diff.weights) wsum += wk;
    for (std::size_t k = 0; k < diff.tuples.size(); ++k) {
        for (std::size_t t = 0; t < targets.size(); ++t) {
            result.mean_difference[t] += diff.weights[k] * diff.tuples[k][t];
        }
    }
    for (double& m : result.mean_difference) m /= wsum;

    const bool deterministic = std::holds_alternative<DeterministicAbduction>(abduced);
    result.differences = wrap(targets, std::move(diff), deterministic);
    return result;
}

IceResult ice(const Scm& scm, const IceRequest& request) {
    const AbductionResult abduced = indiv(scm, request.facts, request.method, request.seed);
    return ice_from(scm, abduced, request);
}

}  // namespace scmi

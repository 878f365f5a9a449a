#include "scmi/intervention.hpp"

#include <cmath>
#include <string>

#include "internal.hpp"
#include "scmi/errors.hpp"

namespace scmi {

namespace {

void check_intervention(const Scm& scm, const Intervention& dox) {
    for (const auto& [name, value] : dox) {
        require_variable(scm, name);
        if (!std::isfinite(value)) {
            throw EngineError(ErrorCode::InvalidQuery,
                              "intervention value for '" + name + "' must be finite");
        }
    }
}

}  // namespace

Scm surgery(const Scm& scm, const Intervention& dox) {
    check_intervention(scm, dox);
    RawModel raw = to_raw(scm);
    std::set<std::string> cut_noises;
    for (auto& eq : raw.equations) {
        const auto it = dox.find(eq.var);
        if (it == dox.end()) continue;
        const int idx = scm.index_of(eq.var);
        const std::string noise_name = scm.equation(idx).noise.name;
        eq.expr = make_literal(it->second);
        eq.noise_name = noise_name;
        cut_noises.insert(noise_name);
    }
    for (auto& decl : raw.noises) {
        if (cut_noises.count(decl.spec.name)) decl.spec.dist = PointDist{0.0};
    }
    std::vector<RawInverseDecl> kept;
    for (auto& inv : raw.inverses) {
        if (!cut_noises.count(inv.noise_name)) kept.push_back(std::move(inv));
    }
    raw.inverses = std::move(kept);

    ValidationResult result = validate(raw);
    if (!result.ok()) {
        throw EngineError(ErrorCode::InvalidModel,
                          "mutilated model failed validation: " +
                              format_diagnostic(result.diagnostics.front()));
    }
    return std::move(*result.scm);
}

Factor truncated_joint(const Scm& scm, const Intervention& dox,
                       const InferenceLimits& limits) {
    check_intervention(scm, dox);

    // Post-intervention supports, propagated over the original equations
    // with intervened variables pinned. No mutilated model is built here.
    std::vector<std::vector<double>> supports(static_cast<std::size_t>(scm.size()));
    std::vector<char> fin(static_cast<std::size_t>(scm.size()), 0);
    for (int idx : scm.topo_order()) {
        const Equation& eq = scm.equation(idx);
        const auto it = dox.find(eq.var);
        if (it != dox.end()) {
            supports[static_cast<std::size_t>(idx)] = {it->second};
            fin[static_cast<std::size_t>(idx)] = 1;
            continue;
        }
        char f = finite_support(eq.noise.dist) ? 1 : 0;
        for (int p : eq.parents) f = f && fin[static_cast<std::size_t>(p)];
        fin[static_cast<std::size_t>(idx)] = f;
        if (!f) {
            throw EngineError(ErrorCode::NotFiniteSupport,
                              "variable '" + eq.var + "' does not have finite support");
        }
        std::vector<std::pair<double, double>> atoms = support_atoms(eq.noise.dist);
        std::int64_t combos = 1;
        for (int p : eq.parents) {
            combos *= static_cast<std::int64_t>(supports[static_cast<std::size_t>(p)].size());
            if (combos > limits.max_joint_states) {
                throw EngineError(ErrorCode::SupportTooLarge,
                                  "support enumeration for '" + eq.var + "' exceeds " +
                                      std::to_string(limits.max_joint_states) + " states");
            }
        }
        std::set<double> values;
        std::vector<std::size_t> counter(eq.parents.size(), 0);
        std::vector<double> vars(static_cast<std::size_t>(scm.size()), 0.0);
        for (std::int64_t c = 0; c < combos; ++c) {
            for (std::size_t j = 0; j < eq.parents.size(); ++j) {
                vars[static_cast<std::size_t>(eq.parents[j])] =
                    supports[static_cast<std::size_t>(eq.parents[j])][counter[j]];
            }
            for (const auto& [u, prob] : atoms) {
                (void)prob;
                values.insert(eq.compiled.eval(vars, u));
            }
            for (std::size_t j = 0; j < counter.size(); ++j) {
                if (++counter[j] <
                    supports[static_cast<std::size_t>(eq.parents[j])].size()) {
                    break;
                }
                counter[j] = 0;
            }
        }
        supports[static_cast<std::size_t>(idx)].assign(values.begin(), values.end());
    }

    // Product of original conditionals over untouched variables, times an
    // indicator per intervened variable.
    std::vector<Factor> factors;
    for (int i = 0; i < scm.size(); ++i) {
        const Equation& eq = scm.equation(i);
        const auto it = dox.find(eq.var);
        if (it != dox.end()) {
            Factor indicator;
            indicator.scope.push_back(eq.var);
            indicator.table[{it->second}] = 1.0;
            factors.push_back(std::move(indicator));
            continue;
        }
        std::vector<std::vector<double>> parent_supports;
        for (int p : eq.parents) {
            parent_supports.push_back(supports[static_cast<std::size_t>(p)]);
        }
        factors.push_back(conditional_factor(scm, i, parent_supports));
    }

    Factor joint = eliminate(std::move(factors), {}, EliminationHeuristic::MinDegree,
                             scm.variable_names());

    // Realign the scope to declaration order for stable output.
    Factor out;
    out.scope = scm.variable_names();
    std::vector<int> perm;
    for (const auto& name : out.scope) perm.push_back(joint.position_of(name));
    for (const auto& [key, p] : joint.table) {
        std::vector<double> k(key.size());
        for (std::size_t i = 0; i < perm.size(); ++i) {
            k[i] = key[static_cast<std::size_t>(perm[i])];
        }
        out.table[k] += p;
    }
    return out;
}

DistributionResult intervention_query(const Scm& scm, const std::set<std::string>& targets,
                                      const Intervention& dox, const Assignment& evidence,
                                      const Engine& engine, const InferenceLimits& limits) {
    detail::check_query_names(scm, targets, evidence);
    Scm mutilated = surgery(scm, dox);
    return association_query(mutilated, targets, evidence, engine, limits);
}

}  // namespace scmi

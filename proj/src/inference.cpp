#include "scmi/inference.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "internal.hpp"
#include "scmi/errors.hpp"

namespace scmi {

SummaryStats summarize(const std::vector<double>& values, const std::vector<double>& weights) {
    if (values.empty() || values.size() != weights.size()) {
        throw EngineError(ErrorCode::InvalidQuery,
                          "summarize needs matching nonempty value and weight lists");
    }
    double wsum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) {
            throw EngineError(ErrorCode::InvalidQuery, "summarize weights must be >= 0");
        }
        wsum += w;
    }
    if (!(wsum > 0.0)) {
        throw EngineError(ErrorCode::InvalidQuery, "summarize weights must not all be zero");
    }

    SummaryStats s;
    for (std::size_t i = 0; i < values.size(); ++i) s.mean += weights[i] * values[i];
    s.mean /= wsum;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - s.mean;
        s.variance += weights[i] * d * d;
    }
    s.variance /= wsum;
    s.stddev = std::sqrt(s.variance);

    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b];
    });
    // Lowest value whose cumulative weight reaches q * total.
    auto quantile = [&](double q) {
        double cum = 0.0;
        for (std::size_t i : order) {
            cum += weights[i];
            if (cum >= q * wsum) return values[i];
        }
        return values[order.back()];
    };
    s.q05 = quantile(0.05);
    s.q25 = quantile(0.25);
    s.q50 = quantile(0.50);
    s.q75 = quantile(0.75);
    s.q95 = quantile(0.95);
    return s;
}

std::vector<double> forward_eval_indexed(const Scm& scm, const std::vector<double>& noise) {
    std::vector<double> vars(static_cast<std::size_t>(scm.size()), 0.0);
    for (int idx : scm.topo_order()) {
        const Equation& eq = scm.equation(idx);
        try {
            vars[static_cast<std::size_t>(idx)] =
                eq.compiled.eval(vars, noise[static_cast<std::size_t>(idx)]);
        } catch (const EngineError& e) {
            throw EngineError(e.code(),
                              std::string("evaluating '") + eq.var + "': " + e.what());
        }
        if (!std::isfinite(vars[static_cast<std::size_t>(idx)])) {
            throw EngineError(ErrorCode::EvaluationError,
                              "evaluating '" + eq.var + "': result is not finite");
        }
    }
    return vars;
}

Assignment forward_sample(const Scm& scm, const NoiseDraw& noise) {
    std::vector<double> indexed = indexed_from_noise_draw(scm, noise);
    std::vector<double> vars = forward_eval_indexed(scm, indexed);
    Assignment out;
    for (int i = 0; i < scm.size(); ++i) {
        out[scm.equation(i).var] = vars[static_cast<std::size_t>(i)];
    }
    return out;
}

NoiseDraw noise_draw_from_indexed(const Scm& scm, const std::vector<double>& indexed) {
    NoiseDraw out;
    for (int i = 0; i < scm.size(); ++i) {
        out[scm.equation(i).noise.name] = indexed[static_cast<std::size_t>(i)];
    }
    return out;
}

std::vector<double> indexed_from_noise_draw(const Scm& scm, const NoiseDraw& draw) {
    std::vector<double> out(static_cast<std::size_t>(scm.size()), 0.0);
    for (int i = 0; i < scm.size(); ++i) {
        const std::string& name = scm.equation(i).noise.name;
        const auto it = draw.find(name);
        if (it == draw.end()) {
            throw EngineError(ErrorCode::PartialObservation,
                              "noise draw is missing '" + name + "'");
        }
        out[static_cast<std::size_t>(i)] = it->second;
    }
    return out;
}

double detail::sample_dist(const NoiseDistribution& dist, Rng& rng) {
    struct Visitor {
        Rng& rng;
        double operator()(const PointDist& d) const { return d.value; }
        double operator()(const NormalDist& d) const { return rng.normal(d.mean, d.stddev); }
        double operator()(const UniformDist& d) const { return rng.uniform(d.lo, d.hi); }
        double operator()(const CategoricalDist& d) const {
            return d.values[rng.categorical(d.probs)];
        }
    };
    return std::visit(Visitor{rng}, dist);
}

std::vector<std::vector<double>> sample_noise_indexed(const Scm& scm, std::uint64_t seed,
                                                      std::int64_t n, int workers) {
    if (n < 0) throw EngineError(ErrorCode::InvalidQuery, "sample count must be >= 0");
    if (workers < 1) workers = 1;
    if (workers > n && n > 0) workers = static_cast<int>(n);
    if (n == 0) return {};

    // Shard k handles draws [k*n/workers, (k+1)*n/workers) from its own
    // substream; concatenation in shard order keeps the output a pure
    // function of (seed, n, workers).
    auto run_shard = [&scm, seed, n, workers](int shard) {
        const std::int64_t lo = shard * n / workers;
        const std::int64_t hi = (shard + 1) * n / workers;
        Rng rng(split_seed(seed, static_cast<std::uint64_t>(shard)));
        std::vector<std::vector<double>> out;
        out.reserve(static_cast<std::size_t>(hi - lo));
        for (std::int64_t k = lo; k < hi; ++k) {
            std::vector<double> draw(static_cast<std::size_t>(scm.size()));
            for (int i = 0; i < scm.size(); ++i) {
                draw[static_cast<std::size_t>(i)] =
                    detail::sample_dist(scm.equation(i).noise.dist, rng);
            }
            out.push_back(std::move(draw));
        }
        return out;
    };

    std::vector<std::vector<double>> all;
    all.reserve(static_cast<std::size_t>(n));
    if (workers == 1) {
        all = run_shard(0);
    } else {
        std::vector<std::future<std::vector<std::vector<double>>>> futures;
        futures.reserve(static_cast<std::size_t>(workers));
        for (int shard = 0; shard < workers; ++shard) {
            futures.push_back(std::async(std::launch::async, run_shard, shard));
        }
        for (auto& f : futures) {
            auto part = f.get();
            all.insert(all.end(), part.begin(), part.end());
        }
    }
    return all;
}

std::vector<NoiseDraw> sample_noise(const Scm& scm, std::uint64_t seed, std::int64_t n,
                                    int workers) {
    std::vector<NoiseDraw> out;
    out.reserve(static_cast<std::size_t>(n));
    for (const auto& indexed : sample_noise_indexed(scm, seed, n, workers)) {
        out.push_back(noise_draw_from_indexed(scm, indexed));
    }
    return out;
}

std::vector<std::vector<double>> variable_supports(const Scm& scm,
                                                   const InferenceLimits& limits) {
    std::vector<std::vector<double>> supports(static_cast<std::size_t>(scm.size()));
    for (int idx : scm.topo_order()) {
        const Equation& eq = scm.equation(idx);
        if (!scm.var_finite(idx)) {
            throw EngineError(ErrorCode::NotFiniteSupport,
                              "variable '" + eq.var + "' does not have finite support");
        }
        std::vector<std::pair<double, double>> atoms = support_atoms(eq.noise.dist);

        // Enumerate the product of parent supports with an odometer.
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
            if (static_cast<std::int64_t>(values.size()) > limits.max_joint_states) {
                throw EngineError(ErrorCode::SupportTooLarge,
                                  "support of '" + eq.var + "' exceeds " +
                                      std::to_string(limits.max_joint_states) + " values");
            }
        }
        supports[static_cast<std::size_t>(idx)].assign(values.begin(), values.end());
    }
    return supports;
}

Factor conditional_factor(const Scm& scm, int eq_index,
                          const std::vector<std::vector<double>>& parent_supports) {
    const Equation& eq = scm.equation(eq_index);
    std::vector<std::pair<double, double>> atoms = support_atoms(eq.noise.dist);

    Factor out;
    for (int p : eq.parents) out.scope.push_back(scm.equation(p).var);
    out.scope.push_back(eq.var);

    std::int64_t combos = 1;
    for (std::size_t j = 0; j < eq.parents.size(); ++j) {
        combos *= static_cast<std::int64_t>(parent_supports[j].size());
    }
    std::vector<std::size_t> counter(eq.parents.size(), 0);
    std::vector<double> vars(static_cast<std::size_t>(scm.size()), 0.0);
    for (std::int64_t c = 0; c < combos; ++c) {
        std::vector<double> key(eq.parents.size() + 1, 0.0);
        for (std::size_t j = 0; j < eq.parents.size(); ++j) {
            const double v = parent_supports[j][counter[j]];
            vars[static_cast<std::size_t>(eq.parents[j])] = v;
            key[j] = v;
        }
        for (const auto& [u, prob] : atoms) {
            key[eq.parents.size()] = eq.compiled.eval(vars, u);
            out.table[key] += prob;
        }
        for (std::size_t j = 0; j < counter.size(); ++j) {
            if (++counter[j] < parent_supports[j].size()) break;
            counter[j] = 0;
        }
    }
    return out;
}

Factor enumerate_joint(const Scm& scm, const InferenceLimits& limits) {
    std::vector<std::vector<std::pair<double, double>>> atoms;
    std::int64_t states = 1;
    for (int i = 0; i < scm.size(); ++i) {
        atoms.push_back(support_atoms(scm.equation(i).noise.dist));
        states *= static_cast<std::int64_t>(atoms.back().size());
        if (states > limits.max_joint_states) {
            throw EngineError(ErrorCode::SupportTooLarge,
                              "joint noise support exceeds " +
                                  std::to_string(limits.max_joint_states) + " states");
        }
    }

    Factor out;
    for (int i = 0; i < scm.size(); ++i) out.scope.push_back(scm.equation(i).var);

    std::vector<std::size_t> counter(static_cast<std::size_t>(scm.size()), 0);
    std::vector<double> noise(static_cast<std::size_t>(scm.size()), 0.0);
    for (std::int64_t s = 0; s < states; ++s) {
        double prob = 1.0;
        for (int i = 0; i < scm.size(); ++i) {
            const auto& [u, p] = atoms[static_cast<std::size_t>(i)][counter[static_cast<
                std::size_t>(i)]];
            noise[static_cast<std::size_t>(i)] = u;
            prob *= p;
        }
        out.table[forward_eval_indexed(scm, noise)] += prob;
        for (std::size_t j = 0; j < counter.size(); ++j) {
            if (++counter[j] < atoms[j].size()) break;
            counter[j] = 0;
        }
    }
    return out;
}

Factor noise_to_conditional(const Scm& scm, const std::string& var,
                            const Assignment& pa_values) {
    const int idx = require_variable(scm, var);
    const Equation& eq = scm.equation(idx);
    std::vector<double> vars(static_cast<std::size_t>(scm.size()), 0.0);
    for (int p : eq.parents) {
        const std::string& pname = scm.equation(p).var;
        const auto it = pa_values.find(pname);
        if (it == pa_values.end()) {
            throw EngineError(ErrorCode::PartialObservation,
                              "missing parent value '" + pname + "' for '" + var + "'");
        }
        vars[static_cast<std::size_t>(p)] = it->second;
    }
    Factor out;
    out.scope.push_back(var);
    for (const auto& [u, prob] : support_atoms(eq.noise.dist)) {
        out.table[{eq.compiled.eval(vars, u)}] += prob;
    }
    return out;
}

namespace detail {

void check_query_names(const Scm& scm, const std::set<std::string>& targets,
                       const Assignment& evidence) {
    if (targets.empty()) {
        throw EngineError(ErrorCode::InvalidQuery, "query needs at least one target variable");
    }
    for (const auto& t : targets) require_variable(scm, t);
    for (const auto& [z, v] : evidence) {
        require_variable(scm, z);
        if (!std::isfinite(v)) {
            throw EngineError(ErrorCode::InvalidQuery,
                              "evidence value for '" + z + "' must be finite");
        }
    }
}

// Exact route shared by association and post-surgery queries: conditional
// factors, restriction by evidence, elimination of hidden variables,
// normalization.
ExactPmf exact_conditional(const Scm& scm, const std::set<std::string>& targets,
                           const Assignment& evidence, const InferenceLimits& limits) {
    std::vector<std::vector<double>> supports = variable_supports(scm, limits);

    std::vector<Factor> factors;
    for (int i = 0; i < scm.size(); ++i) {
        const Equation& eq = scm.equation(i);
        std::vector<std::vector<double>> parent_supports;
        for (int p : eq.parents) {
            parent_supports.push_back(supports[static_cast<std::size_t>(p)]);
        }
        factors.push_back(conditional_factor(scm, i, parent_supports));
    }

    for (const auto& [z, v] : evidence) {
        for (auto& f : factors) {
            if (f.defined_over(z)) f = factor_restrict(f, z, v);
        }
    }

    std::set<std::string> hidden;
    for (const auto& name : scm.variable_names()) {
        if (!targets.count(name) && !evidence.count(name)) hidden.insert(name);
    }
    Factor joint = eliminate(std::move(factors), hidden, EliminationHeuristic::MinDegree,
                             scm.variable_names());
    Factor normalized;
    try {
        normalized = factor_normalize(joint);
    } catch (const EngineError&) {
        throw EngineError(ErrorCode::ZeroProbabilityEvidence,
                          "evidence has probability zero under the model");
    }

    // Targets conditioned on themselves come back as that point value.
    ExactPmf pmf;
    pmf.targets.assign(targets.begin(), targets.end());
    std::vector<int> source(pmf.targets.size(), -1);  // column in normalized, or -1
    std::vector<double> fixed(pmf.targets.size(), 0.0);
    for (std::size_t t = 0; t < pmf.targets.size(); ++t) {
        const int pos = normalized.position_of(pmf.targets[t]);
        if (pos >= 0) {
            source[t] = pos;
        } else {
            fixed[t] = evidence.at(pmf.targets[t]);
        }
    }
    std::map<std::vector<double>, double> collected;
    for (const auto& [key, p] : normalized.table) {
        std::vector<double> tuple(pmf.targets.size());
        for (std::size_t t = 0; t < tuple.size(); ++t) {
            tuple[t] = source[t] >= 0 ? key[static_cast<std::size_t>(source[t])] : fixed[t];
        }
        collected[tuple] += p;
    }
    for (const auto& [tuple, p] : collected) {
        pmf.support.push_back(tuple);
        pmf.probs.push_back(p);
    }
    return pmf;
}

Empirical empirical_from_samples(const std::vector<std::string>& targets,
                                 std::vector<std::vector<double>> samples,
                                 std::vector<double> weights) {
    Empirical emp;
    emp.targets = targets;
    emp.samples = std::move(samples);
    emp.weights = std::move(weights);
    for (std::size_t t = 0; t < emp.targets.size(); ++t) {
        std::vector<double> column(emp.samples.size());
        for (std::size_t i = 0; i < emp.samples.size(); ++i) column[i] = emp.samples[i][t];
        emp.summary.push_back(summarize(column, emp.weights));
    }
    return emp;
}

Empirical mc_conditional(const Scm& scm, const std::set<std::string>& targets,
                         const Assignment& evidence, const MonteCarloEngine& engine) {
    if (engine.n <= 0) {
        throw EngineError(ErrorCode::InvalidQuery, "Monte Carlo sample count must be > 0");
    }
    std::vector<int> target_idx;
    for (const auto& t : targets) target_idx.push_back(scm.index_of(t));
    struct EvidenceCheck {
        int idx;
        double value;
        bool exact;
    };
    std::vector<EvidenceCheck> checks;
    for (const auto& [z, v] : evidence) {
        const int idx = scm.index_of(z);
        checks.push_back({idx, v, scm.var_finite(idx)});
    }

    std::vector<std::vector<double>> kept;
    std::vector<std::vector<double>> draws =
        sample_noise_indexed(scm, engine.seed, engine.n, engine.workers);
    for (const auto& draw : draws) {
        std::vector<double> vars = forward_eval_indexed(scm, draw);
        bool ok = true;
        for (const auto& c : checks) {
            const double v = vars[static_cast<std::size_t>(c.idx)];
            if (c.exact ? (v != c.value) : (std::abs(v - c.value) > engine.evidence_window)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        std::vector<double> tuple(target_idx.size());
        for (std::size_t t = 0; t < tuple.size(); ++t) {
            tuple[t] = vars[static_cast<std::size_t>(target_idx[t])];
        }
        kept.push_back(std::move(tuple));
    }
    if (kept.empty()) {
        throw EngineError(ErrorCode::ZeroProbabilityEvidence,
                          "no forward samples matched the evidence (n=" +
                              std::to_string(engine.n) + ")");
    }
    std::vector<std::string> names(targets.begin(), targets.end());
    std::vector<double> weights(kept.size(), 1.0);
    return empirical_from_samples(names, std::move(kept), std::move(weights));
}

}  // namespace detail

DistributionResult association_query(const Scm& scm, const std::set<std::string>& targets,
                                     const Assignment& evidence, const Engine& engine,
                                     const InferenceLimits& limits) {
    detail::check_query_names(scm, targets, evidence);
    if (const auto* mc = std::get_if<MonteCarloEngine>(&engine)) {
        return detail::mc_conditional(scm, targets, evidence, *mc);
    }
    return detail::exact_conditional(scm, targets, evidence, limits);
}

}  // namespace scmi

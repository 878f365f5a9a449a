#include "scmi/abduction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <string>

#include "internal.hpp"
#include "scmi/errors.hpp"

namespace scmi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kCalibrationStream = 0x57a75ca1eULL;
constexpr std::uint64_t kMcmcStreamBase = 0x6d636d63ULL;
constexpr double kWindowFraction = 0.01;
constexpr std::int64_t kCalibrationDraws = 1000;

// Observed variable indices in ascending order, values validated.
std::vector<std::pair<int, double>> observed_list(const Scm& scm, const Facts& w) {
    if (w.empty()) {
        throw EngineError(ErrorCode::InvalidQuery,
                          "abduction needs at least one observed fact");
    }
    std::vector<std::pair<int, double>> out;
    for (const auto& [name, value] : w) {
        const int idx = require_variable(scm, name);
        if (!std::isfinite(value)) {
            throw EngineError(ErrorCode::InvalidQuery,
                              "observed value for '" + name + "' must be finite");
        }
        out.emplace_back(idx, value);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool close_enough(double got, double expected, double tol) {
    return std::abs(got - expected) <= tol * std::max(1.0, std::abs(expected));
}

double prior_sd(const NoiseDistribution& dist) { return std::sqrt(dist_variance(dist)); }

double golden_section(const std::function<double(double)>& g, double a, double b, int iters) {
    const double phi = 0.6180339887498949;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = g(x1);
    double f2 = g(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = g(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

// Line minimization around x0, expanding the bracket when the minimizer
// lands on its edge.
double line_minimize(const std::function<double(double)>& g, double x0, double scale) {
    double radius = 4.0 * scale;
    double best_x = x0;
    double best_f = g(x0);
    for (int grow = 0; grow < 8; ++grow) {
        const double x = golden_section(g, x0 - radius, x0 + radius, 80);
        const double f = g(x);
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
        if (std::abs(x - x0) < 0.9 * radius) break;
        radius *= 8.0;
    }
    return best_x;
}

// Nelder-Mead over the listed coordinates of u; other coordinates stay put.
void nelder_mead(std::vector<double>& u, const std::vector<int>& coords,
                 const std::vector<double>& steps,
                 const std::function<double(const std::vector<double>&)>& f, int max_iters) {
    const std::size_t k = coords.size();
    if (k == 0) return;

    auto embed = [&](const std::vector<double>& x) {
        std::vector<double> full = u;
        for (std::size_t i = 0; i < k; ++i) full[static_cast<std::size_t>(coords[i])] = x[i];
        return full;
    };

    std::vector<std::vector<double>> simplex(k + 1);
    std::vector<double> values(k + 1);
    std::vector<double> x0(k);
    for (std::size_t i = 0; i < k; ++i) x0[i] = u[static_cast<std::size_t>(coords[i])];
    simplex[0] = x0;
    values[0] = f(embed(x0));
    for (std::size_t i = 0; i < k; ++i) {
        simplex[i + 1] = x0;
        simplex[i + 1][i] += steps[i];
        values[i + 1] = f(embed(simplex[i + 1]));
    }

    auto order = [&]() {
        std::vector<std::size_t> idx(k + 1);
        for (std::size_t i = 0; i <= k; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<std::vector<double>> s(k + 1);
        std::vector<double> v(k + 1);
        for (std::size_t i = 0; i <= k; ++i) {
            s[i] = simplex[idx[i]];
            v[i] = values[idx[i]];
        }
        simplex = std::move(s);
        values = std::move(v);
    };

    for (int iter = 0; iter < max_iters; ++iter) {
        order();
        if (std::isfinite(values[k]) &&
            values[k] - values[0] <= 1e-14 * (1.0 + std::abs(values[0]))) {
            break;
        }
        std::vector<double> centroid(k, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(k);

        auto blend = [&](double t) {
            std::vector<double> x(k);
            for (std::size_t j = 0; j < k; ++j) {
                x[j] = centroid[j] + t * (simplex[k][j] - centroid[j]);
            }
            return x;
        };

        std::vector<double> reflect = blend(-1.0);
        const double fr = f(embed(reflect));
        if (fr < values[0]) {
            std::vector<double> expand = blend(-2.0);
            const double fe = f(embed(expand));
            if (fe < fr) {
                simplex[k] = std::move(expand);
                values[k] = fe;
            } else {
                simplex[k] = std::move(reflect);
                values[k] = fr;
            }
            continue;
        }
        if (fr < values[k - 1]) {
            simplex[k] = std::move(reflect);
            values[k] = fr;
            continue;
        }
        std::vector<double> contract = blend(fr < values[k] ? -0.5 : 0.5);
        const double fc = f(embed(contract));
        if (fc < std::min(fr, values[k])) {
            simplex[k] = std::move(contract);
            values[k] = fc;
            continue;
        }
        for (std::size_t i = 1; i <= k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
            }
            values[i] = f(embed(simplex[i]));
        }
    }
    order();
    const double f_current = f(embed(x0));
    if (values[0] < f_current) {
        for (std::size_t i = 0; i < k; ++i) {
            u[static_cast<std::size_t>(coords[i])] = simplex[0][i];
        }
    }
}

}  // namespace

DeterministicAbduction abduce_exact(const Scm& scm, const Facts& w) {
    const auto observed = observed_list(scm, w);
    if (static_cast<int>(observed.size()) != scm.size()) {
        for (int i = 0; i < scm.size(); ++i) {
            if (!w.count(scm.equation(i).var)) {
                throw EngineError(ErrorCode::PartialObservation,
                                  "exact abduction needs every variable observed; '" +
                                      scm.equation(i).var + "' is missing");
            }
        }
    }

    std::vector<double> vars(static_cast<std::size_t>(scm.size()), 0.0);
    for (const auto& [idx, value] : observed) vars[static_cast<std::size_t>(idx)] = value;

    std::vector<double> u(static_cast<std::size_t>(scm.size()), 0.0);
    for (int idx : scm.topo_order()) {
        const Equation& eq = scm.equation(idx);
        if (!eq.noise_referenced) {
            u[static_cast<std::size_t>(idx)] = dist_mean(eq.noise.dist);
            continue;
        }
        if (!eq.inverse) {
            throw EngineError(ErrorCode::NotInvertible,
                              "equation for '" + eq.var + "' has no inverse for noise '" +
                                  eq.noise.name + "'");
        }
        u[static_cast<std::size_t>(idx)] = eq.compiled_inverse.eval(vars, 0.0);
    }

    // Push forward and verify the facts are reproduced.
    std::vector<double> replay = forward_eval_indexed(scm, u);
    for (const auto& [idx, value] : observed) {
        if (!close_enough(replay[static_cast<std::size_t>(idx)], value, 1e-9)) {
            throw EngineError(ErrorCode::InconsistentFacts,
                              "facts are inconsistent: '" + scm.equation(idx).var +
                                  "' replays to a different value");
        }
    }
    return DeterministicAbduction{noise_draw_from_indexed(scm, u)};
}

DeterministicAbduction abduce_update(const Scm& scm, const Facts& w, const NoiseDraw& baseline,
                                     const UpdateOptions& options) {
    const auto observed = observed_list(scm, w);
    std::vector<double> base = indexed_from_noise_draw(scm, baseline);

    std::vector<double> weight(static_cast<std::size_t>(scm.size()), 1.0);
    for (const auto& [name, value] : options.weights) {
        const int idx = scm.noise_index_of(name);
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw EngineError(ErrorCode::InvalidQuery,
                              "weight for noise '" + name + "' must be positive and finite");
        }
        weight[static_cast<std::size_t>(idx)] = value;
    }

    // Free coordinates: referenced noises whose variable reaches an observed
    // one, with more than a single prior atom to move over.
    std::vector<int> free_cont;
    std::vector<int> free_finite;
    for (int i = 0; i < scm.size(); ++i) {
        const Equation& eq = scm.equation(i);
        if (!eq.noise_referenced) continue;
        const std::vector<char> reach = scm.reachable_mask(i);
        bool touches = false;
        for (const auto& [idx, value] : observed) {
            touches = touches || reach[static_cast<std::size_t>(idx)];
        }
        if (!touches) continue;
        if (std::holds_alternative<PointDist>(eq.noise.dist)) continue;
        if (finite_support(eq.noise.dist)) {
            free_finite.push_back(i);
        } else {
            free_cont.push_back(i);
        }
    }

    auto residuals = [&](const std::vector<double>& u, double& max_abs) {
        max_abs = kInf;
        std::vector<double> vars;
        try {
            vars = forward_eval_indexed(scm, u);
        } catch (const EngineError&) {
            return kInf;
        }
        double sum = 0.0;
        max_abs = 0.0;
        for (const auto& [idx, value] : observed) {
            const double r = vars[static_cast<std::size_t>(idx)] - value;
            sum += r * r;
            max_abs = std::max(max_abs, std::abs(r));
        }
        return sum;
    };

    auto objective = [&](const std::vector<double>& u, double lambda) {
        double dist = 0.0;
        for (int i = 0; i < scm.size(); ++i) {
            const double d = u[static_cast<std::size_t>(i)] - base[static_cast<std::size_t>(i)];
            dist += weight[static_cast<std::size_t>(i)] * d * d;
        }
        double max_abs = 0.0;
        const double pen = residuals(u, max_abs);
        return dist + lambda * pen;
    };

    std::vector<double> u = base;
    double max_abs = 0.0;
    residuals(u, max_abs);
    if (max_abs <= options.residual_tolerance) {
        return DeterministicAbduction{noise_draw_from_indexed(scm, u)};
    }

    std::vector<double> scales(free_cont.size());
    for (std::size_t j = 0; j < free_cont.size(); ++j) {
        scales[j] = std::max(1.0, prior_sd(scm.equation(free_cont[j]).noise.dist));
    }

    for (double lambda = 1.0; lambda <= 1e8; lambda *= 10.0) {
        auto f_lambda = [&](const std::vector<double>& x) { return objective(x, lambda); };
        for (int cycle = 0; cycle < 12; ++cycle) {
            double before = f_lambda(u);
            for (std::size_t j = 0; j < free_cont.size(); ++j) {
                const int i = free_cont[j];
                auto g = [&](double x) {
                    std::vector<double> trial = u;
                    trial[static_cast<std::size_t>(i)] = x;
                    return f_lambda(trial);
                };
                u[static_cast<std::size_t>(i)] =
                    line_minimize(g, u[static_cast<std::size_t>(i)], scales[j]);
            }
            for (int i : free_finite) {
                // Each atom is scored with the continuous coordinates re-tuned
                // for it; otherwise a flip is charged for slack it obsoletes
                // and large lambda freezes the discrete choice.
                std::vector<double> best_u = u;
                double best_f = f_lambda(u);
                for (const auto& [atom, prob] : support_atoms(scm.equation(i).noise.dist)) {
                    (void)prob;
                    std::vector<double> trial = u;
                    trial[static_cast<std::size_t>(i)] = atom;
                    for (std::size_t j = 0; j < free_cont.size(); ++j) {
                        const int c = free_cont[j];
                        auto g = [&](double x) {
                            std::vector<double> probe = trial;
                            probe[static_cast<std::size_t>(c)] = x;
                            return f_lambda(probe);
                        };
                        trial[static_cast<std::size_t>(c)] =
                            line_minimize(g, trial[static_cast<std::size_t>(c)], scales[j]);
                    }
                    const double f = f_lambda(trial);
                    if (f < best_f) {
                        best_f = f;
                        best_u = std::move(trial);
                    }
                }
                u = std::move(best_u);
            }
            double after = f_lambda(u);
            if (!(before - after > 1e-15 * (1.0 + std::abs(before)))) break;
        }
        std::vector<double> steps(free_cont.size());
        for (std::size_t j = 0; j < free_cont.size(); ++j) steps[j] = 0.25 * scales[j];
        nelder_mead(u, free_cont, steps, f_lambda,
                    300 + 100 * static_cast<int>(free_cont.size()));

        residuals(u, max_abs);
        if (max_abs <= options.residual_tolerance) {
            return DeterministicAbduction{noise_draw_from_indexed(scm, u)};
        }
    }

    if (!std::isfinite(objective(u, 1.0))) {
        throw EngineError(ErrorCode::NonFiniteObjective,
                          "update objective is not finite anywhere visited");
    }
    throw EngineError(ErrorCode::NoFeasiblePoint,
                      "constrained update did not reach the residual tolerance (max residual " +
                          std::to_string(max_abs) + ")");
}

std::vector<double> calibrate_windows(const Scm& scm, const std::vector<int>& observed_idx,
                                      std::optional<double> explicit_tolerance,
                                      std::uint64_t seed) {
    std::vector<double> out(observed_idx.size(), 0.0);
    bool need_sampling = false;
    for (std::size_t k = 0; k < observed_idx.size(); ++k) {
        if (scm.var_finite(observed_idx[k])) continue;
        if (explicit_tolerance) {
            if (!(*explicit_tolerance > 0.0)) {
                throw EngineError(ErrorCode::InvalidQuery,
                                  "acceptance tolerance must be > 0");
            }
            out[k] = *explicit_tolerance;
        } else {
            need_sampling = true;
        }
    }
    if (!need_sampling) return out;

    const auto draws =
        sample_noise_indexed(scm, split_seed(seed, kCalibrationStream), kCalibrationDraws, 1);
    std::vector<std::vector<double>> values(observed_idx.size());
    for (const auto& draw : draws) {
        std::vector<double> vars;
        try {
            vars = forward_eval_indexed(scm, draw);
        } catch (const EngineError&) {
            continue;  // undefined draws carry no information about spread
        }
        for (std::size_t k = 0; k < observed_idx.size(); ++k) {
            values[k].push_back(vars[static_cast<std::size_t>(observed_idx[k])]);
        }
    }
    for (std::size_t k = 0; k < observed_idx.size(); ++k) {
        if (scm.var_finite(observed_idx[k]) || out[k] > 0.0) continue;
        if (values[k].empty()) {
            throw EngineError(ErrorCode::EvaluationError,
                              "window calibration: no forward draw evaluated");
        }
        double mean = 0.0;
        for (double v : values[k]) mean += v;
        mean /= static_cast<double>(values[k].size());
        double var = 0.0;
        for (double v : values[k]) var += (v - mean) * (v - mean);
        var /= static_cast<double>(values[k].size());
        out[k] = kWindowFraction * std::sqrt(var);
    }
    return out;
}

PosteriorAbduction abduce_rejection(const Scm& scm, const Facts& w,
                                    const RejectionOptions& options) {
    const auto observed = observed_list(scm, w);
    if (options.n_target <= 0) {
        throw EngineError(ErrorCode::InvalidQuery, "rejection target count must be > 0");
    }
    const int workers = std::max(1, options.workers);
    const std::int64_t budget = options.max_proposals > 0
                                    ? options.max_proposals
                                    : std::max<std::int64_t>(100'000, 1000 * options.n_target);

    std::vector<int> observed_idx;
    for (const auto& [idx, value] : observed) observed_idx.push_back(idx);
    const std::vector<double> window =
        calibrate_windows(scm, observed_idx, options.tolerance, options.seed);

    struct Hit {
        std::int64_t global;
        std::vector<double> u;
    };
    auto run_shard = [&](std::uint64_t stream, std::int64_t base,
                         std::int64_t count) -> std::vector<Hit> {
        Rng rng(split_seed(options.seed, stream));
        std::vector<Hit> hits;
        for (std::int64_t k = 0; k < count; ++k) {
            std::vector<double> u(static_cast<std::size_t>(scm.size()));
            for (int i = 0; i < scm.size(); ++i) {
                u[static_cast<std::size_t>(i)] =
                    detail::sample_dist(scm.equation(i).noise.dist, rng);
            }
            std::vector<double> vars;
            try {
                vars = forward_eval_indexed(scm, u);
            } catch (const EngineError&) {
                continue;  // counts as a rejected proposal
            }
            bool ok = true;
            for (std::size_t j = 0; j < observed.size(); ++j) {
                const double v = vars[static_cast<std::size_t>(observed[j].first)];
                const double z = observed[j].second;
                if (window[j] == 0.0 ? (v != z) : (std::abs(v - z) > window[j])) {
                    ok = false;
                    break;
                }
            }
            if (ok) hits.push_back({base + k, std::move(u)});
        }
        return hits;
    };

    // Fixed-size rounds split across worker substreams keep the accepted
    // set a pure function of (seed, workers) while still stopping early.
    std::vector<Hit> accepted;
    std::int64_t proposed = 0;
    std::int64_t round = 0;
    const std::int64_t round_size =
        std::max<std::int64_t>(static_cast<std::int64_t>(workers),
                               std::min<std::int64_t>(budget, std::max<std::int64_t>(
                                                                  8192, 2 * options.n_target)));
    while (proposed < budget &&
           static_cast<std::int64_t>(accepted.size()) < options.n_target) {
        const std::int64_t this_round = std::min(round_size, budget - proposed);
        std::vector<std::future<std::vector<Hit>>> futures;
        for (int j = 0; j < workers; ++j) {
            const std::int64_t lo = j * this_round / workers;
            const std::int64_t hi = (j + 1) * this_round / workers;
            if (hi == lo) continue;
            const std::uint64_t stream =
                1 + static_cast<std::uint64_t>(round) * static_cast<std::uint64_t>(workers) +
                static_cast<std::uint64_t>(j);
            futures.push_back(std::async(workers == 1 ? std::launch::deferred
                                                      : std::launch::async,
                                         run_shard, stream, proposed + lo, hi - lo));
        }
        for (auto& f : futures) {
            auto hits = f.get();
            accepted.insert(accepted.end(), std::make_move_iterator(hits.begin()),
                            std::make_move_iterator(hits.end()));
        }
        proposed += this_round;
        ++round;
    }
    std::sort(accepted.begin(), accepted.end(),
              [](const Hit& a, const Hit& b) { return a.global < b.global; });

    PosteriorAbduction out;
    out.diagnostics.n_proposed = proposed;
    out.diagnostics.acceptance_rate =
        proposed > 0 ? static_cast<double>(accepted.size()) / static_cast<double>(proposed)
                     : 0.0;
    out.diagnostics.budget_exhausted =
        static_cast<std::int64_t>(accepted.size()) < options.n_target;
    const std::size_t keep =
        std::min<std::size_t>(accepted.size(), static_cast<std::size_t>(options.n_target));
    for (std::size_t k = 0; k < keep; ++k) {
        out.samples.push_back(noise_draw_from_indexed(scm, accepted[k].u));
        out.weights.push_back(1.0);
    }
    out.diagnostics.ess = static_cast<double>(out.samples.size());
    return out;
}

namespace {

// Integrated autocorrelation time by summing consecutive positive pairs of
// autocorrelations; series shorter than 4 or constant count at face value.
double geyer_ess(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n < 4) return static_cast<double>(n);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    auto autocov = [&](std::size_t t) {
        double s = 0.0;
        for (std::size_t k = 0; k + t < n; ++k) s += (x[k] - mean) * (x[k + t] - mean);
        return s / static_cast<double>(n);
    };
    const double g0 = autocov(0);
    if (!(g0 > 0.0)) return static_cast<double>(n);
    double pair_sum = 0.0;
    for (std::size_t t = 1; t + 1 < n; t += 2) {
        const double gamma = (autocov(t) + autocov(t + 1)) / g0;
        if (gamma <= 0.0) break;
        pair_sum += gamma;
    }
    const double tau = std::max(1.0, 1.0 + 2.0 * pair_sum);
    return static_cast<double>(n) / tau;
}

}  // namespace

PosteriorAbduction abduce_mcmc(const Scm& scm, const Facts& w, const McmcOptions& options) {
    const auto observed = observed_list(scm, w);
    if (options.n_samples <= 0) {
        throw EngineError(ErrorCode::InvalidQuery, "MCMC sample count must be > 0");
    }
    if (options.chains < 1) {
        throw EngineError(ErrorCode::InvalidQuery, "MCMC needs at least one chain");
    }
    if (!(options.proposal_scale > 0.0) || !std::isfinite(options.proposal_scale)) {
        throw EngineError(ErrorCode::InvalidQuery, "MCMC proposal scale must be > 0");
    }
    if (options.kernel_bandwidth && !(*options.kernel_bandwidth > 0.0)) {
        throw EngineError(ErrorCode::BadBandwidth, "kernel bandwidth must be > 0");
    }

    std::vector<int> observed_idx;
    for (const auto& [idx, value] : observed) observed_idx.push_back(idx);
    const std::vector<double> bandwidth =
        calibrate_windows(scm, observed_idx, options.kernel_bandwidth, options.seed);
    for (std::size_t k = 0; k < bandwidth.size(); ++k) {
        if (!scm.var_finite(observed_idx[k]) && !(bandwidth[k] > 0.0)) {
            throw EngineError(ErrorCode::BadBandwidth,
                              "calibrated bandwidth for '" +
                                  scm.equation(observed_idx[k]).var +
                                  "' is zero; pass an explicit kernel bandwidth");
        }
    }

    // Coordinate roles. Walkers move continuous coordinates; finite-support
    // coordinates are freshly drawn from their prior, so their prior mass
    // cancels out of the acceptance ratio.
    struct Coord {
        int idx;
        bool finite;
        double sd;  // continuous only
    };
    std::vector<Coord> moving;
    for (int i = 0; i < scm.size(); ++i) {
        const NoiseDistribution& dist = scm.equation(i).noise.dist;
        if (std::holds_alternative<PointDist>(dist)) continue;
        if (!scm.equation(i).noise_referenced) continue;
        moving.push_back({i, finite_support(dist), prior_sd(dist)});
    }

    // Log target, omitting finite-coordinate prior mass (cancelled by the
    // prior-resample proposal) and all additive constants.
    auto log_target = [&](const std::vector<double>& u) {
        double lt = 0.0;
        for (int i = 0; i < scm.size(); ++i) {
            const NoiseDistribution& dist = scm.equation(i).noise.dist;
            const double v = u[static_cast<std::size_t>(i)];
            if (const auto* nd = std::get_if<NormalDist>(&dist)) {
                const double z = (v - nd->mean) / nd->stddev;
                lt += -0.5 * z * z;
            } else if (const auto* ud = std::get_if<UniformDist>(&dist)) {
                if (v < ud->lo || v > ud->hi) return -kInf;
            }
        }
        std::vector<double> vars;
        try {
            vars = forward_eval_indexed(scm, u);
        } catch (const EngineError&) {
            return -kInf;
        }
        for (std::size_t k = 0; k < observed.size(); ++k) {
            const double v = vars[static_cast<std::size_t>(observed[k].first)];
            const double z = observed[k].second;
            if (bandwidth[k] == 0.0) {
                if (v != z) return -kInf;
            } else {
                const double r = (v - z) / bandwidth[k];
                lt += -0.5 * r * r;
            }
        }
        return lt;
    };

    const std::int64_t per_chain_base = options.n_samples / options.chains;
    const std::int64_t extra = options.n_samples % options.chains;

    std::vector<std::vector<std::vector<double>>> chains;  // chain -> samples (indexed u)
    std::int64_t total_accepted = 0;
    std::int64_t total_proposed = 0;

    for (int chain = 0; chain < options.chains; ++chain) {
        const std::int64_t keep = per_chain_base + (chain < extra ? 1 : 0);
        if (keep == 0) {
            chains.emplace_back();
            continue;
        }
        const std::int64_t burnin =
            options.n_burnin >= 0 ? options.n_burnin : (keep + 9) / 10;
        Rng rng(split_seed(options.seed, kMcmcStreamBase + static_cast<std::uint64_t>(chain)));

        // Initial state: prior draws until the hard constraints hold.
        std::vector<double> u;
        double lt = -kInf;
        for (int attempt = 0; attempt < 10'000 && !(lt > -kInf); ++attempt) {
            std::vector<double> cand(static_cast<std::size_t>(scm.size()));
            for (int i = 0; i < scm.size(); ++i) {
                cand[static_cast<std::size_t>(i)] =
                    detail::sample_dist(scm.equation(i).noise.dist, rng);
            }
            const double cand_lt = log_target(cand);
            if (cand_lt > -kInf) {
                u = std::move(cand);
                lt = cand_lt;
            }
        }
        if (!(lt > -kInf)) {
            throw EngineError(ErrorCode::DegenerateChain,
                              "MCMC found no feasible initial state in 10000 prior draws");
        }

        std::vector<std::vector<double>> kept;
        kept.reserve(static_cast<std::size_t>(keep));
        for (std::int64_t step = 0; step < burnin + keep; ++step) {
            std::vector<double> cand = u;
            for (const Coord& c : moving) {
                if (c.finite) {
                    cand[static_cast<std::size_t>(c.idx)] =
                        detail::sample_dist(scm.equation(c.idx).noise.dist, rng);
                } else {
                    cand[static_cast<std::size_t>(c.idx)] +=
                        rng.normal(0.0, options.proposal_scale * c.sd);
                }
            }
            const double cand_lt = log_target(cand);
            ++total_proposed;
            bool accept = false;
            if (cand_lt > -kInf) {
                const double log_ratio = cand_lt - lt;
                accept = log_ratio >= 0.0 || rng.uniform01() < std::exp(log_ratio);
            }
            if (accept) {
                u = std::move(cand);
                lt = cand_lt;
                ++total_accepted;
            }
            if (step >= burnin) kept.push_back(u);
        }
        chains.push_back(std::move(kept));
    }

    const double acceptance =
        total_proposed > 0
            ? static_cast<double>(total_accepted) / static_cast<double>(total_proposed)
            : 0.0;
    if (acceptance < 0.001) {
        throw EngineError(ErrorCode::DegenerateChain,
                          "MCMC acceptance rate " + std::to_string(acceptance) +
                              " is below 0.1%");
    }

    // ESS: per-coordinate Geyer estimate summed over chains, minimum over
    // the coordinates that actually vary.
    double ess = 0.0;
    {
        double min_ess = kInf;
        std::int64_t total = 0;
        for (const auto& c : chains) total += static_cast<std::int64_t>(c.size());
        for (const Coord& c : moving) {
            bool varies = false;
            double coord_ess = 0.0;
            for (const auto& chain : chains) {
                std::vector<double> series;
                series.reserve(chain.size());
                for (const auto& s : chain) {
                    series.push_back(s[static_cast<std::size_t>(c.idx)]);
                }
                for (std::size_t k = 1; k < series.size(); ++k) {
                    varies = varies || series[k] != series[0];
                }
                coord_ess += geyer_ess(series);
            }
            if (varies) min_ess = std::min(min_ess, coord_ess);
        }
        ess = std::isfinite(min_ess) ? min_ess : static_cast<double>(total);
    }

    PosteriorAbduction out;
    for (const auto& chain : chains) {
        for (const auto& u : chain) {
            out.samples.push_back(noise_draw_from_indexed(scm, u));
            out.weights.push_back(1.0);
        }
    }
    out.diagnostics.acceptance_rate = acceptance;
    out.diagnostics.n_proposed = total_proposed;
    out.diagnostics.ess = ess;
    out.diagnostics.budget_exhausted = false;
    return out;
}

}  // namespace scmi

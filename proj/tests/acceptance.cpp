// Acceptance gate: one line per criterion, PASS or FAIL, nonzero exit when
// anything fails. Tolerances are pinned here, next to the checks they gate.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "scmi/abduction.hpp"
#include "scmi/dsl.hpp"
#include "scmi/errors.hpp"
#include "scmi/ici.hpp"
#include "scmi/intervention.hpp"
#include "support/oracle.hpp"
#include "support/run_cli.hpp"

using namespace scmi;

namespace {

// --- pinned tolerances and budgets ---
constexpr double kExactTol = 1e-9;           // deterministic pipeline, round trips
constexpr double kTableTol = 1e-12;          // exact-table comparisons
constexpr double kAssocTv = 0.02;            // association MC vs exact, n = 1e5
constexpr double kRejectionTv = 0.02;        // rejection vs exact posterior, n = 1e4
constexpr double kMcmcVsRejectionTv = 0.05;  // mcmc vs rejection
constexpr double kMcmcSigmas = 3.0;          // linear-Gaussian mean/stddev bound
constexpr double kVarianceRel = 0.05;        // criterion 2 variance bound
constexpr double kPriorVarianceRel = 0.10;   // underdetermination bound
constexpr std::int64_t kMcn = 100'000;
constexpr std::int64_t kRejectionTarget = 10'000;
constexpr std::int64_t kMcmcSamples = 20'000;
constexpr double kMcmcBandwidth = 0.01;

const char* kWorkedModel =
    "noise U_Z ~ Normal(0, 1)\n"
    "noise U_X ~ Normal(0, 1)\n"
    "noise U_Y ~ Normal(0, 1)\n"
    "var Z = U_Z\n"
    "var X = Z + U_X\n"
    "var Y = X + Z + U_Y\n";

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

Scm load(const std::string& text) {
    auto r = load_model(text);
    if (!r.ok()) {
        std::string msg = "model failed to validate:";
        for (const auto& d : r.diagnostics) msg += " " + format_diagnostic(d);
        throw Failure(msg);
    }
    return *std::move(r.scm);
}

std::map<std::vector<double>, double> pmf_as_map(const ExactPmf& pmf) {
    std::map<std::vector<double>, double> out;
    for (std::size_t i = 0; i < pmf.support.size(); ++i) out[pmf.support[i]] = pmf.probs[i];
    return out;
}

std::map<std::vector<double>, double> empirical_as_map(const Empirical& emp) {
    std::map<std::vector<double>, double> out;
    double mass = 0.0;
    for (std::size_t i = 0; i < emp.samples.size(); ++i) {
        out[emp.samples[i]] += emp.weights[i];
        mass += emp.weights[i];
    }
    for (auto& [k, v] : out) v /= mass;
    return out;
}

double point_of(const DistributionResult& res) {
    const auto* pmf = std::get_if<ExactPmf>(&res);
    require(pmf != nullptr, "expected an exact pmf");
    require(pmf->support.size() == 1, "expected a single-point pmf");
    return pmf->support[0][0];
}

// Independent effective-sample-size estimate (initial positive sequence on
// the autocovariances), used to turn chain output into honest error bars.
double chain_ess(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n < 4) return static_cast<double>(n);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    auto gamma = [&](std::size_t lag) {
        double s = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) s += (x[i] - mean) * (x[i + lag] - mean);
        return s / static_cast<double>(n);
    };
    const double g0 = gamma(0);
    if (g0 <= 0.0) return static_cast<double>(n);
    double tau = 1.0;
    for (std::size_t lag = 1; lag + 1 < n; lag += 2) {
        const double pair = gamma(lag) + gamma(lag + 1);
        if (pair <= 0.0) break;
        tau += 2.0 * pair / g0;
    }
    return static_cast<double>(n) / std::max(tau, 1.0);
}

oracle::Model oracle_of(const std::string& text) {
    const auto parsed = parse_model(text);
    require(parsed.ok(), "oracle parse failed");
    return oracle::from_document(parsed.document);
}

// --- criteria ---

// 1. Worked deterministic pipeline: abduction, both interventions, paired
//    effect; everything exact and under a second.
void criterion_worked_example() {
    const Scm scm = load(kWorkedModel);
    const Facts facts{{"X", 1.0}, {"Y", 10.0}, {"Z", 2.0}};

    const auto det = abduce_exact(scm, facts);
    require(std::abs(det.u_star.at("U_Z") - 2.0) <= kExactTol, "U_Z != 2");
    require(std::abs(det.u_star.at("U_X") + 1.0) <= kExactTol, "U_X != -1");
    require(std::abs(det.u_star.at("U_Y") - 7.0) <= kExactTol, "U_Y != 7");

    IndividualQuery q;
    q.facts = facts;
    q.targets = {"Y"};
    q.method = ExactMethod{};
    q.dox = {{"X", 0.0}};
    require(std::abs(point_of(ici_query(scm, q)) - 9.0) <= kExactTol, "Y under do(X=0) != 9");
    q.dox = {{"X", 1.0}};
    require(std::abs(point_of(ici_query(scm, q)) - 10.0) <= kExactTol, "Y under do(X=1) != 10");

    IceRequest r;
    r.facts = facts;
    r.targets = {"Y"};
    r.do1 = {{"X", 1.0}};
    r.do2 = {{"X", 0.0}};
    r.method = ExactMethod{};
    require(std::abs(ice(scm, r).mean_difference[0] - 1.0) <= kExactTol, "ICE != 1");
}

// 2. Monte Carlo intervention moments: Y = Z + U_Y under do(X=0).
void criterion_intervention_moments() {
    const Scm scm = load(kWorkedModel);
    MonteCarloEngine mc;
    mc.n = kMcn;
    mc.seed = 20'240'817;
    const auto res = intervention_query(scm, {"Y"}, {{"X", 0.0}}, {}, mc);
    const auto& emp = std::get<Empirical>(res);
    const double mean = emp.summary[0].mean;
    const double variance = emp.summary[0].variance;
    const double mean_bound = 3.0 * std::sqrt(2.0 / static_cast<double>(kMcn));
    require(std::abs(mean) <= mean_bound,
            "mean " + fmt(mean) + " outside +-" + fmt(mean_bound));
    require(std::abs(variance - 2.0) <= kVarianceRel * 2.0,
            "variance " + fmt(variance) + " outside 2 +- 5%");
}

// 3. Exact association equals brute-force conditioning on 20 generated
//    models; Monte Carlo tracks it in total variation.
void criterion_association_oracle() {
    for (std::uint32_t seed = 1; seed <= 20; ++seed) {
        const auto gen = oracle::random_finite_model(seed);
        const Scm scm = load(gen.text);
        const auto worlds = oracle::enumerate_worlds(oracle_of(gen.text));

        const std::string target = gen.vars.back();
        const std::string cond = gen.vars.front();
        const auto cond_marginal = oracle::conditional(worlds, {cond}, {});
        double best_v = 0.0, best_p = -1.0;
        for (const auto& [key, p] : cond_marginal) {
            if (p > best_p) {
                best_p = p;
                best_v = key[0];
            }
        }

        const oracle::Env evidence{{cond, best_v}};
        const auto expect = oracle::conditional(worlds, {target}, evidence);

        const auto exact =
            association_query(scm, {target}, {{cond, best_v}}, ExactEngine{});
        const auto exact_map = pmf_as_map(std::get<ExactPmf>(exact));
        require(exact_map.size() == expect.size(),
                "model " + std::to_string(seed) + ": support size mismatch");
        for (const auto& [key, p] : expect) {
            const auto it = exact_map.find(key);
            require(it != exact_map.end(),
                    "model " + std::to_string(seed) + ": missing atom");
            require(std::abs(it->second - p) <= kTableTol,
                    "model " + std::to_string(seed) + ": exact prob off by " +
                        fmt(std::abs(it->second - p)));
        }

        MonteCarloEngine mc;
        mc.n = kMcn;
        mc.seed = 7'000 + seed;
        const auto approx = association_query(scm, {target}, {{cond, best_v}}, mc);
        const double tv = oracle::tv_distance(empirical_as_map(std::get<Empirical>(approx)),
                                              expect);
        require(tv <= kAssocTv,
                "model " + std::to_string(seed) + ": MC TV " + fmt(tv) + " > " + fmt(kAssocTv));
    }
}

// 4. Truncated factorization equals enumeration over the mutilated graph,
//    same 20 models, one random intervention each.
void criterion_truncation_surgery() {
    std::mt19937 pick(424242);
    for (std::uint32_t seed = 1; seed <= 20; ++seed) {
        const auto gen = oracle::random_finite_model(seed);
        const Scm scm = load(gen.text);
        const auto supports = variable_supports(scm);
        const std::size_t which = pick() % gen.vars.size();
        const auto& sup = supports[which];
        const double value = sup[pick() % sup.size()];

        const Intervention dox{{gen.vars[which], value}};
        const Factor truncated = truncated_joint(scm, dox);
        const Factor surgical = enumerate_joint(surgery(scm, dox));
        require(factor_equal(truncated, surgical, kTableTol),
                "model " + std::to_string(seed) + ": truncated joint != surgery joint for do(" +
                    gen.vars[which] + "=" + fmt(value) + ")");
    }
}

// 5. Rejection posterior matches exact enumeration; MCMC matches rejection.
//    Candidate models are screened so the n = 1e4 multinomial noise floor
//    sits well below the 0.02 gate: posterior support <= 16 tuples and
//    facts mass >= 0.05, fixed screening order.
void criterion_abduction_posteriors() {
    int used = 0;
    for (std::uint32_t seed = 1001; used < 10; ++seed) {
        require(seed < 1200, "model screening ran out of candidates");
        const auto gen = oracle::random_finite_model(seed);
        const auto model = oracle_of(gen.text);
        const auto worlds = oracle::enumerate_worlds(model);

        const std::string observed = gen.vars.back();
        const auto marginal = oracle::conditional(worlds, {observed}, {});
        double best_v = 0.0, best_p = -1.0;
        for (const auto& [key, p] : marginal) {
            if (p > best_p) {
                best_p = p;
                best_v = key[0];
            }
        }
        const oracle::Env facts{{observed, best_v}};
        if (oracle::evidence_mass(worlds, facts) < 0.05) continue;

        const Scm scm = load(gen.text);
        const auto noise_order = scm.noise_names();
        const auto expect = oracle::noise_posterior(worlds, noise_order, facts);
        if (expect.size() > 16) continue;
        ++used;

        RejectionOptions ropt;
        ropt.n_target = kRejectionTarget;
        ropt.seed = 500 + seed;
        const auto rejection = abduce_rejection(scm, {{observed, best_v}}, ropt);
        require(!rejection.samples.empty(),
                "model " + std::to_string(seed) + ": rejection returned nothing");

        auto as_map = [&](const PosteriorAbduction& post) {
            std::map<std::vector<double>, double> out;
            double mass = 0.0;
            for (std::size_t i = 0; i < post.samples.size(); ++i) {
                std::vector<double> key;
                for (const auto& n : noise_order) key.push_back(post.samples[i].at(n));
                out[key] += post.weights[i];
                mass += post.weights[i];
            }
            for (auto& [k, v] : out) v /= mass;
            return out;
        };

        const auto rej_map = as_map(rejection);
        const double tv_exact = oracle::tv_distance(rej_map, expect);
        require(tv_exact <= kRejectionTv,
                "model " + std::to_string(seed) + ": rejection TV " + fmt(tv_exact) + " > " +
                    fmt(kRejectionTv));

        McmcOptions mopt;
        mopt.n_samples = kRejectionTarget;
        mopt.seed = 900 + seed;
        const auto chain = abduce_mcmc(scm, {{observed, best_v}}, mopt);
        const double tv_chain = oracle::tv_distance(as_map(chain), rej_map);
        require(tv_chain <= kMcmcVsRejectionTv,
                "model " + std::to_string(seed) + ": mcmc-vs-rejection TV " + fmt(tv_chain) +
                    " > " + fmt(kMcmcVsRejectionTv));
    }
}

// 6. Softened-ABC MCMC against the conjugate-Gaussian conditional: observing
//    Y = 2 in the linear model targets N(mu, Sigma) with
//    Sigma = (I + a a^T / h^2)^{-1}, a = (2, 1, 1), mu = Sigma a y / h^2.
void criterion_linear_gaussian_mcmc() {
    const Scm scm = load(kWorkedModel);
    const double y_obs = 2.0;
    const double h = kMcmcBandwidth;
    const std::vector<std::string> coords{"U_Z", "U_X", "U_Y"};
    const std::vector<double> a{2.0, 1.0, 1.0};
    const double denom = h * h + 6.0;  // h^2 + |a|^2

    McmcOptions opt;
    opt.n_samples = kMcmcSamples;
    opt.seed = 31'337;
    opt.kernel_bandwidth = h;
    const auto post = abduce_mcmc(scm, {{"Y", y_obs}}, opt);
    require(post.samples.size() == static_cast<std::size_t>(kMcmcSamples),
            "unexpected sample count");

    for (std::size_t k = 0; k < coords.size(); ++k) {
        const double mu = a[k] * y_obs / denom;
        const double sigma = std::sqrt(1.0 - a[k] * a[k] / denom);

        std::vector<double> series;
        series.reserve(post.samples.size());
        for (const auto& s : post.samples) series.push_back(s.at(coords[k]));
        double mean = 0.0;
        for (double v : series) mean += v;
        mean /= static_cast<double>(series.size());
        double var = 0.0;
        for (double v : series) var += (v - mean) * (v - mean);
        var /= static_cast<double>(series.size());
        const double sd = std::sqrt(var);

        const double ess = std::max(chain_ess(series), 4.0);
        const double se_mean = sd / std::sqrt(ess);
        const double se_sd = sd / std::sqrt(2.0 * ess);
        require(std::abs(mean - mu) <= kMcmcSigmas * se_mean,
                coords[k] + ": mean " + fmt(mean) + " vs " + fmt(mu) + " (se " + fmt(se_mean) +
                    ", ess " + fmt(ess) + ")");
        require(std::abs(sd - sigma) <= kMcmcSigmas * se_sd,
                coords[k] + ": stddev " + fmt(sd) + " vs " + fmt(sigma) + " (se " +
                    fmt(se_sd) + ", ess " + fmt(ess) + ")");
    }
}

// 7. Deterministic abduction inverts forward sampling on invertible models.
void criterion_round_trip() {
    const std::vector<std::string> models{
        kWorkedModel,
        // declared inverse for a multiplicative noise
        "noise U_Z ~ Uniform(1, 2)\n"
        "noise U_X ~ Normal(0, 1)\n"
        "var Z = U_Z\n"
        "var X = Z * U_X\n"
        "inverse U_X = X / Z\n",
        // subtracted noise, synthesized inverse
        "noise U_A ~ Normal(0, 2)\n"
        "noise U_B ~ Uniform(-1, 1)\n"
        "var A = U_A\n"
        "var B = A * A - U_B\n",
        // branching equation with a declared branch-aware inverse
        "noise U_Z ~ Normal(0, 1)\n"
        "noise U_X ~ Normal(0, 1)\n"
        "var Z = U_Z\n"
        "var X = if Z > 0 then U_X + 1 else U_X - 1\n"
        "inverse U_X = if Z > 0 then X - 1 else X + 1\n",
        // longer additive chain
        "noise U_A ~ Normal(1, 1)\n"
        "noise U_B ~ Uniform(0, 1)\n"
        "noise U_C ~ Normal(0, 3)\n"
        "var A = U_A\n"
        "var B = 2 * A + U_B\n"
        "var C = B - A + U_C\n",
    };
    int draws_total = 0;
    for (std::size_t m = 0; m < models.size(); ++m) {
        const Scm scm = load(models[m]);
        const auto draws = sample_noise(scm, 0xabcd00 + m, 20);
        for (const auto& u : draws) {
            ++draws_total;
            const Assignment w = forward_sample(scm, u);
            const auto det = abduce_exact(scm, Facts(w.begin(), w.end()));
            for (const auto& [name, value] : u) {
                require(std::abs(det.u_star.at(name) - value) <= kExactTol,
                        "model " + std::to_string(m) + ": " + name + " drifted by " +
                            fmt(std::abs(det.u_star.at(name) - value)));
            }
        }
    }
    require(draws_total == 100, "expected exactly 100 round-trip draws");
}

// 8. Underdetermination: 48 of 50 noises do not influence the observed pair,
//    so their posterior must keep the prior spread.
void criterion_underdetermination() {
    std::ostringstream text;
    text << "noise U_X ~ Categorical(0, 1, 0.5, 0.5)\n";
    text << "noise U_Y ~ Normal(0, 1)\n";
    std::vector<double> prior_sd(48);
    for (int i = 0; i < 48; ++i) {
        const double sd = (i % 3 == 0) ? 0.5 : (i % 3 == 1) ? 1.0 : 2.0;
        prior_sd[static_cast<std::size_t>(i)] = sd;
        text << "noise U_B" << i << " ~ Normal(0, " << sd << ")\n";
    }
    text << "var X = U_X\n";
    text << "var Y = X + U_Y\n";
    for (int i = 0; i < 48; ++i) text << "var B" << i << " = U_B" << i << "\n";

    const Scm scm = load(text.str());
    RejectionOptions opt;
    opt.n_target = 4000;
    opt.seed = 808;
    const auto post = abduce_rejection(scm, {{"X", 1.0}, {"Y", 0.3}}, opt);
    require(post.samples.size() == 4000, "rejection fell short of its target");

    for (int i = 0; i < 48; ++i) {
        const std::string name = "U_B" + std::to_string(i);
        double s = 0.0, s2 = 0.0;
        for (const auto& u : post.samples) {
            const double v = u.at(name);
            s += v;
            s2 += v * v;
        }
        const double n = static_cast<double>(post.samples.size());
        const double var = s2 / n - (s / n) * (s / n);
        const double prior_var = prior_sd[static_cast<std::size_t>(i)] *
                                 prior_sd[static_cast<std::size_t>(i)];
        require(std::abs(var - prior_var) <= kPriorVarianceRel * prior_var,
                name + ": posterior variance " + fmt(var) + " vs prior " + fmt(prior_var));
    }

    // Sanity: the influencing coordinates did move. Accepted draws satisfy
    // X = 1 exactly and Y within the window, so U_Y sits at y - x = -0.7.
    double sy = 0.0;
    for (const auto& u : post.samples) {
        require(u.at("U_X") == 1.0, "accepted draw violates the finite fact X = 1");
        sy += u.at("U_Y");
    }
    require(std::abs(sy / 4000.0 + 0.7) < 0.05, "U_Y posterior mean is not near y - x");
}

// 9. Byte-identical CLI output across two runs for every subcommand.
void criterion_cli_determinism() {
    const std::string lin = testcli::write_temp_model("acceptance_linear", kWorkedModel);
    const std::vector<std::string> commands{
        "validate " + lin,
        "sample " + lin + " -n 5 --seed 11",
        "sample " + lin + " -n 5 --seed 11 --workers 3",
        "query assoc " + lin + " --target Y --engine mc -n 2000 --seed 11",
        "query do " + lin + " --target Y --do X=0 --engine mc -n 2000 --seed 11",
        "query indiv " + lin + " --target Y --facts X=1,Y=10,Z=2 --do X=0",
        "query indiv " + lin + " --target Y --facts Z=1 --method rejection -n 200 --seed 11",
        "query indiv " + lin + " --target Y --facts Y=1 --method mcmc -n 2000 --seed 11",
        "query indiv " + lin + " --target Y --facts Y=1 --method update --do X=0",
        "ice " + lin + " --target Y --facts Z=1 --do1 X=1 --do2 X=0 --method rejection"
        " -n 200 --seed 11",
    };
    for (const auto& cmd : commands) {
        const auto a = testcli::run(cmd);
        const auto b = testcli::run(cmd);
        require(a.exit_code == 0, "command failed: " + cmd + "\n" + a.out);
        require(a.exit_code == b.exit_code && a.out == b.out,
                "output differs between runs: " + cmd);
    }
}

struct Criterion {
    std::string label;
    double budget_seconds;
    std::function<void()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"1. worked example: exact abduction, do(X=0/1), paired effect", 1.0,
         criterion_worked_example},
        {"2. do(X=0) Monte Carlo moments: mean ~ 0, variance ~ 2", 10.0,
         criterion_intervention_moments},
        {"3. association vs brute-force oracle, exact and Monte Carlo", 0.0,
         criterion_association_oracle},
        {"4. truncated factorization vs surgery enumeration", 0.0,
         criterion_truncation_surgery},
        {"5. rejection vs exact posterior, mcmc vs rejection", 0.0,
         criterion_abduction_posteriors},
        {"6. linear-Gaussian mcmc vs conjugate conditional", 60.0,
         criterion_linear_gaussian_mcmc},
        {"7. abduce_exact inverts forward_sample on 100 draws", 0.0, criterion_round_trip},
        {"8. underdetermined noise coordinates keep their prior variance", 0.0,
         criterion_underdetermination},
        {"9. CLI output is byte-identical across seeded runs", 0.0,
         criterion_cli_determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (error.empty() && c.budget_seconds > 0.0 && elapsed > c.budget_seconds) {
            error = "exceeded time budget: " + fmt(elapsed) + "s > " + fmt(c.budget_seconds) +
                    "s";
        }
        if (error.empty()) {
            std::printf("PASS  %s  (%.2fs)\n", c.label.c_str(), elapsed);
        } else {
            ++failures;
            std::printf("FAIL  %s  (%.2fs): %s\n", c.label.c_str(), elapsed, error.c_str());
        }
        std::fflush(stdout);
    }
    if (failures != 0) {
        std::printf("%d of %zu criteria failed\n", failures, criteria.size());
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}

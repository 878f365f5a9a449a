#include <cmath>
#include <functional>

#include "doctest.h"
#include "scmi/abduction.hpp"
#include "scmi/dsl.hpp"
#include "scmi/errors.hpp"
#include "support/oracle.hpp"

using namespace scmi;

namespace {

const char* kLinearModel =
    "noise U_Z ~ Normal(0, 1)\n"
    "noise U_X ~ Normal(0, 1)\n"
    "noise U_Y ~ Normal(0, 1)\n"
    "var Z = U_Z\n"
    "var X = Z + U_X\n"
    "var Y = X + Z + U_Y\n";

Scm load(const std::string& text) {
    auto r = load_model(text);
    REQUIRE(r.ok());
    return *std::move(r.scm);
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const EngineError& e) {
        return e.code();
    }
    FAIL("expected EngineError");
    return ErrorCode::UnknownVariable;
}

// Weighted posterior over full noise tuples, for TV comparison against the
// oracle's exact posterior.
std::map<std::vector<double>, double> posterior_as_map(const PosteriorAbduction& post,
                                                       const std::vector<std::string>& order) {
    std::map<std::vector<double>, double> out;
    double mass = 0.0;
    for (std::size_t i = 0; i < post.samples.size(); ++i) {
        std::vector<double> key;
        for (const auto& n : order) key.push_back(post.samples[i].at(n));
        out[key] += post.weights[i];
        mass += post.weights[i];
    }
    REQUIRE(mass > 0.0);
    for (auto& [k, v] : out) v /= mass;
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("abduction");

TEST_CASE("exact abduction inverts the linear model") {
    const Scm scm = load(kLinearModel);
    const auto det = abduce_exact(scm, {{"X", 1.0}, {"Y", 10.0}, {"Z", 2.0}});
    CHECK(det.u_star.at("U_Z") == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(det.u_star.at("U_X") == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(det.u_star.at("U_Y") == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("exact abduction round-trips forward sampling") {
    const Scm scm = load(
        "noise U_Z ~ Uniform(1, 2)\n"
        "noise U_X ~ Normal(0, 1)\n"
        "noise U_Y ~ Normal(0, 2)\n"
        "var Z = U_Z\n"
        "var X = Z * U_X\n"
        "var Y = X + 2 * Z - U_Y\n"
        "inverse U_X = X / Z\n");
    const auto draws = sample_noise(scm, 2718, 50);
    for (const auto& u : draws) {
        const Assignment w = forward_sample(scm, u);
        const auto det = abduce_exact(scm, Facts(w.begin(), w.end()));
        for (const auto& [name, value] : u) {
            CHECK(det.u_star.at(name) == doctest::Approx(value).epsilon(1e-9));
        }
    }
}

TEST_CASE("exact abduction demands full observation and invertibility") {
    const Scm scm = load(kLinearModel);
    CHECK(code_of([&] { abduce_exact(scm, {{"X", 1.0}, {"Y", 10.0}}); }) ==
          ErrorCode::PartialObservation);

    const Scm prod = load(
        "noise U_Z ~ Uniform(1, 2)\n"
        "noise U_X ~ Normal(0, 1)\n"
        "var Z = U_Z\n"
        "var X = Z * U_X\n");
    CHECK(code_of([&] { abduce_exact(prod, {{"Z", 1.5}, {"X", 3.0}}); }) ==
          ErrorCode::NotInvertible);
}

TEST_CASE("inconsistent facts are detected on noiseless equations") {
    const Scm scm = load(
        "noise U_Z ~ Normal(0, 1)\n"
        "var Z = U_Z\n"
        "var C = Z * 2\n");
    CHECK_NOTHROW(abduce_exact(scm, {{"Z", 1.0}, {"C", 2.0}}));
    CHECK(code_of([&] { abduce_exact(scm, {{"Z", 1.0}, {"C", 5.0}}); }) ==
          ErrorCode::InconsistentFacts);
}

TEST_CASE("update finds the closest feasible noise vector") {
    // Y = U_A + U_B observed at 2 from baseline 0: the unweighted optimum
    // splits the correction evenly, u = (1, 1).
    const Scm scm = load(
        "noise U_A ~ Normal(0, 1)\n"
        "noise U_B ~ Normal(0, 1)\n"
        "var A = U_A\n"
        "var Y = A + U_B\n");
    const NoiseDraw baseline{{"U_A", 0.0}, {"U_B", 0.0}};

    const auto even = abduce_update(scm, {{"Y", 2.0}}, baseline);
    CHECK(even.u_star.at("U_A") == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(even.u_star.at("U_B") == doctest::Approx(1.0).epsilon(1e-3));

    // Weighting U_A four times as costly moves the correction to U_B:
    // minimize 4 a^2 + b^2 subject to a + b = 2 gives (0.4, 1.6).
    UpdateOptions weighted;
    weighted.weights["U_A"] = 4.0;
    const auto skew = abduce_update(scm, {{"Y", 2.0}}, baseline, weighted);
    CHECK(skew.u_star.at("U_A") == doctest::Approx(0.4).epsilon(1e-3));
    CHECK(skew.u_star.at("U_B") == doctest::Approx(1.6).epsilon(1e-3));
}

TEST_CASE("update leaves unconnected coordinates at the baseline") {
    const Scm scm = load(
        "noise U_A ~ Normal(0, 1)\n"
        "noise U_B ~ Normal(0, 1)\n"
        "noise U_C ~ Normal(0, 1)\n"
        "var A = U_A\n"
        "var Y = A + U_B\n"
        "var Lone = U_C\n");
    const NoiseDraw baseline{{"U_A", 0.25}, {"U_B", -0.5}, {"U_C", 3.25}};
    const auto det = abduce_update(scm, {{"Y", 2.0}}, baseline);
    CHECK(det.u_star.at("U_C") == 3.25);

    // A baseline that already satisfies the facts is returned unchanged.
    const auto noop = abduce_update(scm, {{"Y", -0.25}}, baseline);
    CHECK(noop.u_star.at("U_A") == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(noop.u_star.at("U_B") == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("update handles finite coordinates by discrete search") {
    const Scm scm = load(
        "noise U_A ~ Categorical(0, 1, 0.5, 0.5)\n"
        "noise U_B ~ Normal(0, 1)\n"
        "var A = U_A\n"
        "var Y = 10 * A + U_B\n");
    // Y = 9.5 forces A = 1 (otherwise U_B alone must cover 9.5, which costs
    // more than flipping A and paying 0.5).
    const auto det = abduce_update(scm, {{"Y", 9.5}}, {{"U_A", 0.0}, {"U_B", 0.0}});
    CHECK(det.u_star.at("U_A") == 1.0);
    CHECK(det.u_star.at("U_B") == doctest::Approx(-0.5).epsilon(1e-3));
}

TEST_CASE("update reports infeasible targets") {
    const Scm scm = load(
        "noise U_A ~ Categorical(0, 1, 0.5, 0.5)\n"
        "var A = U_A\n");
    CHECK(code_of([&] {
              abduce_update(scm, {{"A", 0.5}}, {{"U_A", 0.0}});
          }) == ErrorCode::NoFeasiblePoint);
}

TEST_CASE("update validates weights") {
    const Scm scm = load(kLinearModel);
    const NoiseDraw baseline{{"U_Z", 0.0}, {"U_X", 0.0}, {"U_Y", 0.0}};
    UpdateOptions bad;
    bad.weights["U_X"] = 0.0;
    CHECK(code_of([&] { abduce_update(scm, {{"Y", 1.0}}, baseline, bad); }) ==
          ErrorCode::InvalidQuery);
}

TEST_CASE("rejection posterior matches the oracle on finite models") {
    const Scm scm = load(
        "noise U_A ~ Categorical(0, 1, 0.5, 0.5)\n"
        "noise U_B ~ Categorical(0, 1, 2, 0.3, 0.4, 0.3)\n"
        "noise U_C ~ Categorical(0, 1, 0.25, 0.75)\n"
        "var A = U_A\n"
        "var B = A + U_B\n"
        "var C = if B > 1 then U_C else 1 - U_C\n");
    const auto parsed = parse_model(
        "noise U_A ~ Categorical(0, 1, 0.5, 0.5)\n"
        "noise U_B ~ Categorical(0, 1, 2, 0.3, 0.4, 0.3)\n"
        "noise U_C ~ Categorical(0, 1, 0.25, 0.75)\n"
        "var A = U_A\n"
        "var B = A + U_B\n"
        "var C = if B > 1 then U_C else 1 - U_C\n");
    REQUIRE(parsed.ok());
    const auto worlds = oracle::enumerate_worlds(oracle::from_document(parsed.document));

    const Facts w{{"B", 1.0}, {"C", 1.0}};
    RejectionOptions opt;
    opt.n_target = 4000;
    opt.seed = 11;
    const auto post = abduce_rejection(scm, w, opt);
    REQUIRE(post.samples.size() == 4000);
    CHECK(post.diagnostics.acceptance_rate > 0.0);
    CHECK_FALSE(post.diagnostics.budget_exhausted);

    const std::vector<std::string> order{"U_A", "U_B", "U_C"};
    const auto expect = oracle::noise_posterior(worlds, order, {{"B", 1.0}, {"C", 1.0}});
    CHECK(oracle::tv_distance(posterior_as_map(post, order), expect) < 0.03);
}

TEST_CASE("rejection matches the conjugate posterior on a gaussian pair") {
    // X = U_A, Y = X + U_B with unit normals, observed Y = 2. Posterior of
    // U_A is N(1, 1/2); the acceptance window widens it by O(window^2).
    const Scm scm = load(
        "noise U_A ~ Normal(0, 1)\n"
        "noise U_B ~ Normal(0, 1)\n"
        "var X = U_A\n"
        "var Y = X + U_B\n");
    RejectionOptions opt;
    opt.n_target = 4000;
    opt.seed = 21;
    const auto post = abduce_rejection(scm, {{"Y", 2.0}}, opt);
    REQUIRE(post.samples.size() == 4000);
    double s = 0, s2 = 0;
    for (const auto& u : post.samples) {
        s += u.at("U_A");
        s2 += u.at("U_A") * u.at("U_A");
    }
    const double mean = s / 4000, var = s2 / 4000 - mean * mean;
    CHECK(mean == doctest::Approx(1.0).epsilon(0.05));
    CHECK(var == doctest::Approx(0.5).epsilon(0.10));
}

TEST_CASE("rejection respects an explicit tolerance") {
    const Scm scm = load(
        "noise U_A ~ Normal(0, 1)\n"
        "var X = U_A\n");
    RejectionOptions opt;
    opt.n_target = 500;
    opt.seed = 3;
    opt.tolerance = 0.25;
    const auto post = abduce_rejection(scm, {{"X", 1.0}}, opt);
    for (const auto& u : post.samples) CHECK(std::abs(u.at("U_A") - 1.0) <= 0.25);

    RejectionOptions bad = opt;
    bad.tolerance = -1.0;
    CHECK(code_of([&] { abduce_rejection(scm, {{"X", 1.0}}, bad); }) ==
          ErrorCode::InvalidQuery);
}

TEST_CASE("rejection exhausts its budget honestly") {
    const Scm scm = load(
        "noise U_A ~ Categorical(0, 1, 0.5, 0.5)\n"
        "var A = U_A\n");
    RejectionOptions opt;
    opt.n_target = 100;
    opt.seed = 5;
    opt.max_proposals = 5000;
    const auto post = abduce_rejection(scm, {{"A", 7.0}}, opt);
    CHECK(post.samples.empty());
    CHECK(post.diagnostics.budget_exhausted);
    CHECK(post.diagnostics.n_proposed == 5000);
    CHECK(post.diagnostics.acceptance_rate == 0.0);
}

TEST_CASE("rejection output is a function of seed and workers") {
    const Scm scm = load(kLinearModel);
    const Facts w{{"Y", 1.0}};
    RejectionOptions opt;
    opt.n_target = 300;
    opt.seed = 77;

    const auto a = abduce_rejection(scm, w, opt);
    const auto b = abduce_rejection(scm, w, opt);
    CHECK(a.samples == b.samples);
    CHECK(a.diagnostics.n_proposed == b.diagnostics.n_proposed);

    opt.workers = 4;
    const auto c = abduce_rejection(scm, w, opt);
    const auto d = abduce_rejection(scm, w, opt);
    CHECK(c.samples == d.samples);
    REQUIRE(c.samples.size() == 300);
}

TEST_CASE("mcmc matches the oracle posterior on a finite model") {
    // Finite coordinates are proposed from their prior, so the chain is an
    // independence sampler here.
    const Scm scm = load(
        "noise U_A ~ Categorical(0, 1, 0.5, 0.5)\n"
        "noise U_B ~ Categorical(0, 1, 0.25, 0.75)\n"
        "var A = U_A\n"
        "var B = A + U_B\n");
    const auto parsed = parse_model(
        "noise U_A ~ Categorical(0, 1, 0.5, 0.5)\n"
        "noise U_B ~ Categorical(0, 1, 0.25, 0.75)\n"
        "var A = U_A\n"
        "var B = A + U_B\n");
    const auto worlds = oracle::enumerate_worlds(oracle::from_document(parsed.document));

    McmcOptions opt;
    opt.n_samples = 20'000;
    opt.seed = 6;
    const auto post = abduce_mcmc(scm, {{"B", 1.0}}, opt);
    REQUIRE(post.samples.size() == 20'000);
    CHECK(post.diagnostics.ess > 100.0);

    const std::vector<std::string> order{"U_A", "U_B"};
    const auto expect = oracle::noise_posterior(worlds, order, {{"B", 1.0}});
    CHECK(oracle::tv_distance(posterior_as_map(post, order), expect) < 0.03);
}

TEST_CASE("mcmc approximates the softened gaussian posterior") {
    // Observed Y = X + U_B at 2 with kernel bandwidth h: the U_A posterior
    // is N(2 s, s) with s = 1/(2 + h^2) ~ 1/2 for small h.
    const Scm scm = load(
        "noise U_A ~ Normal(0, 1)\n"
        "noise U_B ~ Normal(0, 1)\n"
        "var X = U_A\n"
        "var Y = X + U_B\n");
    McmcOptions opt;
    opt.n_samples = 20'000;
    opt.seed = 8;
    opt.kernel_bandwidth = 0.05;
    const auto post = abduce_mcmc(scm, {{"Y", 2.0}}, opt);
    REQUIRE(post.samples.size() == 20'000);

    double s = 0, s2 = 0;
    for (const auto& u : post.samples) {
        s += u.at("U_A");
        s2 += u.at("U_A") * u.at("U_A");
    }
    const double mean = s / 20'000, var = s2 / 20'000 - mean * mean;
    const double shrink = 1.0 / (2.0 + 0.05 * 0.05);
    const double se = std::sqrt(var / post.diagnostics.ess);
    CHECK(std::abs(mean - 2.0 * shrink) < 5.0 * se);
    CHECK(var == doctest::Approx(shrink).epsilon(0.2));
    CHECK(post.diagnostics.acceptance_rate > 0.01);
}

TEST_CASE("mcmc rejects bad bandwidths and degenerate chains") {
    const Scm scm = load(
        "noise U_A ~ Normal(0, 1)\n"
        "var X = U_A\n");
    McmcOptions bad;
    bad.kernel_bandwidth = 0.0;
    CHECK(code_of([&] { abduce_mcmc(scm, {{"X", 1.0}}, bad); }) == ErrorCode::BadBandwidth);

    // A finite observation with vanishing prior mass starves the sampler:
    // acceptance collapses below the degeneracy threshold.
    const Scm rare = load(
        "noise U_A ~ Categorical(0, 1, 0.9995, 0.0005)\n"
        "var A = U_A\n");
    McmcOptions opt;
    opt.n_samples = 4000;
    opt.seed = 2;
    CHECK(code_of([&] { abduce_mcmc(rare, {{"A", 1.0}}, opt); }) ==
          ErrorCode::DegenerateChain);
}

TEST_CASE("mcmc chains split the sample budget deterministically") {
    const Scm scm = load(
        "noise U_A ~ Normal(0, 1)\n"
        "noise U_B ~ Normal(0, 1)\n"
        "var X = U_A\n"
        "var Y = X + U_B\n");
    McmcOptions opt;
    opt.n_samples = 1001;
    opt.seed = 14;
    opt.chains = 3;
    const auto a = abduce_mcmc(scm, {{"Y", 0.5}}, opt);
    const auto b = abduce_mcmc(scm, {{"Y", 0.5}}, opt);
    REQUIRE(a.samples.size() == 1001);
    CHECK(a.samples == b.samples);
    CHECK(a.diagnostics.ess == b.diagnostics.ess);
}

TEST_CASE("calibrated windows scale with the prior-predictive spread") {
    const Scm scm = load(
        "noise U_A ~ Normal(0, 1)\n"
        "noise U_B ~ Normal(0, 5)\n"
        "noise U_C ~ Categorical(0, 1, 0.5, 0.5)\n"
        "var A = U_A\n"
        "var B = U_B\n"
        "var C = U_C\n");
    const std::vector<int> idx{scm.index_of("A"), scm.index_of("B"), scm.index_of("C")};
    const auto windows = calibrate_windows(scm, idx, std::nullopt, 99);
    CHECK(windows[0] == doctest::Approx(0.01).epsilon(0.10));
    CHECK(windows[1] == doctest::Approx(0.05).epsilon(0.10));
    CHECK(windows[2] == 0.0);  // finite support: exact match
    const auto fixed = calibrate_windows(scm, idx, 0.5, 99);
    CHECK(fixed[0] == 0.5);
    CHECK(fixed[1] == 0.5);
    CHECK(fixed[2] == 0.0);
}

TEST_SUITE_END();

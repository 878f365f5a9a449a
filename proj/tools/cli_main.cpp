// scmi: declare a structural causal model, then query it at the three rungs
// (association, intervention, individual) or sample from it.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "scmi/dsl.hpp"
#include "scmi/errors.hpp"
#include "scmi/ici.hpp"

using json = nlohmann::ordered_json;
using namespace scmi;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_model_text(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double parse_value(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError("cannot parse " + what + " value '" + text + "'");
    }
}

// NAME=VALUE[,NAME=VALUE]* with plain decimal values.
Assignment parse_bindings(const std::string& text, const std::string& what) {
    Assignment out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw UsageError("expected NAME=VALUE in " + what + ", got '" + item + "'");
        }
        const std::string name = item.substr(0, eq);
        if (out.count(name)) throw UsageError("duplicate name '" + name + "' in " + what);
        out[name] = parse_value(item.substr(eq + 1), what);
    }
    if (out.empty()) throw UsageError(what + " must not be empty");
    return out;
}

std::set<std::string> parse_names(const std::vector<std::string>& items) {
    std::set<std::string> out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string name;
        while (std::getline(ss, name, ',')) {
            if (!name.empty()) out.insert(name);
        }
    }
    if (out.empty()) throw UsageError("at least one --target is required");
    return out;
}

json diagnostics_to_json(const DiagnosticList& diags) {
    json arr = json::array();
    for (const auto& d : diags) {
        json item;
        item["code"] = diag_code_name(d.code);
        item["message"] = d.message;
        if (d.span.known()) {
            item["line"] = d.span.line;
            item["column"] = d.span.column;
        }
        arr.push_back(std::move(item));
    }
    return arr;
}

json assignment_to_json(const Assignment& a) {
    json out = json::object();
    for (const auto& [k, v] : a) out[k] = v;
    return out;
}

struct Output {
    std::string format = "json";
    bool emit_samples = false;

    void print(const json& doc) const { std::cout << doc.dump(2) << "\n"; }
};

json summary_to_json(const SummaryStats& s) {
    json out;
    out["mean"] = s.mean;
    out["stddev"] = s.stddev;
    out["variance"] = s.variance;
    out["q05"] = s.q05;
    out["q25"] = s.q25;
    out["q50"] = s.q50;
    out["q75"] = s.q75;
    out["q95"] = s.q95;
    return out;
}

json result_to_json(const DistributionResult& result, bool emit_samples) {
    json out;
    if (const auto* pmf = std::get_if<ExactPmf>(&result)) {
        if (pmf->support.size() == 1) {
            out["kind"] = "point";
            json value = json::object();
            for (std::size_t t = 0; t < pmf->targets.size(); ++t) {
                value[pmf->targets[t]] = pmf->support[0][t];
            }
            out["value"] = std::move(value);
            return out;
        }
        out["kind"] = "pmf";
        out["targets"] = pmf->targets;
        out["support"] = pmf->support;
        out["probs"] = pmf->probs;
        return out;
    }
    const auto& emp = std::get<Empirical>(result);
    out["kind"] = "empirical";
    out["targets"] = emp.targets;
    out["n"] = emp.samples.size();
    json summary = json::object();
    for (std::size_t t = 0; t < emp.targets.size(); ++t) {
        summary[emp.targets[t]] = summary_to_json(emp.summary[t]);
    }
    out["summary"] = std::move(summary);
    if (emit_samples) {
        out["samples"] = emp.samples;
        out["weights"] = emp.weights;
    }
    return out;
}

void print_result_text(const DistributionResult& result) {
    if (const auto* pmf = std::get_if<ExactPmf>(&result)) {
        for (std::size_t i = 0; i < pmf->support.size(); ++i) {
            std::string row;
            for (std::size_t t = 0; t < pmf->targets.size(); ++t) {
                row += (t ? " " : "") + pmf->targets[t] + "=" +
                       format_number(pmf->support[i][t]);
            }
            std::cout << row << "  p=" << format_number(pmf->probs[i]) << "\n";
        }
        return;
    }
    const auto& emp = std::get<Empirical>(result);
    for (std::size_t t = 0; t < emp.targets.size(); ++t) {
        const SummaryStats& s = emp.summary[t];
        std::cout << emp.targets[t] << ": n=" << emp.samples.size()
                  << " mean=" << format_number(s.mean) << " stddev=" << format_number(s.stddev)
                  << " q05=" << format_number(s.q05) << " q50=" << format_number(s.q50)
                  << " q95=" << format_number(s.q95) << "\n";
    }
}

// Shared knobs for the stochastic paths.
struct EngineFlags {
    std::string engine = "auto";
    std::int64_t n = -1;
    std::uint64_t seed = 0;
    int workers = 0;  // 0: unset, fall back to SCM_ICI_WORKERS or 1
    double window = 1e-3;
    std::optional<double> eps;
    std::optional<double> bandwidth;
    std::int64_t burnin = -1;
    int chains = 1;
    double proposal_scale = 0.5;
    std::string method = "exact";

    int resolved_workers() const {
        if (workers > 0) return workers;
        if (const char* env = std::getenv("SCM_ICI_WORKERS")) {
            const int w = std::atoi(env);
            if (w > 0) return w;
        }
        return 1;
    }
};

std::int64_t exact_state_count(const Scm& scm, std::int64_t cap) {
    std::int64_t states = 1;
    for (int i = 0; i < scm.size(); ++i) {
        if (!finite_support(scm.equation(i).noise.dist)) return -1;
        states *= static_cast<std::int64_t>(support_atoms(scm.equation(i).noise.dist).size());
        if (states > cap) return -1;
    }
    return states;
}

// auto: exact when enumerable under the cap, else Monte Carlo.
Engine choose_engine(const Scm& scm, const EngineFlags& flags, std::string& chosen) {
    const InferenceLimits limits;
    const bool enumerable = exact_state_count(scm, limits.max_joint_states) >= 0;
    std::string want = flags.engine;
    if (want == "auto") want = enumerable ? "exact" : "mc";
    chosen = want;
    if (want == "exact") return ExactEngine{};
    MonteCarloEngine mc;
    mc.n = flags.n > 0 ? flags.n : 10'000;
    mc.seed = flags.seed;
    mc.workers = flags.resolved_workers();
    mc.evidence_window = flags.window;
    return mc;
}

AbductionMethod choose_method(const EngineFlags& flags) {
    if (flags.method == "exact") return ExactMethod{};
    if (flags.method == "update") return UpdateMethod{};
    if (flags.method == "rejection") {
        RejectionMethod m;
        if (flags.n > 0) m.options.n_target = flags.n;
        m.options.tolerance = flags.eps;
        m.options.workers = flags.resolved_workers();
        return m;
    }
    if (flags.method == "mcmc") {
        McmcMethod m;
        if (flags.n > 0) m.options.n_samples = flags.n;
        m.options.n_burnin = flags.burnin;
        m.options.kernel_bandwidth = flags.bandwidth;
        m.options.chains = flags.chains;
        m.options.proposal_scale = flags.proposal_scale;
        return m;
    }
    throw UsageError("unknown method '" + flags.method +
                     "' (expected exact, update, rejection or mcmc)");
}

json abduction_diagnostics(const AbductionResult& abduced, const std::string& method) {
    json out;
    out["method"] = method;
    if (const auto* det = std::get_if<DeterministicAbduction>(&abduced)) {
        json u = json::object();
        for (const auto& [name, value] : det->u_star) u[name] = value;
        out["u_star"] = std::move(u);
        return out;
    }
    const auto& post = std::get<PosteriorAbduction>(abduced);
    out["acceptance_rate"] = post.diagnostics.acceptance_rate;
    out["n_proposed"] = post.diagnostics.n_proposed;
    out["ess"] = post.diagnostics.ess;
    out["budget_exhausted"] = post.diagnostics.budget_exhausted;
    json coords = json::object();
    if (!post.samples.empty()) {
        for (const auto& [name, first] : post.samples.front()) {
            (void)first;
            std::vector<double> series;
            series.reserve(post.samples.size());
            for (const auto& s : post.samples) series.push_back(s.at(name));
            const SummaryStats stats = summarize(series, post.weights);
            json c;
            c["mean"] = stats.mean;
            c["stddev"] = stats.stddev;
            coords[name] = std::move(c);
        }
    }
    out["posterior"] = std::move(coords);
    return out;
}

Scm load_or_fail(const std::string& path, const Output& output) {
    const std::string text = read_model_text(path);
    ValidationResult loaded = load_model(text);
    if (loaded.ok()) return std::move(*loaded.scm);
    if (output.format == "json") {
        json doc;
        doc["error"] = {{"code", diag_code_name(loaded.diagnostics.front().code)},
                        {"message", loaded.diagnostics.front().message}};
        doc["diagnostics"] = diagnostics_to_json(loaded.diagnostics);
        doc["version"] = kDslVersion;
        output.print(doc);
    } else {
        for (const auto& d : loaded.diagnostics) std::cout << format_diagnostic(d) << "\n";
    }
    std::exit(1);
}

int run_validate(const std::string& path, const Output& output) {
    const std::string text = read_model_text(path);
    ValidationResult loaded = load_model(text);
    if (output.format == "json") {
        json doc;
        if (loaded.ok()) {
            doc["ok"] = true;
            doc["variables"] = loaded.scm->variable_names();
            doc["noises"] = loaded.scm->noise_names();
            doc["finite_support"] = loaded.scm->finite_support();
        } else {
            doc["ok"] = false;
            doc["error"] = {{"code", diag_code_name(loaded.diagnostics.front().code)},
                            {"message", loaded.diagnostics.front().message}};
            doc["diagnostics"] = diagnostics_to_json(loaded.diagnostics);
        }
        doc["version"] = kDslVersion;
        output.print(doc);
    } else {
        if (loaded.ok()) {
            std::cout << "ok\n";
        } else {
            for (const auto& d : loaded.diagnostics) std::cout << format_diagnostic(d) << "\n";
        }
    }
    return loaded.ok() ? 0 : 1;
}

int run_sample(const std::string& path, std::int64_t n, const EngineFlags& flags,
               const Output& output) {
    const Scm scm = load_or_fail(path, output);
    const auto draws =
        sample_noise_indexed(scm, flags.seed, n, flags.resolved_workers());
    for (const auto& draw : draws) {
        const std::vector<double> vars = forward_eval_indexed(scm, draw);
        if (output.format == "json") {
            json row = json::object();
            for (int i = 0; i < scm.size(); ++i) {
                row[scm.equation(i).var] = vars[static_cast<std::size_t>(i)];
            }
            std::cout << row.dump() << "\n";
        } else {
            std::string row;
            for (int i = 0; i < scm.size(); ++i) {
                row += (i ? " " : "") + scm.equation(i).var + "=" +
                       format_number(vars[static_cast<std::size_t>(i)]);
            }
            std::cout << row << "\n";
        }
    }
    return 0;
}

json make_query_echo(const std::string& kind, const std::string& path,
                     const std::set<std::string>& targets, const Assignment& evidence,
                     const Assignment& dox, const Assignment& facts,
                     const EngineFlags& flags) {
    json q;
    q["kind"] = kind;
    q["model"] = path;
    q["targets"] = std::vector<std::string>(targets.begin(), targets.end());
    if (!evidence.empty()) q["evidence"] = assignment_to_json(evidence);
    if (!dox.empty()) q["do"] = assignment_to_json(dox);
    if (!facts.empty()) q["facts"] = assignment_to_json(facts);
    if (kind == "indiv" || kind == "ice") q["method"] = flags.method;
    q["seed"] = flags.seed;
    return q;
}

int emit_query_result(const json& echo, const DistributionResult& result,
                      const json& diagnostics, const Output& output) {
    if (output.format == "json") {
        json doc;
        doc["query"] = echo;
        doc["result"] = result_to_json(result, output.emit_samples);
        doc["diagnostics"] = diagnostics;
        doc["version"] = kDslVersion;
        output.print(doc);
    } else {
        print_result_text(result);
    }
    return 0;
}

int run_assoc(const std::string& path, const std::set<std::string>& targets,
              const Assignment& evidence, const EngineFlags& flags, const Output& output) {
    const Scm scm = load_or_fail(path, output);
    std::string chosen;
    const Engine engine = choose_engine(scm, flags, chosen);
    const DistributionResult result = association_query(scm, targets, evidence, engine);
    json diag;
    diag["engine"] = chosen;
    if (chosen == "mc") {
        diag["n"] = std::get<MonteCarloEngine>(engine).n;
        diag["workers"] = std::get<MonteCarloEngine>(engine).workers;
    }
    return emit_query_result(make_query_echo("assoc", path, targets, evidence, {}, {}, flags),
                             result, diag, output);
}

int run_do(const std::string& path, const std::set<std::string>& targets,
           const Assignment& dox, const Assignment& evidence, const EngineFlags& flags,
           const Output& output) {
    const Scm scm = load_or_fail(path, output);
    std::string chosen;
    // The mutilated model decides auto engine choice: pinned variables often
    // make an otherwise unbounded model enumerable.
    const Scm mutilated = surgery(scm, dox);
    const Engine engine = choose_engine(mutilated, flags, chosen);
    const DistributionResult result = association_query(mutilated, targets, evidence, engine);
    json diag;
    diag["engine"] = chosen;
    if (chosen == "mc") {
        diag["n"] = std::get<MonteCarloEngine>(engine).n;
        diag["workers"] = std::get<MonteCarloEngine>(engine).workers;
    }
    return emit_query_result(make_query_echo("do", path, targets, evidence, dox, {}, flags),
                             result, diag, output);
}

int run_indiv(const std::string& path, const std::set<std::string>& targets,
              const Assignment& facts, const Assignment& dox, const Assignment& evidence,
              const EngineFlags& flags, const Output& output) {
    const Scm scm = load_or_fail(path, output);
    IndividualQuery query;
    query.facts = facts;
    query.dox = dox;
    query.targets = targets;
    query.evidence = evidence;
    query.method = choose_method(flags);
    query.seed = flags.seed;
    query.evidence_window = flags.window;

    // Abduce once; the result feeds both the answer and the diagnostics.
    const AbductionResult abduced = indiv(scm, query.facts, query.method, query.seed);
    const DistributionResult result = ici_propagate(scm, abduced, query);

    json diag;
    diag["abduction"] = abduction_diagnostics(abduced, flags.method);
    return emit_query_result(
        make_query_echo("indiv", path, targets, evidence, dox, facts, flags), result, diag,
        output);
}

int run_ice(const std::string& path, const std::set<std::string>& targets,
            const Assignment& facts, const Assignment& do1, const Assignment& do2,
            const EngineFlags& flags, const Output& output) {
    const Scm scm = load_or_fail(path, output);
    IceRequest request;
    request.facts = facts;
    request.targets = targets;
    request.do1 = do1;
    request.do2 = do2;
    request.method = choose_method(flags);
    request.seed = flags.seed;
    const AbductionResult abduced = indiv(scm, request.facts, request.method, request.seed);
    const IceResult result = ice_from(scm, abduced, request);

    json echo = make_query_echo("ice", path, targets, {}, {}, facts, flags);
    echo["do1"] = assignment_to_json(do1);
    echo["do2"] = assignment_to_json(do2);

    if (output.format == "json") {
        json doc;
        doc["query"] = echo;
        json res = result_to_json(result.differences, output.emit_samples);
        json mean = json::object();
        for (std::size_t t = 0; t < result.targets.size(); ++t) {
            mean[result.targets[t]] = result.mean_difference[t];
        }
        res["mean_difference"] = std::move(mean);
        doc["result"] = std::move(res);
        json diag;
        diag["abduction"] = abduction_diagnostics(abduced, flags.method);
        doc["diagnostics"] = std::move(diag);
        doc["version"] = kDslVersion;
        output.print(doc);
    } else {
        for (std::size_t t = 0; t < result.targets.size(); ++t) {
            std::cout << "ICE[" << result.targets[t]
                      << "] = " << format_number(result.mean_difference[t]) << "\n";
        }
    }
    return 0;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"structural causal model inference"};
    app.require_subcommand(1);

    Output output;
    app.add_option("--format", output.format, "json or text")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    app.add_flag("--emit-samples", output.emit_samples,
                 "include raw samples in empirical JSON results");

    std::string model_path;
    std::vector<std::string> target_args;
    std::string evidence_arg, do_arg, do1_arg, do2_arg, facts_arg;
    EngineFlags flags;
    std::int64_t sample_n = 10;

    auto add_model = [&](CLI::App* cmd) {
        cmd->add_option("model", model_path, "model file, or - for stdin")->required();
    };
    auto add_engine_flags = [&](CLI::App* cmd, bool with_engine) {
        if (with_engine) {
            cmd->add_option("--engine", flags.engine, "exact, mc or auto")
                ->check(CLI::IsMember({"auto", "exact", "mc"}));
        }
        cmd->add_option("-n,--n", flags.n, "sample count for stochastic paths");
        cmd->add_option("--seed", flags.seed, "random seed (default 0)");
        cmd->add_option("--workers", flags.workers,
                        "worker shards (default 1 or SCM_ICI_WORKERS)");
        cmd->add_option("--window", flags.window,
                        "evidence window for continuous coordinates");
    };
    auto add_method_flags = [&](CLI::App* cmd) {
        cmd->add_option("--method", flags.method, "exact, update, rejection or mcmc")
            ->check(CLI::IsMember({"exact", "update", "rejection", "mcmc"}));
        cmd->add_option("--eps", [&flags](const std::vector<std::string>& vals) {
                flags.eps = parse_value(vals.front(), "--eps");
                return true;
            },
            "rejection acceptance window override");
        cmd->add_option("--bandwidth", [&flags](const std::vector<std::string>& vals) {
                flags.bandwidth = parse_value(vals.front(), "--bandwidth");
                return true;
            },
            "MCMC kernel bandwidth override");
        cmd->add_option("--burnin", flags.burnin, "MCMC burn-in (default 10%)");
        cmd->add_option("--chains", flags.chains, "MCMC chain count");
        cmd->add_option("--proposal-scale", flags.proposal_scale,
                        "MCMC random-walk scale in prior stddevs");
    };

    // Global flags may trail the subcommand; unmatched options climb back up.
    CLI::App* validate_cmd = app.add_subcommand("validate", "check a model file");
    validate_cmd->fallthrough();
    add_model(validate_cmd);

    CLI::App* sample_cmd = app.add_subcommand("sample", "forward-sample all variables");
    sample_cmd->fallthrough();
    add_model(sample_cmd);
    sample_cmd->add_option("-n,--n", sample_n, "number of draws")->capture_default_str();
    sample_cmd->add_option("--seed", flags.seed, "random seed (default 0)");
    sample_cmd->add_option("--workers", flags.workers,
                           "worker shards (default 1 or SCM_ICI_WORKERS)");

    CLI::App* query_cmd = app.add_subcommand("query", "evaluate a probability query");
    query_cmd->fallthrough();
    query_cmd->require_subcommand(1);

    CLI::App* assoc_cmd = query_cmd->add_subcommand("assoc", "P(targets | evidence)");
    assoc_cmd->fallthrough();
    add_model(assoc_cmd);
    assoc_cmd->add_option("--target", target_args, "target variable (repeat or comma list)")
        ->required();
    assoc_cmd->add_option("--evidence", evidence_arg, "NAME=VALUE[,...]");
    add_engine_flags(assoc_cmd, true);

    CLI::App* do_cmd = query_cmd->add_subcommand("do", "P(targets | do(...), evidence)");
    do_cmd->fallthrough();
    add_model(do_cmd);
    do_cmd->add_option("--target", target_args, "target variable (repeat or comma list)")
        ->required();
    do_cmd->add_option("--do", do_arg, "NAME=VALUE[,...]")->required();
    do_cmd->add_option("--evidence", evidence_arg, "NAME=VALUE[,...]");
    add_engine_flags(do_cmd, true);

    CLI::App* indiv_cmd =
        query_cmd->add_subcommand("indiv", "P(targets | indiv(facts), do(...), evidence)");
    indiv_cmd->fallthrough();
    add_model(indiv_cmd);
    indiv_cmd->add_option("--target", target_args, "target variable (repeat or comma list)")
        ->required();
    indiv_cmd->add_option("--facts", facts_arg, "NAME=VALUE[,...]")->required();
    indiv_cmd->add_option("--do", do_arg, "NAME=VALUE[,...]");
    indiv_cmd->add_option("--evidence", evidence_arg, "NAME=VALUE[,...]");
    add_engine_flags(indiv_cmd, false);
    add_method_flags(indiv_cmd);

    CLI::App* ice_cmd = app.add_subcommand("ice", "mean difference between two do-arms");
    ice_cmd->fallthrough();
    add_model(ice_cmd);
    ice_cmd->add_option("--target", target_args, "target variable (repeat or comma list)")
        ->required();
    ice_cmd->add_option("--facts", facts_arg, "NAME=VALUE[,...]")->required();
    ice_cmd->add_option("--do1", do1_arg, "NAME=VALUE[,...]")->required();
    ice_cmd->add_option("--do2", do2_arg, "NAME=VALUE[,...]")->required();
    add_engine_flags(ice_cmd, false);
    add_method_flags(ice_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (validate_cmd->parsed()) return run_validate(model_path, output);
        if (sample_cmd->parsed()) return run_sample(model_path, sample_n, flags, output);
        if (assoc_cmd->parsed()) {
            const Assignment evidence =
                evidence_arg.empty() ? Assignment{} : parse_bindings(evidence_arg, "--evidence");
            return run_assoc(model_path, parse_names(target_args), evidence, flags, output);
        }
        if (do_cmd->parsed()) {
            const Assignment evidence =
                evidence_arg.empty() ? Assignment{} : parse_bindings(evidence_arg, "--evidence");
            return run_do(model_path, parse_names(target_args),
                          parse_bindings(do_arg, "--do"), evidence, flags, output);
        }
        if (indiv_cmd->parsed()) {
            const Assignment evidence =
                evidence_arg.empty() ? Assignment{} : parse_bindings(evidence_arg, "--evidence");
            const Assignment dox =
                do_arg.empty() ? Assignment{} : parse_bindings(do_arg, "--do");
            return run_indiv(model_path, parse_names(target_args),
                             parse_bindings(facts_arg, "--facts"), dox, evidence, flags,
                             output);
        }
        if (ice_cmd->parsed()) {
            return run_ice(model_path, parse_names(target_args),
                           parse_bindings(facts_arg, "--facts"),
                           parse_bindings(do1_arg, "--do1"), parse_bindings(do2_arg, "--do2"),
                           flags, output);
        }
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const EngineError& e) {
        if (output.format == "json") {
            json doc;
            doc["error"] = {{"code", error_code_name(e.code())}, {"message", e.what()}};
            doc["version"] = kDslVersion;
            output.print(doc);
        } else {
            std::cout << "error[" << error_code_name(e.code()) << "]: " << e.what() << "\n";
        }
        return 1;
    } catch (const std::exception& e) {
        if (output.format == "json") {
            json doc;
            doc["error"] = {{"code", "io_error"}, {"message", e.what()}};
            doc["version"] = kDslVersion;
            output.print(doc);
        } else {
            std::cout << "error[io_error]: " << e.what() << "\n";
        }
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }

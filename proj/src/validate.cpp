#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "internal.hpp"
#include "scmi/errors.hpp"
#include "scmi/model.hpp"
#include "scmi/rng.hpp"

namespace scmi {

namespace {

constexpr int kInverseProbes = 100;
constexpr double kInverseTolerance = 1e-9;
constexpr std::uint64_t kProbeSeed = 0x5c31c0de5c31c0deULL;

bool valid_identifier(const std::string& name) {
    if (name.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
    for (char c : name) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    }
    return true;
}

void check_distribution(const NoiseSpec& spec, const SourceSpan& span, DiagnosticList& diags) {
    auto bad = [&](const std::string& why) {
        diags.push_back({DiagCode::BadDistributionParams,
                         "noise '" + spec.name + "': " + why, span});
    };
    struct Visitor {
        const std::function<void(const std::string&)>& bad;
        void operator()(const PointDist& d) const {
            if (!std::isfinite(d.value)) bad("Point value must be finite");
        }
        void operator()(const NormalDist& d) const {
            if (!std::isfinite(d.mean) || !std::isfinite(d.stddev)) {
                bad("Normal parameters must be finite");
            } else if (d.stddev <= 0.0) {
                bad("Normal stddev must be > 0");
            }
        }
        void operator()(const UniformDist& d) const {
            if (!std::isfinite(d.lo) || !std::isfinite(d.hi)) {
                bad("Uniform bounds must be finite");
            } else if (!(d.lo < d.hi)) {
                bad("Uniform requires lo < hi");
            }
        }
        void operator()(const CategoricalDist& d) const {
            if (d.values.empty() || d.values.size() != d.probs.size()) {
                bad("Categorical needs matching nonempty value and probability lists");
                return;
            }
            double sum = 0.0;
            for (double p : d.probs) {
                if (!std::isfinite(p) || p < 0.0) {
                    bad("Categorical probabilities must be >= 0");
                    return;
                }
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-9) {
                bad("Categorical probabilities must sum to 1 (got " + std::to_string(sum) + ")");
                return;
            }
            for (double v : d.values) {
                if (!std::isfinite(v)) {
                    bad("Categorical values must be finite");
                    return;
                }
            }
            std::set<double> distinct(d.values.begin(), d.values.end());
            if (distinct.size() != d.values.size()) bad("Categorical values must be distinct");
        }
    };
    std::function<void(const std::string&)> bad_fn = bad;
    std::visit(Visitor{bad_fn}, spec.dist);
}

// Splits an expression into signed top-level additive terms.
void flatten_additive(const ExprPtr& e, int sign,
                      std::vector<std::pair<int, ExprPtr>>& terms) {
    if (const auto* b = std::get_if<Binary>(&e->node)) {
        if (b->op == BinaryOp::Add) {
            flatten_additive(b->lhs, sign, terms);
            flatten_additive(b->rhs, sign, terms);
            return;
        }
        if (b->op == BinaryOp::Sub) {
            flatten_additive(b->lhs, sign, terms);
            flatten_additive(b->rhs, -sign, terms);
            return;
        }
    }
    if (const auto* n = std::get_if<Neg>(&e->node)) {
        flatten_additive(n->operand, -sign, terms);
        return;
    }
    terms.emplace_back(sign, e);
}

// Additive-noise detection: when the noise symbol occurs exactly once, as a
// top-level additive term, U = +/-(V - g(Pa)) is synthesized.
ExprPtr synthesize_inverse(const std::string& var, const std::string& noise_name,
                           const ExprPtr& expr) {
    if (count_references(*expr, noise_name) != 1) return nullptr;
    std::vector<std::pair<int, ExprPtr>> terms;
    flatten_additive(expr, 1, terms);

    int noise_sign = 0;
    ExprPtr rest;
    for (const auto& [sign, term] : terms) {
        const auto* ref = std::get_if<Ref>(&term->node);
        if (ref && ref->name == noise_name) {
            noise_sign = sign;
            continue;
        }
        if (count_references(*term, noise_name) > 0) return nullptr;  // buried in a product etc.
        if (!rest) {
            rest = sign > 0 ? term : make_neg(term);
        } else {
            rest = make_binary(sign > 0 ? BinaryOp::Add : BinaryOp::Sub, rest, term);
        }
    }
    if (noise_sign == 0) return nullptr;

    const ExprPtr v = make_ref(var);
    if (noise_sign > 0) {
        return rest ? make_binary(BinaryOp::Sub, v, rest) : v;
    }
    return rest ? make_binary(BinaryOp::Sub, rest, v) : make_neg(v);
}

struct NoiseInfo {
    NoiseSpec spec;
    SourceSpan span;
    std::vector<std::size_t> claimants;  // equation indices referencing it
    int explicit_owner = -1;             // equation index with explicit association
};

// DFS cycle detection over the parent graph; reports each discovered cycle
// once, as the variable path [A, B, A].
void report_cycles(const RawModel& raw, const std::vector<std::vector<int>>& depends,
                   DiagnosticList& diags) {
    const std::size_t n = depends.size();
    std::vector<int> color(n, 0);  // 0 white, 1 gray, 2 black
    std::vector<int> path;

    struct Dfs {
        const RawModel& raw;
        const std::vector<std::vector<int>>& depends;
        DiagnosticList& diags;
        std::vector<int>& color;
        std::vector<int>& path;

        void visit(int v) {
            color[static_cast<std::size_t>(v)] = 1;
            path.push_back(v);
            for (int p : depends[static_cast<std::size_t>(v)]) {
                if (color[static_cast<std::size_t>(p)] == 1) {
                    auto start = std::find(path.begin(), path.end(), p);
                    std::string cycle = "[";
                    for (auto it = start; it != path.end(); ++it) {
                        cycle += raw.equations[static_cast<std::size_t>(*it)].var + ", ";
                    }
                    cycle += raw.equations[static_cast<std::size_t>(p)].var + "]";
                    diags.push_back({DiagCode::CycleDetected,
                                     "cyclic dependency " + cycle,
                                     raw.equations[static_cast<std::size_t>(p)].span});
                } else if (color[static_cast<std::size_t>(p)] == 0) {
                    visit(p);
                }
            }
            path.pop_back();
            color[static_cast<std::size_t>(v)] = 2;
        }
    };
    Dfs dfs{raw, depends, diags, color, path};
    for (std::size_t i = 0; i < n; ++i) {
        if (color[i] == 0) dfs.visit(static_cast<int>(i));
    }
}

}  // namespace

struct ScmBuilder {
    static Scm build(std::vector<Equation> equations, std::vector<int> topo) {
        Scm scm;
        scm.equations_ = std::move(equations);
        scm.topo_order_ = std::move(topo);
        for (std::size_t i = 0; i < scm.equations_.size(); ++i) {
            scm.var_index_[scm.equations_[i].var] = static_cast<int>(i);
            scm.noise_index_[scm.equations_[i].noise.name] = static_cast<int>(i);
        }
        scm.var_finite_.assign(scm.equations_.size(), 0);
        scm.finite_support_ = true;
        for (int idx : scm.topo_order_) {
            const Equation& eq = scm.equations_[static_cast<std::size_t>(idx)];
            char fin = finite_support(eq.noise.dist) ? 1 : 0;
            for (int p : eq.parents) {
                fin = fin && scm.var_finite_[static_cast<std::size_t>(p)];
            }
            scm.var_finite_[static_cast<std::size_t>(idx)] = fin;
            if (!finite_support(eq.noise.dist)) scm.finite_support_ = false;
        }
        return scm;
    }
};

namespace {

CompiledExpr compile_expr(const Expr& expr, const std::map<std::string, int>& var_slots,
                          const std::string& own_noise) {
    CompiledExpr out;
    struct Builder {
        CompiledExpr& out;
        const std::map<std::string, int>& var_slots;
        const std::string& own_noise;

        int visit(const Expr& e) {
            using Node = CompiledExpr::Node;
            Node node;
            if (const auto* l = std::get_if<Literal>(&e.node)) {
                node.kind = Node::Kind::Literal;
                node.literal = l->value;
            } else if (const auto* r = std::get_if<Ref>(&e.node)) {
                if (r->name == own_noise) {
                    node.kind = Node::Kind::Noise;
                } else {
                    node.kind = Node::Kind::Var;
                    node.slot = var_slots.at(r->name);
                }
            } else if (const auto* n = std::get_if<Neg>(&e.node)) {
                node.kind = Node::Kind::Neg;
                node.a = visit(*n->operand);
            } else if (const auto* b = std::get_if<Binary>(&e.node)) {
                node.kind = Node::Kind::Binary;
                node.op = b->op;
                node.a = visit(*b->lhs);
                node.b = visit(*b->rhs);
            } else {
                const auto& i = std::get<If>(e.node);
                node.kind = Node::Kind::If;
                node.a = visit(*i.cond);
                node.b = visit(*i.then_branch);
                node.c = visit(*i.else_branch);
            }
            out.nodes.push_back(node);
            return static_cast<int>(out.nodes.size()) - 1;
        }
    };
    Builder builder{out, var_slots, own_noise};
    out.root = builder.visit(expr);
    return out;
}

}  // namespace

ValidationResult validate(const RawModel& raw) {
    DiagnosticList diags;

    // Name hygiene: identifiers, duplicates, disjoint namespaces.
    std::map<std::string, NoiseInfo> noises;  // declared noise name -> info
    std::vector<std::string> noise_order;
    for (const auto& decl : raw.noises) {
        if (!valid_identifier(decl.spec.name)) {
            diags.push_back({DiagCode::SyntaxError,
                             "invalid noise identifier '" + decl.spec.name + "'", decl.span});
            continue;
        }
        if (noises.count(decl.spec.name)) {
            diags.push_back({DiagCode::DuplicateDefinition,
                             "noise '" + decl.spec.name + "' declared twice", decl.span});
            continue;
        }
        noises[decl.spec.name] = NoiseInfo{decl.spec, decl.span, {}, -1};
        noise_order.push_back(decl.spec.name);
        check_distribution(decl.spec, decl.span, diags);
    }

    std::map<std::string, std::size_t> var_index;
    for (std::size_t i = 0; i < raw.equations.size(); ++i) {
        const auto& eq = raw.equations[i];
        if (!valid_identifier(eq.var)) {
            diags.push_back({DiagCode::SyntaxError,
                             "invalid variable identifier '" + eq.var + "'", eq.span});
            continue;
        }
        if (var_index.count(eq.var)) {
            diags.push_back({DiagCode::DuplicateDefinition,
                             "variable '" + eq.var + "' declared twice", eq.span});
            continue;
        }
        if (noises.count(eq.var)) {
            diags.push_back({DiagCode::DuplicateDefinition,
                             "'" + eq.var + "' is declared both as a variable and as a noise",
                             eq.span});
            continue;
        }
        if (!eq.expr) {
            diags.push_back({DiagCode::SyntaxError,
                             "variable '" + eq.var + "' has no defining expression", eq.span});
            continue;
        }
        var_index[eq.var] = i;
    }

    // Reference hygiene and noise claims.
    std::vector<std::vector<std::string>> eq_parent_names(raw.equations.size());
    std::vector<std::string> eq_noise(raw.equations.size());  // associated noise, may stay empty
    for (std::size_t i = 0; i < raw.equations.size(); ++i) {
        const auto& eq = raw.equations[i];
        if (!eq.expr) continue;
        std::set<std::string> noise_refs;
        for (const auto& name : referenced_names(*eq.expr)) {
            if (var_index.count(name)) {
                if (name != eq.var) eq_parent_names[i].push_back(name);
                continue;  // self-reference surfaces as a cycle below
            }
            const auto nit = noises.find(name);
            if (nit != noises.end()) {
                noise_refs.insert(name);
                nit->second.claimants.push_back(i);
                continue;
            }
            diags.push_back({DiagCode::UnknownReference,
                             "variable '" + eq.var + "' references undeclared name '" + name +
                                 "'",
                             eq.span});
        }
        if (noise_refs.size() > 1) {
            std::string list;
            for (const auto& n : noise_refs) list += (list.empty() ? "" : ", ") + n;
            diags.push_back({DiagCode::NoiseCardinalityViolation,
                             "variable '" + eq.var + "' references " +
                                 std::to_string(noise_refs.size()) + " noise symbols (" + list +
                                 "); exactly one is allowed",
                             eq.span});
        }
        if (!eq.noise_name.empty()) {
            const auto nit = noises.find(eq.noise_name);
            if (nit == noises.end()) {
                diags.push_back({DiagCode::UnknownReference,
                                 "variable '" + eq.var + "' is associated with undeclared noise '" +
                                     eq.noise_name + "'",
                                 eq.span});
            } else {
                if (nit->second.explicit_owner >= 0) {
                    diags.push_back({DiagCode::NoiseCardinalityViolation,
                                     "noise '" + eq.noise_name + "' is associated with two "
                                     "variables",
                                     eq.span});
                } else {
                    nit->second.explicit_owner = static_cast<int>(i);
                }
                for (const auto& n : noise_refs) {
                    if (n != eq.noise_name) {
                        diags.push_back({DiagCode::NoiseCardinalityViolation,
                                         "variable '" + eq.var + "' references noise '" + n +
                                             "' but owns '" + eq.noise_name + "'",
                                         eq.span});
                    }
                }
                eq_noise[i] = eq.noise_name;
            }
        } else if (noise_refs.size() == 1) {
            eq_noise[i] = *noise_refs.begin();
        }
    }

    // Bijection: each noise claimed by exactly one equation.
    for (const auto& name : noise_order) {
        NoiseInfo& info = noises[name];
        std::set<std::size_t> distinct(info.claimants.begin(), info.claimants.end());
        if (info.explicit_owner >= 0) {
            distinct.erase(static_cast<std::size_t>(info.explicit_owner));
            for (std::size_t other : distinct) {
                diags.push_back({DiagCode::NoiseCardinalityViolation,
                                 "variable '" + raw.equations[other].var +
                                     "' references noise '" + name + "' owned by '" +
                                     raw.equations[static_cast<std::size_t>(
                                                       info.explicit_owner)]
                                         .var +
                                     "'",
                                 raw.equations[other].span});
            }
            continue;
        }
        if (distinct.size() > 1) {
            std::string list;
            for (std::size_t c : distinct) {
                list += (list.empty() ? "" : ", ") + raw.equations[c].var;
            }
            diags.push_back({DiagCode::NoiseCardinalityViolation,
                             "noise '" + name + "' is referenced by " +
                                 std::to_string(distinct.size()) + " variables (" + list +
                                 "); one noise belongs to one variable",
                             info.span});
        } else if (distinct.empty()) {
            diags.push_back({DiagCode::NoiseCardinalityViolation,
                             "noise '" + name + "' is not used by any variable", info.span});
        }
    }

    // Parent graph and cycles (best effort even when earlier checks failed).
    const std::size_t n = raw.equations.size();
    std::vector<std::vector<int>> depends(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::set<int> ps;
        if (raw.equations[i].expr && count_references(*raw.equations[i].expr,
                                                      raw.equations[i].var) > 0) {
            ps.insert(static_cast<int>(i));  // self-loop
        }
        for (const auto& p : eq_parent_names[i]) {
            const auto it = var_index.find(p);
            if (it != var_index.end()) ps.insert(static_cast<int>(it->second));
        }
        depends[i].assign(ps.begin(), ps.end());
    }
    report_cycles(raw, depends, diags);

    if (!diags.empty()) return ValidationResult{std::nullopt, std::move(diags)};

    // Topological order: declaration-earliest node whose parents are placed.
    std::vector<int> topo;
    {
        std::vector<char> placed(n, 0);
        topo.reserve(n);
        for (std::size_t step = 0; step < n; ++step) {
            for (std::size_t i = 0; i < n; ++i) {
                if (placed[i]) continue;
                bool ready = true;
                for (int p : depends[i]) ready = ready && placed[static_cast<std::size_t>(p)];
                if (ready) {
                    placed[i] = 1;
                    topo.push_back(static_cast<int>(i));
                    break;
                }
            }
        }
    }

    // Assemble equations: synthesize inert noises, attach inverses.
    std::set<std::string> taken;
    for (const auto& [name, info] : noises) taken.insert(name);
    for (const auto& [name, idx] : var_index) taken.insert(name);

    std::vector<Equation> equations(n);
    std::map<std::string, int> var_slots;
    for (std::size_t i = 0; i < n; ++i) var_slots[raw.equations[i].var] = static_cast<int>(i);

    for (std::size_t i = 0; i < n; ++i) {
        Equation& eq = equations[i];
        eq.var = raw.equations[i].var;
        eq.expr = raw.equations[i].expr;
        if (!eq_noise[i].empty()) {
            eq.noise = noises[eq_noise[i]].spec;
            eq.noise_referenced = count_references(*eq.expr, eq.noise.name) > 0;
        } else {
            std::string name = "U_" + eq.var;
            while (taken.count(name)) name += "_";
            taken.insert(name);
            eq.noise = NoiseSpec{name, PointDist{0.0}};
            eq.noise_referenced = false;
            eq.noise_implicit = true;
        }
        std::set<int> ps;
        for (const auto& p : eq_parent_names[i]) {
            ps.insert(var_slots.at(p));
        }
        eq.parents.assign(ps.begin(), ps.end());
    }

    // Inverse declarations.
    std::map<std::string, int> noise_owner;
    for (std::size_t i = 0; i < n; ++i) noise_owner[equations[i].noise.name] = static_cast<int>(i);
    for (const auto& inv : raw.inverses) {
        const auto oit = noise_owner.find(inv.noise_name);
        if (oit == noise_owner.end()) {
            diags.push_back({DiagCode::UnknownReference,
                             "inverse declared for unknown noise '" + inv.noise_name + "'",
                             inv.span});
            continue;
        }
        Equation& eq = equations[static_cast<std::size_t>(oit->second)];
        if (eq.inverse) {
            diags.push_back({DiagCode::DuplicateDefinition,
                             "inverse for noise '" + inv.noise_name + "' declared twice",
                             inv.span});
            continue;
        }
        // Scope: the owning variable and its parents only.
        std::set<std::string> allowed{eq.var};
        for (int p : eq.parents) allowed.insert(equations[static_cast<std::size_t>(p)].var);
        bool scope_ok = true;
        for (const auto& name : referenced_names(*inv.expr)) {
            if (!allowed.count(name)) {
                diags.push_back({DiagCode::InvalidInverse,
                                 "inverse for '" + inv.noise_name + "' references '" + name +
                                     "', which is neither '" + eq.var + "' nor one of its parents",
                                 inv.span});
                scope_ok = false;
            }
        }
        if (scope_ok) eq.inverse = inv.expr;
    }
    if (!diags.empty()) return ValidationResult{std::nullopt, std::move(diags)};

    // Auto-inversion for additive-noise equations without a declared inverse.
    for (auto& eq : equations) {
        if (!eq.inverse && eq.noise_referenced) {
            eq.inverse = synthesize_inverse(eq.var, eq.noise.name, eq.expr);
            eq.inverse_synthesized = static_cast<bool>(eq.inverse);
        }
    }

    // Compile.
    for (auto& eq : equations) {
        eq.compiled = compile_expr(*eq.expr, var_slots, eq.noise.name);
        if (eq.inverse) {
            eq.compiled_inverse = compile_expr(*eq.inverse, var_slots, std::string());
        }
    }

    Scm scm = ScmBuilder::build(std::move(equations), std::move(topo));

    // Inverse round trips on forward-simulated probe points. A declared
    // inverse that misses the tolerance rejects the model; a synthesized one
    // is dropped, leaving the equation non-invertible.
    {
        Rng rng(kProbeSeed);
        std::vector<char> declared_bad(static_cast<std::size_t>(scm.size()), 0);
        std::vector<char> synth_bad(static_cast<std::size_t>(scm.size()), 0);
        for (int probe = 0; probe < kInverseProbes; ++probe) {
            std::vector<double> u(static_cast<std::size_t>(scm.size()));
            for (int i = 0; i < scm.size(); ++i) {
                u[static_cast<std::size_t>(i)] =
                    detail::sample_dist(scm.equation(i).noise.dist, rng);
            }
            std::vector<double> vars(static_cast<std::size_t>(scm.size()), 0.0);
            bool eval_ok = true;
            try {
                for (int idx : scm.topo_order()) {
                    vars[static_cast<std::size_t>(idx)] = scm.equation(idx).compiled.eval(
                        vars, u[static_cast<std::size_t>(idx)]);
                }
            } catch (const EngineError&) {
                eval_ok = false;  // e.g. division by zero on this draw
            }
            if (!eval_ok) continue;
            for (int i = 0; i < scm.size(); ++i) {
                const Equation& eq = scm.equation(i);
                if (!eq.inverse || !eq.noise_referenced) continue;
                double recovered = 0.0;
                bool ok = true;
                try {
                    recovered = eq.compiled_inverse.eval(vars, 0.0);
                } catch (const EngineError&) {
                    ok = false;
                }
                const double expected = u[static_cast<std::size_t>(i)];
                const double tol = kInverseTolerance * std::max(1.0, std::abs(expected));
                if (!ok || !(std::abs(recovered - expected) <= tol)) {
                    (eq.inverse_synthesized ? synth_bad : declared_bad)[static_cast<std::size_t>(
                        i)] = 1;
                }
            }
        }
        bool rebuild = false;
        std::vector<Equation> eqs(scm.equations().begin(), scm.equations().end());
        for (int i = 0; i < scm.size(); ++i) {
            if (declared_bad[static_cast<std::size_t>(i)]) {
                diags.push_back(
                    {DiagCode::InvalidInverse,
                     "inverse for noise '" + scm.equation(i).noise.name +
                         "' does not recover the noise value on forward-simulated probes",
                     SourceSpan{}});
            } else if (synth_bad[static_cast<std::size_t>(i)]) {
                eqs[static_cast<std::size_t>(i)].inverse = nullptr;
                eqs[static_cast<std::size_t>(i)].inverse_synthesized = false;
                eqs[static_cast<std::size_t>(i)].compiled_inverse = CompiledExpr{};
                rebuild = true;
            }
        }
        if (!diags.empty()) return ValidationResult{std::nullopt, std::move(diags)};
        if (rebuild) {
            scm = ScmBuilder::build(std::move(eqs), std::vector<int>(scm.topo_order()));
        }
    }

    return ValidationResult{std::move(scm), {}};
}

}  // namespace scmi

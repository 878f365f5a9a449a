#include "scmi/model.hpp"

#include <cmath>

#include "scmi/errors.hpp"

namespace scmi {

bool finite_support(const NoiseDistribution& dist) {
    return std::holds_alternative<PointDist>(dist) ||
           std::holds_alternative<CategoricalDist>(dist);
}

std::vector<std::pair<double, double>> support_atoms(const NoiseDistribution& dist) {
    if (const auto* p = std::get_if<PointDist>(&dist)) {
        return {{p->value, 1.0}};
    }
    if (const auto* c = std::get_if<CategoricalDist>(&dist)) {
        std::vector<std::pair<double, double>> atoms;
        atoms.reserve(c->values.size());
        for (std::size_t i = 0; i < c->values.size(); ++i) {
            atoms.emplace_back(c->values[i], c->probs[i]);
        }
        return atoms;
    }
    throw EngineError(ErrorCode::NotFiniteSupport,
                      "distribution has no finite support atoms");
}

double dist_mean(const NoiseDistribution& dist) {
    struct Visitor {
        double operator()(const PointDist& d) const { return d.value; }
        double operator()(const NormalDist& d) const { return d.mean; }
        double operator()(const UniformDist& d) const { return 0.5 * (d.lo + d.hi); }
        double operator()(const CategoricalDist& d) const {
            double m = 0.0;
            for (std::size_t i = 0; i < d.values.size(); ++i) m += d.values[i] * d.probs[i];
            return m;
        }
    };
    return std::visit(Visitor{}, dist);
}

double dist_variance(const NoiseDistribution& dist) {
    struct Visitor {
        double operator()(const PointDist&) const { return 0.0; }
        double operator()(const NormalDist& d) const { return d.stddev * d.stddev; }
        double operator()(const UniformDist& d) const {
            const double w = d.hi - d.lo;
            return w * w / 12.0;
        }
        double operator()(const CategoricalDist& d) const {
            double m = 0.0, m2 = 0.0;
            for (std::size_t i = 0; i < d.values.size(); ++i) {
                m += d.values[i] * d.probs[i];
                m2 += d.values[i] * d.values[i] * d.probs[i];
            }
            return m2 - m * m;
        }
    };
    return std::visit(Visitor{}, dist);
}

const char* dist_name(const NoiseDistribution& dist) {
    struct Visitor {
        const char* operator()(const PointDist&) const { return "Point"; }
        const char* operator()(const NormalDist&) const { return "Normal"; }
        const char* operator()(const UniformDist&) const { return "Uniform"; }
        const char* operator()(const CategoricalDist&) const { return "Categorical"; }
    };
    return std::visit(Visitor{}, dist);
}

bool dist_equal(const NoiseDistribution& a, const NoiseDistribution& b) {
    if (a.index() != b.index()) return false;
    struct Visitor {
        const NoiseDistribution& other;
        bool operator()(const PointDist& d) const {
            return d.value == std::get<PointDist>(other).value;
        }
        bool operator()(const NormalDist& d) const {
            const auto& o = std::get<NormalDist>(other);
            return d.mean == o.mean && d.stddev == o.stddev;
        }
        bool operator()(const UniformDist& d) const {
            const auto& o = std::get<UniformDist>(other);
            return d.lo == o.lo && d.hi == o.hi;
        }
        bool operator()(const CategoricalDist& d) const {
            const auto& o = std::get<CategoricalDist>(other);
            return d.values == o.values && d.probs == o.probs;
        }
    };
    return std::visit(Visitor{a}, b);
}

double CompiledExpr::eval(const std::vector<double>& vars, double noise) const {
    return eval_node(root, vars, noise);
}

double CompiledExpr::eval_node(int idx, const std::vector<double>& vars, double noise) const {
    const Node& n = nodes[static_cast<std::size_t>(idx)];
    switch (n.kind) {
        case Node::Kind::Literal: return n.literal;
        case Node::Kind::Var: return vars[static_cast<std::size_t>(n.slot)];
        case Node::Kind::Noise: return noise;
        case Node::Kind::Neg: return -eval_node(n.a, vars, noise);
        case Node::Kind::Binary: {
            const double lhs = eval_node(n.a, vars, noise);
            const double rhs = eval_node(n.b, vars, noise);
            switch (n.op) {
                case BinaryOp::Add: return lhs + rhs;
                case BinaryOp::Sub: return lhs - rhs;
                case BinaryOp::Mul: return lhs * rhs;
                case BinaryOp::Div:
                    if (rhs == 0.0) {
                        throw EngineError(ErrorCode::EvaluationError, "division by zero");
                    }
                    return lhs / rhs;
                case BinaryOp::Eq: return lhs == rhs ? 1.0 : 0.0;
                case BinaryOp::Ne: return lhs != rhs ? 1.0 : 0.0;
                case BinaryOp::Lt: return lhs < rhs ? 1.0 : 0.0;
                case BinaryOp::Le: return lhs <= rhs ? 1.0 : 0.0;
                case BinaryOp::Gt: return lhs > rhs ? 1.0 : 0.0;
                case BinaryOp::Ge: return lhs >= rhs ? 1.0 : 0.0;
            }
            return 0.0;
        }
        case Node::Kind::If:
            return eval_node(n.a, vars, noise) != 0.0 ? eval_node(n.b, vars, noise)
                                                      : eval_node(n.c, vars, noise);
    }
    return 0.0;
}

int Scm::index_of(const std::string& var) const {
    const auto it = var_index_.find(var);
    return it == var_index_.end() ? -1 : it->second;
}

int Scm::noise_index_of(const std::string& noise) const {
    const auto it = noise_index_.find(noise);
    return it == noise_index_.end() ? -1 : it->second;
}

std::vector<std::string> Scm::variable_names() const {
    std::vector<std::string> names;
    names.reserve(equations_.size());
    for (const auto& eq : equations_) names.push_back(eq.var);
    return names;
}

std::vector<std::string> Scm::noise_names() const {
    std::vector<std::string> names;
    names.reserve(equations_.size());
    for (const auto& eq : equations_) names.push_back(eq.noise.name);
    return names;
}

int require_variable(const Scm& scm, const std::string& var) {
    const int idx = scm.index_of(var);
    if (idx < 0) {
        throw EngineError(ErrorCode::UnknownVariable, "unknown variable '" + var + "'");
    }
    return idx;
}

std::set<std::string> Scm::parents_of(const std::string& var) const {
    const int idx = require_variable(*this, var);
    std::set<std::string> out;
    for (int p : equations_[static_cast<std::size_t>(idx)].parents) {
        out.insert(equations_[static_cast<std::size_t>(p)].var);
    }
    return out;
}

std::vector<char> Scm::reachable_mask(int from) const {
    std::vector<std::vector<int>> children(equations_.size());
    for (std::size_t i = 0; i < equations_.size(); ++i) {
        for (int p : equations_[i].parents) {
            children[static_cast<std::size_t>(p)].push_back(static_cast<int>(i));
        }
    }
    std::vector<char> mask(equations_.size(), 0);
    std::vector<int> stack{from};
    mask[static_cast<std::size_t>(from)] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int c : children[static_cast<std::size_t>(v)]) {
            if (!mask[static_cast<std::size_t>(c)]) {
                mask[static_cast<std::size_t>(c)] = 1;
                stack.push_back(c);
            }
        }
    }
    return mask;
}

RawModel to_raw(const Scm& scm) {
    RawModel raw;
    for (const auto& eq : scm.equations()) {
        raw.noises.push_back({eq.noise, SourceSpan{}});
        raw.equations.push_back({eq.var, eq.expr, eq.noise.name, SourceSpan{}});
        if (eq.inverse) {
            raw.inverses.push_back({eq.noise.name, eq.inverse, SourceSpan{}});
        }
    }
    return raw;
}

bool scm_equal(const Scm& a, const Scm& b) {
    if (a.size() != b.size()) return false;
    if (a.topo_order() != b.topo_order()) return false;
    for (int i = 0; i < a.size(); ++i) {
        const Equation& ea = a.equation(i);
        const Equation& eb = b.equation(i);
        if (ea.var != eb.var) return false;
        if (!expr_equal(ea.expr, eb.expr)) return false;
        if (ea.noise.name != eb.noise.name) return false;
        if (!dist_equal(ea.noise.dist, eb.noise.dist)) return false;
        if (static_cast<bool>(ea.inverse) != static_cast<bool>(eb.inverse)) return false;
        if (ea.inverse && !expr_equal(ea.inverse, eb.inverse)) return false;
        if (ea.parents != eb.parents) return false;
    }
    return true;
}

}  // namespace scmi

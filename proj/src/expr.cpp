#include "scmi/expr.hpp"

namespace scmi {

const char* binary_op_token(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
        case BinaryOp::Eq: return "==";
        case BinaryOp::Ne: return "!=";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Le: return "<=";
        case BinaryOp::Gt: return ">";
        case BinaryOp::Ge: return ">=";
    }
    return "?";
}

ExprPtr make_literal(double value) { return std::make_shared<Expr>(Expr{Literal{value}}); }

ExprPtr make_ref(std::string name) { return std::make_shared<Expr>(Expr{Ref{std::move(name)}}); }

ExprPtr make_neg(ExprPtr operand) { return std::make_shared<Expr>(Expr{Neg{std::move(operand)}}); }

ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
    return std::make_shared<Expr>(Expr{Binary{op, std::move(lhs), std::move(rhs)}});
}

ExprPtr make_if(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch) {
    return std::make_shared<Expr>(
        Expr{If{std::move(cond), std::move(then_branch), std::move(else_branch)}});
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    struct Visitor {
        const Expr& other;
        bool operator()(const Literal& l) const {
            return l.value == std::get<Literal>(other.node).value;
        }
        bool operator()(const Ref& r) const { return r.name == std::get<Ref>(other.node).name; }
        bool operator()(const Neg& n) const {
            return expr_equal(n.operand, std::get<Neg>(other.node).operand);
        }
        bool operator()(const Binary& bn) const {
            const auto& o = std::get<Binary>(other.node);
            return bn.op == o.op && expr_equal(bn.lhs, o.lhs) && expr_equal(bn.rhs, o.rhs);
        }
        bool operator()(const If& i) const {
            const auto& o = std::get<If>(other.node);
            return expr_equal(i.cond, o.cond) && expr_equal(i.then_branch, o.then_branch) &&
                   expr_equal(i.else_branch, o.else_branch);
        }
    };
    return std::visit(Visitor{b}, a.node);
}

namespace {

void collect_names(const Expr& expr, std::set<std::string>& out) {
    struct Visitor {
        std::set<std::string>& out;
        void operator()(const Literal&) const {}
        void operator()(const Ref& r) const { out.insert(r.name); }
        void operator()(const Neg& n) const { collect_names(*n.operand, out); }
        void operator()(const Binary& b) const {
            collect_names(*b.lhs, out);
            collect_names(*b.rhs, out);
        }
        void operator()(const If& i) const {
            collect_names(*i.cond, out);
            collect_names(*i.then_branch, out);
            collect_names(*i.else_branch, out);
        }
    };
    std::visit(Visitor{out}, expr.node);
}

}  // namespace

std::set<std::string> referenced_names(const Expr& expr) {
    std::set<std::string> out;
    collect_names(expr, out);
    return out;
}

int count_references(const Expr& expr, const std::string& name) {
    struct Visitor {
        const std::string& name;
        int operator()(const Literal&) const { return 0; }
        int operator()(const Ref& r) const { return r.name == name ? 1 : 0; }
        int operator()(const Neg& n) const { return count_references(*n.operand, name); }
        int operator()(const Binary& b) const {
            return count_references(*b.lhs, name) + count_references(*b.rhs, name);
        }
        int operator()(const If& i) const {
            return count_references(*i.cond, name) + count_references(*i.then_branch, name) +
                   count_references(*i.else_branch, name);
        }
    };
    return std::visit(Visitor{name}, expr.node);
}

}  // namespace scmi

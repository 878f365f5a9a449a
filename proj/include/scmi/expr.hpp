#pragma once

#include <memory>
#include <set>
#include <string>
#include <variant>

namespace scmi {

// Arithmetic / conditional expression AST for structural equations.
// Nodes are immutable after construction and shared freely; a reference
// node names either an endogenous variable or a noise symbol, resolved
// against the declarations during validation.

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
};

const char* binary_op_token(BinaryOp op);

struct Literal {
    double value;
};

struct Ref {
    std::string name;
};

struct Neg {
    ExprPtr operand;
};

struct Binary {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};

struct If {
    ExprPtr cond;
    ExprPtr then_branch;
    ExprPtr else_branch;
};

struct Expr {
    std::variant<Literal, Ref, Neg, Binary, If> node;
};

ExprPtr make_literal(double value);
ExprPtr make_ref(std::string name);
ExprPtr make_neg(ExprPtr operand);
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_if(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch);

bool expr_equal(const Expr& a, const Expr& b);
inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return expr_equal(*a, *b);
}

// All names referenced anywhere in the expression.
std::set<std::string> referenced_names(const Expr& expr);

// Number of reference nodes naming `name` (counts repeats).
int count_references(const Expr& expr, const std::string& name);

}  // namespace scmi

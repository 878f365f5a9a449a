#include "scmi/dsl.hpp"

#include <cassert>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <string_view>

namespace scmi {

namespace {

enum class TokKind {
    Ident,
    Number,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
    Tilde,
    Assign,  // =
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    Newline,
    End,
    Bad,
};

struct Token {
    TokKind kind;
    std::string_view text;
    double number = 0.0;
    SourceSpan span;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

class Lexer {
public:
    Lexer(const std::string& text, DiagnosticList& diags) : text_(text), diags_(diags) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '\n' || c == '\r') {
                // CRLF and stray CR both separate statements.
                const bool crlf =
                    c == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n';
                out.push_back(make(TokKind::Newline, crlf ? 2 : 1));
                advance_line();
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\f' || c == '\v') {
                ++pos_;
                ++column_;
                continue;
            }
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n' && text_[pos_] != '\r') {
                    ++pos_;
                    ++column_;
                }
                continue;
            }
            if (ident_start(c)) {
                out.push_back(lex_ident());
                continue;
            }
            if (digit(c) || (c == '.' && pos_ + 1 < text_.size() && digit(text_[pos_ + 1]))) {
                out.push_back(lex_number());
                continue;
            }
            out.push_back(lex_operator());
        }
        Token end;
        end.kind = TokKind::End;
        end.span = SourceSpan{line_, column_, 0};
        out.push_back(end);
        return out;
    }

private:
    Token make(TokKind kind, int length) {
        Token t;
        t.kind = kind;
        t.text = std::string_view(text_).substr(pos_, static_cast<std::size_t>(length));
        t.span = SourceSpan{line_, column_, length};
        pos_ += static_cast<std::size_t>(length);
        column_ += length;
        return t;
    }

    // make() already consumed the separator; only the coordinates move.
    void advance_line() {
        ++line_;
        column_ = 1;
    }

    Token lex_ident() {
        std::size_t end = pos_;
        while (end < text_.size() && ident_char(text_[end])) ++end;
        return make(TokKind::Ident, static_cast<int>(end - pos_));
    }

    Token lex_number() {
        std::size_t end = pos_;
        while (end < text_.size() && digit(text_[end])) ++end;
        if (end < text_.size() && text_[end] == '.') {
            ++end;
            while (end < text_.size() && digit(text_[end])) ++end;
        }
        if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
            std::size_t exp = end + 1;
            if (exp < text_.size() && (text_[exp] == '+' || text_[exp] == '-')) ++exp;
            if (exp < text_.size() && digit(text_[exp])) {
                end = exp;
                while (end < text_.size() && digit(text_[end])) ++end;
            }
        }
        Token t = make(TokKind::Number, static_cast<int>(end - pos_));
        double value = 0.0;
        const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (res.ec != std::errc{} || res.ptr != t.text.data() + t.text.size()) {
            diags_.push_back({DiagCode::SyntaxError,
                              "malformed number '" + std::string(t.text) + "'", t.span});
            t.kind = TokKind::Bad;
        }
        t.number = value;
        return t;
    }

    Token lex_operator() {
        auto two = [&](char a, char b) {
            return text_[pos_] == a && pos_ + 1 < text_.size() && text_[pos_ + 1] == b;
        };
        if (two('=', '=')) return make(TokKind::EqEq, 2);
        if (two('!', '=')) return make(TokKind::NotEq, 2);
        if (two('<', '=')) return make(TokKind::Le, 2);
        if (two('>', '=')) return make(TokKind::Ge, 2);
        switch (text_[pos_]) {
            case '+': return make(TokKind::Plus, 1);
            case '-': return make(TokKind::Minus, 1);
            case '*': return make(TokKind::Star, 1);
            case '/': return make(TokKind::Slash, 1);
            case '(': return make(TokKind::LParen, 1);
            case ')': return make(TokKind::RParen, 1);
            case ',': return make(TokKind::Comma, 1);
            case '~': return make(TokKind::Tilde, 1);
            case '=': return make(TokKind::Assign, 1);
            case '<': return make(TokKind::Lt, 1);
            case '>': return make(TokKind::Gt, 1);
            default: break;
        }
        Token t = make(TokKind::Bad, 1);
        diags_.push_back({DiagCode::SyntaxError,
                          "unexpected character '" + std::string(t.text) + "'", t.span});
        return t;
    }

    const std::string& text_;
    DiagnosticList& diags_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

struct ParseError {};  // unwinds to the statement boundary

class Parser {
public:
    Parser(std::vector<Token> tokens, DiagnosticList& diags)
        : tokens_(std::move(tokens)), diags_(diags) {}

    ModelDocument run() {
        ModelDocument doc;
        while (true) {
            while (at(TokKind::Newline)) ++pos_;
            if (at(TokKind::End)) break;
            try {
                Statement stmt = parse_statement();
                if (!at(TokKind::Newline) && !at(TokKind::End)) {
                    fail("expected end of statement");
                }
                doc.statements.push_back(std::move(stmt));
            } catch (const ParseError&) {
                // fail() reported the diagnostic; drop the statement and resync.
            }
            skip_to_newline();
        }
        return doc;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    bool at(TokKind k) const { return peek().kind == k; }

    Token take() { return tokens_[pos_++]; }

    Token expect(TokKind k, const char* what) {
        if (!at(k)) fail(std::string("expected ") + what);
        return take();
    }

    [[noreturn]] void fail(std::string message) {
        diags_.push_back({DiagCode::SyntaxError, std::move(message), peek().span});
        throw ParseError{};
    }

    void skip_to_newline() {
        while (!at(TokKind::Newline) && !at(TokKind::End)) ++pos_;
        if (at(TokKind::Newline)) ++pos_;
    }

    Statement parse_statement() {
        if (!at(TokKind::Ident)) fail("expected 'noise', 'var' or 'inverse'");
        const Token kw = take();
        if (kw.text == "noise") return parse_noise(kw);
        if (kw.text == "var") return parse_var(kw);
        if (kw.text == "inverse") return parse_inverse(kw);
        diags_.push_back({DiagCode::SyntaxError,
                          "unknown statement keyword '" + std::string(kw.text) + "'", kw.span});
        throw ParseError{};
    }

    std::string parse_name() {
        const Token t = expect(TokKind::Ident, "identifier");
        if (is_keyword(t.text)) {
            diags_.push_back({DiagCode::SyntaxError,
                              "'" + std::string(t.text) + "' is a keyword", t.span});
            throw ParseError{};
        }
        return std::string(t.text);
    }

    static bool is_keyword(std::string_view s) {
        return s == "noise" || s == "var" || s == "inverse" || s == "if" || s == "then" ||
               s == "else";
    }

    Statement parse_noise(const Token& kw) {
        std::string name = parse_name();
        expect(TokKind::Tilde, "'~'");
        const Token dist_tok = expect(TokKind::Ident, "distribution name");
        std::vector<double> args;
        expect(TokKind::LParen, "'('");
        if (!at(TokKind::RParen)) {
            args.push_back(parse_signed_number());
            while (at(TokKind::Comma)) {
                take();
                args.push_back(parse_signed_number());
            }
        }
        expect(TokKind::RParen, "')'");

        NoiseSpec spec;
        spec.name = std::move(name);
        spec.dist = parse_distribution(dist_tok, args);
        return Statement{NoiseDeclStmt{std::move(spec)}, kw.span};
    }

    double parse_signed_number() {
        double sign = 1.0;
        while (at(TokKind::Minus) || at(TokKind::Plus)) {
            if (take().kind == TokKind::Minus) sign = -sign;
        }
        const Token t = expect(TokKind::Number, "number");
        return sign * t.number;
    }

    NoiseDistribution parse_distribution(const Token& name, const std::vector<double>& args) {
        auto arity = [&](std::size_t n) {
            if (args.size() != n) {
                diags_.push_back({DiagCode::SyntaxError,
                                  std::string(name.text) + " expects " + std::to_string(n) +
                                      " argument(s), got " + std::to_string(args.size()),
                                  name.span});
                throw ParseError{};
            }
        };
        if (name.text == "Point") {
            arity(1);
            return PointDist{args[0]};
        }
        if (name.text == "Normal") {
            arity(2);
            return NormalDist{args[0], args[1]};
        }
        if (name.text == "Uniform") {
            arity(2);
            return UniformDist{args[0], args[1]};
        }
        if (name.text == "Categorical") {
            if (args.size() < 2 || args.size() % 2 != 0) {
                diags_.push_back({DiagCode::SyntaxError,
                                  "Categorical expects 2k arguments: k values then k "
                                  "probabilities",
                                  name.span});
                throw ParseError{};
            }
            const std::size_t k = args.size() / 2;
            CategoricalDist dist;
            dist.values.assign(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(k));
            dist.probs.assign(args.begin() + static_cast<std::ptrdiff_t>(k), args.end());
            return dist;
        }
        diags_.push_back({DiagCode::UnknownDistribution,
                          "unknown distribution '" + std::string(name.text) +
                              "' (expected Point, Normal, Uniform or Categorical)",
                          name.span});
        throw ParseError{};
    }

    Statement parse_var(const Token& kw) {
        std::string name = parse_name();
        expect(TokKind::Assign, "'='");
        ExprPtr expr = parse_expr();
        return Statement{VarDeclStmt{std::move(name), std::move(expr)}, kw.span};
    }

    Statement parse_inverse(const Token& kw) {
        std::string name = parse_name();
        expect(TokKind::Assign, "'='");
        ExprPtr expr = parse_expr();
        return Statement{InverseDeclStmt{std::move(name), std::move(expr)}, kw.span};
    }

    // expr := "if" expr "then" expr "else" expr | comparison
    ExprPtr parse_expr() {
        if (at(TokKind::Ident) && peek().text == "if") {
            take();
            ExprPtr cond = parse_expr();
            expect_keyword("then");
            ExprPtr then_branch = parse_expr();
            expect_keyword("else");
            ExprPtr else_branch = parse_expr();
            return make_if(std::move(cond), std::move(then_branch), std::move(else_branch));
        }
        return parse_comparison();
    }

    void expect_keyword(const char* kw) {
        if (!(at(TokKind::Ident) && peek().text == kw)) {
            fail(std::string("expected '") + kw + "'");
        }
        take();
    }

    ExprPtr parse_comparison() {
        ExprPtr lhs = parse_additive();
        while (true) {
            BinaryOp op;
            switch (peek().kind) {
                case TokKind::EqEq: op = BinaryOp::Eq; break;
                case TokKind::NotEq: op = BinaryOp::Ne; break;
                case TokKind::Lt: op = BinaryOp::Lt; break;
                case TokKind::Le: op = BinaryOp::Le; break;
                case TokKind::Gt: op = BinaryOp::Gt; break;
                case TokKind::Ge: op = BinaryOp::Ge; break;
                default: return lhs;
            }
            take();
            lhs = make_binary(op, std::move(lhs), parse_additive());
        }
    }

    ExprPtr parse_additive() {
        ExprPtr lhs = parse_multiplicative();
        while (at(TokKind::Plus) || at(TokKind::Minus)) {
            const BinaryOp op = take().kind == TokKind::Plus ? BinaryOp::Add : BinaryOp::Sub;
            lhs = make_binary(op, std::move(lhs), parse_multiplicative());
        }
        return lhs;
    }

    ExprPtr parse_multiplicative() {
        ExprPtr lhs = parse_unary();
        while (at(TokKind::Star) || at(TokKind::Slash)) {
            const BinaryOp op = take().kind == TokKind::Star ? BinaryOp::Mul : BinaryOp::Div;
            lhs = make_binary(op, std::move(lhs), parse_unary());
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (at(TokKind::Minus)) {
            take();
            return make_neg(parse_unary());
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        if (at(TokKind::Number)) {
            return make_literal(take().number);
        }
        if (at(TokKind::LParen)) {
            take();
            ExprPtr inner = parse_expr();
            expect(TokKind::RParen, "')'");
            return inner;
        }
        if (at(TokKind::Ident)) {
            if (is_keyword(peek().text)) fail("expected expression");
            return make_ref(std::string(take().text));
        }
        fail("expected expression");
    }

    std::vector<Token> tokens_;
    DiagnosticList& diags_;
    std::size_t pos_ = 0;
};

}  // namespace

ParseResult parse_model(const std::string& text) {
    ParseResult result;
    Lexer lexer(text, result.diagnostics);
    Parser parser(lexer.run(), result.diagnostics);
    result.document = parser.run();
    return result;
}

// --- formatting ---

namespace {

// Precedence contexts, loosest to tightest.
enum : int { kCtxIf = 0, kCtxCmp = 1, kCtxAdd = 2, kCtxMul = 3, kCtxUnary = 4 };

int node_level(const Expr& e) {
    struct Visitor {
        int operator()(const Literal&) const { return 5; }
        int operator()(const Ref&) const { return 5; }
        int operator()(const Neg&) const { return kCtxUnary; }
        int operator()(const Binary& b) const {
            switch (b.op) {
                case BinaryOp::Mul:
                case BinaryOp::Div: return kCtxMul;
                case BinaryOp::Add:
                case BinaryOp::Sub: return kCtxAdd;
                default: return kCtxCmp;
            }
        }
        int operator()(const If&) const { return kCtxIf; }
    };
    return std::visit(Visitor{}, e.node);
}

void format_expr(const Expr& e, int context, std::string& out) {
    const int level = node_level(e);
    const bool parens = level < context;
    if (parens) out += '(';
    struct Visitor {
        int level;
        std::string& out;
        void operator()(const Literal& l) const { out += format_number(l.value); }
        void operator()(const Ref& r) const { out += r.name; }
        void operator()(const Neg& n) const {
            out += '-';
            format_expr(*n.operand, kCtxUnary, out);
        }
        void operator()(const Binary& b) const {
            format_expr(*b.lhs, level, out);
            out += ' ';
            out += binary_op_token(b.op);
            out += ' ';
            format_expr(*b.rhs, level + 1, out);
        }
        void operator()(const If& i) const {
            out += "if ";
            format_expr(*i.cond, kCtxIf, out);
            out += " then ";
            format_expr(*i.then_branch, kCtxIf, out);
            out += " else ";
            format_expr(*i.else_branch, kCtxIf, out);
        }
    };
    std::visit(Visitor{level, out}, e.node);
    if (parens) out += ')';
}

void format_dist(const NoiseDistribution& dist, std::string& out) {
    out += dist_name(dist);
    out += '(';
    struct Visitor {
        std::string& out;
        void operator()(const PointDist& d) const { out += format_number(d.value); }
        void operator()(const NormalDist& d) const {
            out += format_number(d.mean);
            out += ", ";
            out += format_number(d.stddev);
        }
        void operator()(const UniformDist& d) const {
            out += format_number(d.lo);
            out += ", ";
            out += format_number(d.hi);
        }
        void operator()(const CategoricalDist& d) const {
            bool first = true;
            for (double v : d.values) {
                if (!first) out += ", ";
                out += format_number(v);
                first = false;
            }
            for (double p : d.probs) {
                out += ", ";
                out += format_number(p);
            }
        }
    };
    std::visit(Visitor{out}, dist);
    out += ')';
}

}  // namespace

std::string format_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    assert(res.ec == std::errc{});
    return std::string(buf, res.ptr);
}

std::string format_model(const ModelDocument& doc) {
    std::string out;
    for (const auto& stmt : doc.statements) {
        struct Visitor {
            std::string& out;
            void operator()(const NoiseDeclStmt& n) const {
                out += "noise ";
                out += n.spec.name;
                out += " ~ ";
                format_dist(n.spec.dist, out);
            }
            void operator()(const VarDeclStmt& v) const {
                out += "var ";
                out += v.var;
                out += " = ";
                format_expr(*v.expr, kCtxIf, out);
            }
            void operator()(const InverseDeclStmt& i) const {
                out += "inverse ";
                out += i.noise_name;
                out += " = ";
                format_expr(*i.expr, kCtxIf, out);
            }
        };
        std::visit(Visitor{out}, stmt.node);
        out += '\n';
    }
    return out;
}

bool document_equal(const ModelDocument& a, const ModelDocument& b) {
    if (a.statements.size() != b.statements.size()) return false;
    for (std::size_t i = 0; i < a.statements.size(); ++i) {
        const auto& sa = a.statements[i].node;
        const auto& sb = b.statements[i].node;
        if (sa.index() != sb.index()) return false;
        if (const auto* na = std::get_if<NoiseDeclStmt>(&sa)) {
            const auto& nb = std::get<NoiseDeclStmt>(sb);
            if (na->spec.name != nb.spec.name || !dist_equal(na->spec.dist, nb.spec.dist)) {
                return false;
            }
        } else if (const auto* va = std::get_if<VarDeclStmt>(&sa)) {
            const auto& vb = std::get<VarDeclStmt>(sb);
            if (va->var != vb.var || !expr_equal(va->expr, vb.expr)) return false;
        } else {
            const auto& ia = std::get<InverseDeclStmt>(sa);
            const auto& ib = std::get<InverseDeclStmt>(sb);
            if (ia.noise_name != ib.noise_name || !expr_equal(ia.expr, ib.expr)) return false;
        }
    }
    return true;
}

RawModel to_raw_model(const ModelDocument& doc) {
    RawModel raw;
    for (const auto& stmt : doc.statements) {
        struct Visitor {
            RawModel& raw;
            const SourceSpan& span;
            void operator()(const NoiseDeclStmt& n) const {
                raw.noises.push_back({n.spec, span});
            }
            void operator()(const VarDeclStmt& v) const {
                raw.equations.push_back({v.var, v.expr, "", span});
            }
            void operator()(const InverseDeclStmt& i) const {
                raw.inverses.push_back({i.noise_name, i.expr, span});
            }
        };
        std::visit(Visitor{raw, stmt.span}, stmt.node);
    }
    return raw;
}

ValidationResult load_model(const std::string& text) {
    ParseResult parsed = parse_model(text);
    if (!parsed.ok()) {
        return ValidationResult{std::nullopt, std::move(parsed.diagnostics)};
    }
    return validate(to_raw_model(parsed.document));
}

}  // namespace scmi

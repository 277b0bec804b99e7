#include "tickcheck/action.hpp"

#include <cctype>
#include <sstream>

namespace tickcheck::action {

ExprPtr lit(Value v) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Lit;
    e->literal = std::move(v);
    return e;
}

ExprPtr var(const std::string& name) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Var;
    e->name = name;
    return e;
}

ExprPtr unary(Op op, ExprPtr sub) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->lhs = std::move(sub);
    return e;
}

ExprPtr binary(Op op, ExprPtr l, ExprPtr r) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
}

namespace {

struct Tok {
    enum class Kind { Num, Ident, Punct, End } kind = Kind::End;
    std::string text;
    int pos = 0;
};

std::vector<Tok> lex(const std::string& s) {
    std::vector<Tok> out;
    size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        int pos = static_cast<int>(i);
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = i;
            while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
            out.push_back({Tok::Kind::Num, s.substr(start, i - start), pos});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = i;
            while (i < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '.'))
                ++i;
            out.push_back({Tok::Kind::Ident, s.substr(start, i - start), pos});
            continue;
        }
        static const char* two_char[] = {"||", "&&", "<=", ">=", "==", "!="};
        bool matched = false;
        for (const char* op : two_char) {
            if (s.compare(i, 2, op) == 0) {
                out.push_back({Tok::Kind::Punct, op, pos});
                i += 2;
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (std::string("+-*/!<>()=;").find(c) != std::string::npos) {
            out.push_back({Tok::Kind::Punct, std::string(1, c), pos});
            ++i;
            continue;
        }
        throw Error("SyntaxError",
                    "syntax error at position " + std::to_string(pos) + ": unexpected character '" +
                        std::string(1, c) + "'");
    }
    out.push_back({Tok::Kind::End, "", static_cast<int>(s.size())});
    return out;
}

class ExprParser {
  public:
    explicit ExprParser(const std::string& text) : toks_(lex(text)) {}

    ExprPtr parse_full_expr() {
        ExprPtr e = parse_or();
        expect_end();
        return e;
    }

    std::vector<Stmt> parse_stmt_list() {
        std::vector<Stmt> out;
        while (peek().kind != Tok::Kind::End) {
            const Tok& name = peek();
            if (name.kind != Tok::Kind::Ident) fail(name, "expected assignment target");
            take();
            if (!accept_punct("=")) fail(peek(), "expected '='");
            ExprPtr rhs = parse_or();
            if (!accept_punct(";")) fail(peek(), "expected ';'");
            out.push_back(Stmt{name.text, std::move(rhs), name.pos});
        }
        return out;
    }

    ExprPtr parse_or() {
        ExprPtr e = parse_and();
        while (accept_punct("||")) e = binary(Op::Or, e, parse_and());
        return e;
    }

  private:
    ExprPtr parse_and() {
        ExprPtr e = parse_cmp();
        while (accept_punct("&&")) e = binary(Op::And, e, parse_cmp());
        return e;
    }

    ExprPtr parse_cmp() {
        ExprPtr e = parse_add();
        static const std::pair<const char*, Op> ops[] = {
            {"<=", Op::Le}, {">=", Op::Ge}, {"==", Op::Eq},
            {"!=", Op::Ne}, {"<", Op::Lt},  {">", Op::Gt},
        };
        for (const auto& [text, op] : ops) {
            if (accept_punct(text)) return binary(op, e, parse_add());
        }
        return e;
    }

    ExprPtr parse_add() {
        ExprPtr e = parse_mul();
        while (true) {
            if (accept_punct("+")) {
                e = binary(Op::Add, e, parse_mul());
            } else if (accept_punct("-")) {
                e = binary(Op::Sub, e, parse_mul());
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_mul() {
        ExprPtr e = parse_unary();
        while (true) {
            if (accept_punct("*")) {
                e = binary(Op::Mul, e, parse_unary());
            } else if (accept_punct("/")) {
                e = binary(Op::Div, e, parse_unary());
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_unary() {
        if (accept_punct("!")) return unary(Op::Not, parse_unary());
        if (accept_punct("-")) return unary(Op::Neg, parse_unary());
        return parse_atom();
    }

    ExprPtr parse_atom() {
        const Tok& t = peek();
        if (t.kind == Tok::Kind::Num) {
            take();
            ExprPtr e;
            if (t.text.find('.') != std::string::npos) {
                e = lit(Value(parse_rational(t.text)));
            } else {
                e = lit(Value(mpz_class(t.text)));
            }
            const_cast<Expr*>(e.get())->pos = t.pos;
            return e;
        }
        if (t.kind == Tok::Kind::Ident) {
            take();
            ExprPtr e;
            if (t.text == "true") {
                e = lit(Value(true));
            } else if (t.text == "false") {
                e = lit(Value(false));
            } else {
                e = var(t.text);
            }
            const_cast<Expr*>(e.get())->pos = t.pos;
            return e;
        }
        if (accept_punct("(")) {
            ExprPtr e = parse_or();
            if (!accept_punct(")")) fail(peek(), "expected ')'");
            return e;
        }
        fail(t, "expected a value");
        return nullptr;
    }

    const Tok& peek() const { return toks_[pos_]; }
    const Tok& take() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }
    bool accept_punct(const std::string& p) {
        if (peek().kind == Tok::Kind::Punct && peek().text == p) {
            take();
            return true;
        }
        return false;
    }
    void expect_end() {
        if (peek().kind != Tok::Kind::End) fail(peek(), "unexpected trailing input");
    }
    [[noreturn]] void fail(const Tok& t, const std::string& what) const {
        throw Error("SyntaxError",
                    "syntax error at position " + std::to_string(t.pos) + ": " + what);
    }

    std::vector<Tok> toks_;
    size_t pos_ = 0;
};

bool is_int_literal(const ExprPtr& e) {
    if (e->op == Op::Lit) return e->literal.type() == ValueType::Int;
    if (e->op == Op::Neg) return is_int_literal(e->lhs);
    return false;
}

[[noreturn]] void type_fail(const ExprPtr& e, const std::string& what) {
    throw Error("TypeError", "type error at position " + std::to_string(e->pos) + ": " + what);
}

}  // namespace

ExprPtr parse_expr(const std::string& text) { return ExprParser(text).parse_full_expr(); }

std::vector<Stmt> parse_stmts(const std::string& text) { return ExprParser(text).parse_stmt_list(); }

ValueType typecheck(const ExprPtr& e, const TypeEnv& env) {
    switch (e->op) {
        case Op::Lit:
            return e->literal.type();
        case Op::Var: {
            auto it = env.find(e->name);
            if (it == env.end())
                throw Error("UnboundVariable", "unbound variable '" + e->name + "'");
            return it->second;
        }
        case Op::Neg: {
            ValueType t = typecheck(e->lhs, env);
            if (t == ValueType::Bool) type_fail(e->lhs, "cannot negate a Bool");
            return t;
        }
        case Op::Not: {
            if (typecheck(e->lhs, env) != ValueType::Bool)
                type_fail(e->lhs, "'!' needs a Bool operand");
            return ValueType::Bool;
        }
        case Op::And:
        case Op::Or: {
            if (typecheck(e->lhs, env) != ValueType::Bool)
                type_fail(e->lhs, "logical operator needs Bool operands");
            if (typecheck(e->rhs, env) != ValueType::Bool)
                type_fail(e->rhs, "logical operator needs Bool operands");
            return ValueType::Bool;
        }
        default: {
            ValueType lt = typecheck(e->lhs, env);
            ValueType rt = typecheck(e->rhs, env);
            if (lt == ValueType::Bool) type_fail(e->lhs, "numeric operator applied to Bool");
            if (rt == ValueType::Bool) type_fail(e->rhs, "numeric operator applied to Bool");
            ValueType joined;
            if (lt == rt) {
                joined = lt;
            } else if (lt == ValueType::Int && is_int_literal(e->lhs)) {
                joined = ValueType::Real;  // literal widens
            } else if (rt == ValueType::Int && is_int_literal(e->rhs)) {
                joined = ValueType::Real;
            } else {
                type_fail(e->rhs, "mixing Int and Real requires an Int literal");
            }
            bool is_cmp = e->op == Op::Lt || e->op == Op::Le || e->op == Op::Gt ||
                          e->op == Op::Ge || e->op == Op::Eq || e->op == Op::Ne;
            return is_cmp ? ValueType::Bool : joined;
        }
    }
}

void typecheck_stmt(const Stmt& s, const TypeEnv& env) {
    auto it = env.find(s.target);
    if (it == env.end()) throw Error("UnboundVariable", "unbound variable '" + s.target + "'");
    ValueType rt = typecheck(s.rhs, env);
    if (rt == it->second) return;
    // Int literal on the right of a Real variable widens.
    if (it->second == ValueType::Real && rt == ValueType::Int && is_int_literal(s.rhs)) return;
    throw Error("TypeError", "cannot assign " + tickcheck::to_string(rt) + " to '" + s.target +
                                 "' of type " + tickcheck::to_string(it->second));
}

mpz_class smt_div(const mpz_class& a, const mpz_class& b) {
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (b < 0 && r != 0) q += 1;  // Euclidean: remainder in [0, |b|)
    return q;
}

Value eval_concrete(const ExprPtr& e, const Store& store) {
    switch (e->op) {
        case Op::Lit:
            return e->literal;
        case Op::Var: {
            auto it = store.find(e->name);
            if (it == store.end())
                throw Error("UnboundVariable", "no value for variable '" + e->name + "'");
            return it->second;
        }
        case Op::Neg: {
            Value v = eval_concrete(e->lhs, store);
            if (v.type() == ValueType::Int) return Value(mpz_class(-v.as_int()));
            return Value(Rational(-v.as_real()));
        }
        case Op::Not:
            return Value(!eval_concrete(e->lhs, store).as_bool());
        case Op::And: {
            if (!eval_concrete(e->lhs, store).as_bool()) return Value(false);
            return eval_concrete(e->rhs, store);
        }
        case Op::Or: {
            if (eval_concrete(e->lhs, store).as_bool()) return Value(true);
            return eval_concrete(e->rhs, store);
        }
        default: {
            Value l = eval_concrete(e->lhs, store);
            Value r = eval_concrete(e->rhs, store);
            bool both_int = l.type() == ValueType::Int && r.type() == ValueType::Int;
            if (both_int) {
                const mpz_class& a = l.as_int();
                const mpz_class& b = r.as_int();
                switch (e->op) {
                    case Op::Add: return Value(mpz_class(a + b));
                    case Op::Sub: return Value(mpz_class(a - b));
                    case Op::Mul: return Value(mpz_class(a * b));
                    case Op::Div:
                        if (b == 0) throw Error("DivisionByZero", "integer division by zero");
                        return Value(smt_div(a, b));
                    case Op::Lt: return Value(a < b);
                    case Op::Le: return Value(a <= b);
                    case Op::Gt: return Value(a > b);
                    case Op::Ge: return Value(a >= b);
                    case Op::Eq: return Value(a == b);
                    default: return Value(a != b);
                }
            }
            Rational a = l.as_rational();
            Rational b = r.as_rational();
            switch (e->op) {
                case Op::Add: return Value(Rational(a + b));
                case Op::Sub: return Value(Rational(a - b));
                case Op::Mul: return Value(Rational(a * b));
                case Op::Div:
                    if (b == 0) throw Error("DivisionByZero", "division by zero");
                    return Value(Rational(a / b));
                case Op::Lt: return Value(a < b);
                case Op::Le: return Value(a <= b);
                case Op::Gt: return Value(a > b);
                case Op::Ge: return Value(a >= b);
                case Op::Eq: return Value(a == b);
                default: return Value(a != b);
            }
        }
    }
}

std::string to_string(const ExprPtr& e) {
    std::ostringstream os;
    switch (e->op) {
        case Op::Lit:
            if (e->literal.type() == ValueType::Bool) {
                os << (e->literal.as_bool() ? "true" : "false");
            } else if (e->literal.type() == ValueType::Int) {
                os << e->literal.as_int();
            } else {
                os << rational_to_string(e->literal.as_real());
            }
            break;
        case Op::Var: os << e->name; break;
        case Op::Neg: os << "(-" << to_string(e->lhs) << ")"; break;
        case Op::Not: os << "(!" << to_string(e->lhs) << ")"; break;
        default: {
            const char* op = "?";
            switch (e->op) {
                case Op::Add: op = "+"; break;
                case Op::Sub: op = "-"; break;
                case Op::Mul: op = "*"; break;
                case Op::Div: op = "/"; break;
                case Op::Lt: op = "<"; break;
                case Op::Le: op = "<="; break;
                case Op::Gt: op = ">"; break;
                case Op::Ge: op = ">="; break;
                case Op::Eq: op = "=="; break;
                case Op::Ne: op = "!="; break;
                case Op::And: op = "&&"; break;
                case Op::Or: op = "||"; break;
                default: break;
            }
            os << "(" << to_string(e->lhs) << " " << op << " " << to_string(e->rhs) << ")";
        }
    }
    return os.str();
}

}  // namespace tickcheck::action

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tickcheck/value.hpp"

namespace tickcheck::action {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class Op {
    Lit,
    Var,
    Neg,
    Not,
    Add,
    Sub,
    Mul,
    Div,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
};

struct Expr {
    Op op = Op::Lit;
    Value literal;       // Op::Lit
    std::string name;    // Op::Var
    ExprPtr lhs, rhs;    // unary ops use lhs only
    int pos = 0;         // 0-based character offset in the source text
};

struct Stmt {
    std::string target;
    ExprPtr rhs;
    int pos = 0;
};

using TypeEnv = std::map<std::string, ValueType>;
using Store = std::map<std::string, Value>;

ExprPtr lit(Value v);
ExprPtr var(const std::string& name);
ExprPtr unary(Op op, ExprPtr e);
ExprPtr binary(Op op, ExprPtr l, ExprPtr r);

// Grammar: or-expr with standard precedence; a single non-associative
// comparison level; unary ! and -. true/false are boolean literals,
// unsuffixed integer literals are Int, decimals are Real.
// Throws Error("SyntaxError") with the failing offset in the message.
ExprPtr parse_expr(const std::string& text);

// Zero or more `IDENT = expr ;` statements.
std::vector<Stmt> parse_stmts(const std::string& text);

// Returns the expression type or throws Error("TypeError") /
// Error("UnboundVariable"). Int literals widen to Real when the other
// operand is Real; variables never widen implicitly.
ValueType typecheck(const ExprPtr& e, const TypeEnv& env);
void typecheck_stmt(const Stmt& s, const TypeEnv& env);

// Big-step evaluation with exact arithmetic. Int division follows the
// SMT-LIB Ints `div` convention. Throws Error("DivisionByZero").
Value eval_concrete(const ExprPtr& e, const Store& store);

// SMT-LIB Ints semantics: remainder is always in [0, |divisor|).
mpz_class smt_div(const mpz_class& a, const mpz_class& b);

std::string to_string(const ExprPtr& e);

}  // namespace tickcheck::action

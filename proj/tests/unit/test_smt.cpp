#include <functional>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "tickcheck/smt.hpp"
#include "tickcheck/verify.hpp"

using namespace tickcheck;
using testutil::load_model;
using testutil::solver_command;

TEST_CASE("formula helpers") {
    CHECK(smt::app("=", {"a", "b"}) == "(= a b)");
    CHECK(smt::conj({}) == "true");
    CHECK(smt::disj({}) == "false");
    CHECK(smt::conj({"p"}) == "p");
    CHECK(smt::conj({"p", "q"}) == "(and p q)");
    CHECK(smt::implies("p", "q") == "(=> p q)");
}

TEST_CASE("init_context declares one symbol per signal per step") {
    auto m = load_model("gainline.mdl");
    auto ctx = smt::init_context(m, 3);
    int u_syms = 0;
    for (const auto& d : ctx.declarations())
        if (d.name.rfind("u_o1__", 0) == 0) ++u_syms;
    CHECK(u_syms == 3);
}

TEST_CASE("init_context pins the UnitDelay initial value at step 0") {
    auto m = load_model("counter.mdl");
    auto ctx = smt::init_context(m, 2);
    bool found = false;
    for (const auto& a : ctx.assertions())
        if (a == "(= Count_o1__0 0.0)" || a == "(= Count_o1__0 0)") found = true;
    CHECK(found);
}

TEST_CASE("state activities are constrained to 0/1") {
    auto m = load_model("toggle.mdl");
    auto ctx = smt::init_context(m, 2);
    int domain = 0;
    for (const auto& a : ctx.assertions())
        if (a.find("(or (= Toggle_s1") == 0) ++domain;
    CHECK(domain == 4);  // 2 states x 2 steps
}

TEST_CASE("encode_lines adds one equality per connection per step") {
    auto m = load_model("gainline.mdl");  // 2 connections
    auto ctx = smt::init_context(m, 2);
    size_t before = ctx.assertions().size();
    smt::encode_lines(ctx);
    CHECK(ctx.assertions().size() - before == 4);
}

TEST_CASE("emit rejects assertions over undeclared symbols") {
    auto m = load_model("gainline.mdl");
    auto ctx = smt::init_context(m, 1);
    ctx.add_assertion("(= mystery__0 1)");
    try {
        smt::emit_script(ctx, "true", smt::Polarity::Assert);
        FAIL("expected UndeclaredSymbol");
    } catch (const Error& err) {
        CHECK(err.code() == "UndeclaredSymbol");
    }
}

TEST_CASE("emit_smtlib is byte-deterministic") {
    auto m = load_model("logicpath.mdl");
    auto a = smt::emit_smtlib(smt::encode_model(m, 5), "true", smt::Polarity::Assert);
    auto b = smt::emit_smtlib(smt::encode_model(m, 5), "true", smt::Polarity::Assert);
    CHECK(a == b);
}

TEST_CASE("trivial goals: assert-negated true is unsat, asserted is sat") {
    model::SystemModel empty;
    smt::EncodingContext ctx(empty, 1);
    auto neg = smt::emit_script(ctx, "true", smt::Polarity::AssertNegated);
    auto res = verify::run_solver(solver_command(), neg.to_text());
    CHECK(res.status == verify::SolverStatus::Unsat);
    auto pos = smt::emit_script(ctx, "true", smt::Polarity::Assert);
    CHECK(verify::run_solver(solver_command(), pos.to_text()).status ==
          verify::SolverStatus::Sat);
}

TEST_CASE("a constant output is forced: negated equality is unsat") {
    auto m = load_model("counter.mdl");
    auto ctx = smt::encode_model(m, 1);
    std::string goal = "(= One_o1__0 1.0)";
    CHECK(verify::run_solver(solver_command(),
                             smt::emit_script(ctx, goal, smt::Polarity::AssertNegated).to_text())
              .status == verify::SolverStatus::Unsat);
    CHECK(verify::run_solver(solver_command(),
                             smt::emit_script(ctx, goal, smt::Polarity::Assert).to_text())
              .status == verify::SolverStatus::Sat);
}

TEST_CASE("prefixed contexts keep independent runs apart in one script") {
    auto m = load_model("counter.mdl");
    auto a = smt::encode_model(m, 2, nullptr, nullptr, "r0_");
    for (const auto& d : a.declarations()) CHECK(d.name.rfind("r0_", 0) == 0);
}

TEST_CASE("fuzz: expression encoding agrees with concrete evaluation (one batched query)") {
    // 1000 random closed terms; each is encoded over literal bindings,
    // asserted equal to an indicator constant, and read back via get-value.
    std::mt19937_64 rng(2024);
    model::SystemModel empty;
    smt::EncodingContext ctx(empty, 1);
    action::Store st{{"b", Value(true)}, {"i", Value(3LL)}, {"x", Value(Rational(1, 2))}};
    smt::TermEnv tenv{{"b", {"true", ValueType::Bool}},
                      {"i", {"3", ValueType::Int}},
                      {"x", {"(/ 1.0 2.0)", ValueType::Real}}};

    auto coin = [&](int n) { return static_cast<int>(rng() % n); };
    std::function<action::ExprPtr(ValueType, int)> gen = [&](ValueType want,
                                                             int depth) -> action::ExprPtr {
        using namespace action;
        if (depth <= 0) {
            if (want == ValueType::Bool) return coin(2) ? var("b") : lit(Value(coin(2) == 1));
            if (want == ValueType::Int)
                return coin(2) ? var("i") : lit(Value(static_cast<long long>(coin(9)) - 4));
            return coin(2) ? var("x") : lit(Value(Rational(coin(9) - 4, 1 + coin(3))));
        }
        if (want == ValueType::Bool) {
            switch (coin(4)) {
                case 0: return unary(Op::Not, gen(ValueType::Bool, depth - 1));
                case 1:
                    return binary(coin(2) ? Op::And : Op::Or, gen(ValueType::Bool, depth - 1),
                                  gen(ValueType::Bool, depth - 1));
                default: {
                    ValueType t = coin(2) ? ValueType::Int : ValueType::Real;
                    Op cmp[] = {Op::Lt, Op::Le, Op::Gt, Op::Ge, Op::Eq, Op::Ne};
                    return binary(cmp[coin(6)], gen(t, depth - 1), gen(t, depth - 1));
                }
            }
        }
        if (coin(4) == 0) return unary(Op::Neg, gen(want, depth - 1));
        Op arith[] = {Op::Add, Op::Sub, Op::Mul};
        return binary(arith[coin(3)], gen(want, depth - 1), gen(want, depth - 1));
    };

    std::vector<Value> expected;
    std::vector<std::string> names;
    for (int k = 0; k < 1000; ++k) {
        ValueType want = static_cast<ValueType>(k % 3);
        auto e = gen(want, 4);
        expected.push_back(action::eval_concrete(e, st));
        smt::Term t = smt::encode_expr(e, tenv);
        REQUIRE(t.type == want);
        std::string name = "t" + std::to_string(k);
        ctx.declare_const(name, want);
        ctx.add_assertion(smt::app("=", {name, t.text}));
        names.push_back(name);
    }
    auto script = smt::emit_script(ctx, "true", smt::Polarity::Assert, names);
    auto res = verify::run_solver(solver_command(), script.to_text());
    REQUIRE(res.status == verify::SolverStatus::Sat);
    for (int k = 0; k < 1000; ++k) {
        CAPTURE(k);
        REQUIRE(res.assignment.count(names[static_cast<size_t>(k)]) == 1);
        CHECK(res.assignment.at(names[static_cast<size_t>(k)]) ==
              expected[static_cast<size_t>(k)]);
    }
}

#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "tickcheck/verify.hpp"

using namespace tickcheck;
using namespace tickcheck::verify;
using testutil::fixture_path;
using testutil::load_model;
using testutil::solver_command;

TEST_CASE("solver output parsing: statuses") {
    CHECK(parse_solver_output("unsat\n").status == SolverStatus::Unsat);
    CHECK(parse_solver_output("unknown\n").status == SolverStatus::Unknown);
    auto sat = parse_solver_output("sat\n((define-fun x__0 () Int 3))\n");
    CHECK(sat.status == SolverStatus::Sat);
    REQUIRE(sat.assignment.count("x__0") == 1);
    CHECK(sat.assignment.at("x__0") == Value(3LL));
    CHECK_THROWS_AS(parse_solver_output("timeout\n"), Error);
    CHECK_THROWS_AS(parse_solver_output(""), Error);
}

TEST_CASE("solver output parsing: sorts, negatives and rationals") {
    auto r = parse_solver_output(
        "sat\n((define-fun a__0 () Real (- (/ 5.0 2.0)))\n"
        " (define-fun b__1 () Bool true)\n"
        " (define-fun n__2 () Int (- 4)))\n");
    CHECK(r.assignment.at("a__0") == Value(Rational(-5, 2)));
    CHECK(r.assignment.at("b__1") == Value(true));
    CHECK(r.assignment.at("n__2") == Value(-4LL));
}

TEST_CASE("run_solver surfaces spawn failures as SolverError") {
    auto r = run_solver("/nonexistent/solver-binary", "(check-sat)\n");
    CHECK(r.status == SolverStatus::SolverError);
}

TEST_CASE("scenario sampling is deterministic and respects distributions") {
    auto m = load_model("randsrc.mdl");
    auto p1 = sample_scenario(m, 8, 123, 4);
    auto p2 = sample_scenario(m, 8, 123, 4);
    CHECK(p1 == p2);
    auto p3 = sample_scenario(m, 8, 123, 5);
    CHECK(p1 != p3);
    // every (source, step) pair is pinned
    int sources = 0;
    for (const auto& b : m.blocks)
        if (b.kind == model::BlockKind::RandomSource) ++sources;
    CHECK(static_cast<long long>(p1.size()) == sources * 8);
    for (const auto& [key, v] : p1) {
        const auto* b = m.find_block(key.first);
        REQUIRE(b != nullptr);
        using DK = model::Distribution::Kind;
        switch (b->dist.kind) {
            case DK::UniformReal:
                CHECK(v.as_rational() >= b->dist.lo);
                CHECK(v.as_rational() <= b->dist.hi);
                break;
            case DK::UniformInt:
                CHECK(v.as_rational() >= b->dist.lo);
                CHECK(v.as_rational() <= b->dist.hi);
                break;
            case DK::Bernoulli:
                CHECK((v.as_rational() == 0 || v.as_rational() == 1));
                break;
            case DK::DiscreteChoice: {
                bool member = false;
                for (const auto& cand : b->dist.values)
                    if (v.as_rational() == cand) member = true;
                CHECK(member);
                break;
            }
        }
    }
}

TEST_CASE("a model without random sources has an empty scenario") {
    auto m = load_model("counter.mdl");
    CHECK(sample_scenario(m, 10, 1, 0).empty());
}

TEST_CASE("a degenerate bernoulli pins the sure branch everywhere") {
    auto parsed = mdl::parse_text(
        "Model { System { "
        "Block { BlockType RandomSource id 1 Name \"B\" Distribution \"Bernoulli\" P \"1\" } "
        "Block { BlockType Outport id 2 Name \"y\" Port 1 } "
        "Line { SrcBlock 1 SrcPort 1 DstBlock 2 DstPort 1 } } }");
    REQUIRE(parsed.root.has_value());
    auto elab = model::elaborate(*parsed.root);
    REQUIRE(elab.model.has_value());
    for (const auto& [key, v] : sample_scenario(*elab.model, 16, 77, 0))
        CHECK(v == Value(Rational(1)));
}

TEST_CASE("deterministic mode rejects models with random sources") {
    VerificationTask task;
    task.model_path = fixture_path("randsrc.mdl");
    task.spec_path = fixture_path("bernoulli.tcs");
    task.mode = Mode::Deterministic;
    task.solver_cmd = solver_command();
    std::vector<Diagnostic> diags;
    auto loaded = load_task(task, diags);
    CHECK_FALSE(loaded.has_value());
    bool found = false;
    for (const auto& d : diags)
        if (d.code == "ModeError") found = true;
    CHECK(found);
}

TEST_CASE("threshold monotonicity of the decision rule") {
    VerificationTask task;
    task.model_path = fixture_path("bernoulli_high.mdl");
    task.spec_path = fixture_path("bernoulli.tcs");
    task.mode = Mode::Probabilistic;
    task.bound = 6;
    task.runs = 40;
    task.seed = 5;
    task.solver_cmd = solver_command();
    std::vector<Diagnostic> diags;
    auto loaded = load_task(task, diags);
    REQUIRE(loaded.has_value());
    Rational estimate;
    Result at_observed;
    {
        task.threshold = Rational(19, 20);
        auto v = run_probabilistic(task, *loaded, loaded->spec.constraints[0]);
        estimate = v.estimate;
        at_observed = v.result;
        (void)at_observed;
    }
    // validity at the exact estimate, invalidity just above it
    task.threshold = estimate;
    CHECK(run_probabilistic(task, *loaded, loaded->spec.constraints[0]).result ==
          Result::Valid);
    if (estimate < 1) {
        task.threshold = estimate + Rational(1, 1000);
        CHECK(run_probabilistic(task, *loaded, loaded->spec.constraints[0]).result ==
              Result::Invalid);
    }
}

TEST_CASE("per-run outcomes do not depend on verification order") {
    // same task twice, constraints evaluated in reverse declaration order
    VerificationTask task;
    task.model_path = fixture_path("minicas.mdl");
    task.spec_path = fixture_path("minicas.tcs");
    task.mode = Mode::Probabilistic;
    task.bound = 30;
    task.runs = 4;
    task.seed = 9;
    task.solver_cmd = solver_command();
    std::vector<Diagnostic> diags;
    auto loaded = load_task(task, diags);
    REQUIRE(loaded.has_value());
    auto first = run_probabilistic(task, *loaded, loaded->spec.constraints[6]);
    auto again = run_probabilistic(task, *loaded, loaded->spec.constraints[6]);
    CHECK(first.sat_runs == again.sat_runs);
    CHECK(first.result == again.result);
}

TEST_CASE("report rendering: table rows and json schema") {
    Report rep;
    rep.version = "1.0.0";
    rep.task.model_path = "m.mdl";
    rep.task.spec_path = "s.tcs";
    Verdict v;
    v.name = "c1";
    v.kind = "periodic";
    v.result = Result::Valid;
    v.sat_runs = 1;
    v.total_runs = 1;
    v.estimate = Rational(1);
    v.threshold = Rational(1);
    rep.verdicts.push_back(v);
    auto table = render_report(rep, ReportFormat::Table);
    CHECK(table.find("c1") != std::string::npos);
    CHECK(table.find("valid") != std::string::npos);

    Verdict w = v;
    w.name = "c2";
    w.result = Result::Invalid;
    rep.verdicts.push_back(w);
    auto json = render_report(rep, ReportFormat::Json);
    for (const char* key : {"\"version\"", "\"task\"", "\"verdicts\"", "\"name\"", "\"kind\"",
                            "\"result\"", "\"sat_runs\"", "\"total_runs\"", "\"estimate\"",
                            "\"threshold\"", "\"vacuous_runs\"", "\"wall_time_ms\""}) {
        CAPTURE(key);
        CHECK(json.find(key) != std::string::npos);
    }
    CHECK(json.find("\"c2\"") != std::string::npos);
    CHECK(json.find("\"invalid\"") != std::string::npos);
}

TEST_CASE("exit codes: undetermined dominates invalid dominates valid") {
    Report rep;
    rep.verdicts.push_back(Verdict{});
    rep.verdicts.back().result = Result::Valid;
    CHECK(exit_code(rep) == 0);
    rep.verdicts.push_back(Verdict{});
    rep.verdicts.back().result = Result::Invalid;
    CHECK(exit_code(rep) == 1);
    rep.verdicts.push_back(Verdict{});
    rep.verdicts.back().result = Result::Undetermined;
    CHECK(exit_code(rep) == 2);
    Report bad;
    bad.diagnostics.push_back(error_diag("SyntaxError", "boom"));
    CHECK(exit_code(bad) == 3);
}

TEST_CASE("deterministic validity on the toggle spec") {
    VerificationTask task;
    task.model_path = fixture_path("toggle.mdl");
    task.spec_path = fixture_path("toggle.tcs");
    task.mode = Mode::Deterministic;
    task.bound = 20;
    task.solver_cmd = solver_command();
    auto rep = run_task(task);
    REQUIRE(rep.usable());
    REQUIRE(rep.verdicts.size() == 3);
    for (const auto& v : rep.verdicts) {
        CAPTURE(v.name);
        CHECK(v.result == Result::Valid);
    }
    CHECK(exit_code(rep) == 0);
}

TEST_CASE("deterministic invalidity yields a counterexample trace") {
    VerificationTask task;
    task.model_path = fixture_path("gainline.mdl");
    task.spec_path = fixture_path("gainline.tcs");
    task.mode = Mode::Deterministic;
    task.bound = 10;
    task.solver_cmd = solver_command();
    auto rep = run_task(task);
    REQUIRE(rep.usable());
    REQUIRE(rep.verdicts.size() == 1);
    CHECK(rep.verdicts[0].result == Result::Invalid);
    CHECK_FALSE(rep.verdicts[0].counterexample.empty());
    CHECK(exit_code(rep) == 1);
}

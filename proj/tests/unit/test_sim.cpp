#include "doctest.h"
#include "helpers.hpp"
#include "tickcheck/ccsl.hpp"
#include "tickcheck/sim.hpp"

using namespace tickcheck;
using testutil::load_model;

namespace {

std::vector<Value> column(const sim::Trace& t, const std::string& base) {
    return t.at(base);
}

}  // namespace

TEST_CASE("counter loop: delayed output counts from zero") {
    auto m = load_model("counter.mdl");
    auto t = sim::simulate(m, 4);
    auto out = column(t, "Count_o1");
    REQUIRE(out.size() == 4);
    for (long long i = 0; i < 4; ++i) CHECK(out[static_cast<size_t>(i)] == Value(i));
}

TEST_CASE("toggle chart alternates activity every step") {
    auto m = load_model("toggle.mdl");
    auto t = sim::simulate(m, 4);
    auto a = column(t, "Toggle_s11");
    auto b = column(t, "Toggle_s12");
    for (int i = 0; i < 4; ++i) {
        CHECK(a[static_cast<size_t>(i)] == Value(static_cast<long long>(i % 2 == 0 ? 1 : 0)));
        CHECK(b[static_cast<size_t>(i)] == Value(static_cast<long long>(i % 2 == 0 ? 0 : 1)));
    }
}

TEST_CASE("gain scales a pinned input pointwise") {
    auto m = load_model("gainline.mdl");
    sim::InputMap inputs;
    inputs[1] = {Value(Rational(1)), Value(Rational(2))};
    auto t = sim::simulate(m, 2, {}, inputs);
    auto y = column(t, "G_o1");
    CHECK(y[0] == Value(Rational(5, 2)));
    CHECK(y[1] == Value(Rational(5)));
}

TEST_CASE("simulation is deterministic in its arguments") {
    auto m = load_model("randsrc.mdl");
    auto pins = verify::sample_scenario(m, 6, 99, 3);
    auto t1 = sim::simulate(m, 6, pins);
    auto t2 = sim::simulate(m, 6, pins);
    for (const auto& [base, vals] : t1.vals) {
        for (size_t i = 0; i < vals.size(); ++i) CHECK(vals[i] == t2.at(base)[i]);
    }
}

TEST_CASE("missing random pins are rejected") {
    auto m = load_model("randsrc.mdl");
    CHECK_THROWS_AS(sim::simulate(m, 3), Error);
}

TEST_CASE("hierarchy partition holds at every step of every chart trace") {
    for (const char* name : {"hierarchy.mdl", "chartdata.mdl", "minicas_det.mdl"}) {
        CAPTURE(name);
        auto m = load_model(name);
        auto t = sim::simulate(m, 30);
        for (const auto& chart : m.charts) {
            // root level activities sum to 1
            for (long long i = 0; i < t.bound; ++i) {
                mpz_class root_sum = 0;
                for (long long sid : chart.root_states)
                    root_sum +=
                        t.at(model::act_symbol(chart, sid))[static_cast<size_t>(i)].as_int();
                CHECK(root_sum == 1);
                for (const auto& [sid, st] : chart.states) {
                    if (st.substates.empty()) continue;
                    mpz_class sum = 0;
                    for (long long sub : st.substates)
                        sum +=
                            t.at(model::act_symbol(chart, sub))[static_cast<size_t>(i)].as_int();
                    CHECK(sum == t.at(model::act_symbol(chart, sid))[static_cast<size_t>(i)]
                                     .as_int());
                }
            }
        }
    }
}

TEST_CASE("derive_ticks: rising edge definition") {
    auto m = load_model("gainline.mdl");
    sim::InputMap inputs;
    inputs[1] = {Value(Rational(-1)), Value(Rational(3)), Value(Rational(4))};
    auto t = sim::simulate(m, 3, {}, inputs);
    ccsl::Clock c;
    c.name = "pos";
    c.source = ccsl::Clock::Source::Rising;
    c.expr = action::parse_expr("u > 0");
    sim::derive_ticks(m, t, {c});
    CHECK(t.ticks_of("pos") == std::vector<bool>{false, true, false});
}

TEST_CASE("derive_ticks: every(k) is an arithmetic progression") {
    auto m = load_model("counter.mdl");
    auto t = sim::simulate(m, 7);
    ccsl::Clock c;
    c.name = "e3";
    c.source = ccsl::Clock::Source::Every;
    c.period = 3;
    c.offset = 0;
    sim::derive_ticks(m, t, {c});
    CHECK(t.ticks_of("e3") == std::vector<bool>{true, false, false, true, false, false, true});
}

TEST_CASE("derive_ticks: entered fires on activation edges only") {
    auto m = load_model("toggle.mdl");
    auto t = sim::simulate(m, 4);
    ccsl::Clock a, b;
    a.name = "ea";
    a.source = ccsl::Clock::Source::Entered;
    a.state_path = "Toggle.A";
    b.name = "eb";
    b.source = ccsl::Clock::Source::Entered;
    b.state_path = "Toggle.B";
    sim::derive_ticks(m, t, {a, b});
    CHECK(t.ticks_of("ea") == std::vector<bool>{true, false, true, false});
    CHECK(t.ticks_of("eb") == std::vector<bool>{false, true, false, true});
}

TEST_CASE("entered on an always-active state ticks once at step 0") {
    auto m = load_model("chartdata.mdl");
    auto t = sim::simulate(m, 2);  // Idle stays active for the first two steps
    ccsl::Clock c;
    c.name = "ei";
    c.source = ccsl::Clock::Source::Entered;
    c.state_path = "Detector.Idle";
    sim::derive_ticks(m, t, {c});
    CHECK(t.ticks_of("ei") == std::vector<bool>{true, false});
}

TEST_CASE("history junction restores the last active substate") {
    auto m = load_model("hierarchy.mdl");
    auto t = sim::simulate(m, 12);
    auto high = column(t, "Modes_s24");
    auto low = column(t, "Modes_s23");
    // first entry goes to the default substate Low, re-entry resumes High
    CHECK(low[3] == Value(1LL));
    CHECK(high[5] == Value(1LL));
    CHECK(high[8] == Value(1LL));  // resumed via history, not Low
    CHECK(low[8] == Value(0LL));
}

TEST_CASE("csv dump has the step header and exact rationals") {
    auto m = load_model("gainline.mdl");
    sim::InputMap inputs;
    inputs[1] = {Value(Rational(1, 3))};
    auto t = sim::simulate(m, 1, {}, inputs);
    auto csv = sim::to_csv(t);
    CHECK(csv.rfind("step,", 0) == 0);
    CHECK(csv.find("5/6") != std::string::npos);  // 2.5 * 1/3
}

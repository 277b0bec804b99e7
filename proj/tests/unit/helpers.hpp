#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include "tickcheck/ccsl.hpp"
#include "tickcheck/mdl.hpp"
#include "tickcheck/model.hpp"
#include "tickcheck/smt.hpp"
#include "tickcheck/verify.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
    const char* dir = std::getenv("TICKCHECK_FIXTURES");
    return std::string(dir ? dir : "tests/fixtures") + "/" + name;
}

inline std::string solver_command() {
    const char* cmd = std::getenv("TICKCHECK_SOLVER");
    return cmd ? cmd : "";
}

inline tickcheck::model::SystemModel load_model(const std::string& name) {
    using namespace tickcheck;
    auto parsed = mdl::parse_file(fixture_path(name));
    if (!parsed.root) throw Error("FixtureError", "parse failed: " + name);
    auto elab = model::elaborate(*parsed.root);
    if (!elab.model) throw Error("FixtureError", "elaborate failed: " + name);
    return std::move(*elab.model);
}

inline tickcheck::ccsl::TcsSpec load_spec(const std::string& name) {
    using namespace tickcheck;
    auto parsed = ccsl::parse_tcs_file(fixture_path(name));
    if (!parsed.spec) throw Error("FixtureError", "tcs parse failed: " + name);
    return std::move(*parsed.spec);
}

// Declares and pins a Bool tick vector `ck_<name>` plus its history
// counter, so CCSL formulas can be evaluated over a fixed trace.
inline void pin_ticks(tickcheck::smt::EncodingContext& ctx, const std::string& clock,
                      const std::vector<bool>& ticks) {
    using namespace tickcheck;
    std::string ck = ccsl::tick_symbol(clock);
    ctx.declare_vector(ck, ValueType::Bool, ctx.bound());
    for (long long i = 0; i < ctx.bound(); ++i)
        ctx.add_assertion(smt::app("=", {ctx.sym(ck, i),
                                         ticks[static_cast<size_t>(i)] ? "true" : "false"}));
    ccsl::Clock stub;
    stub.name = clock;
    ccsl::encode_history(ctx, stub);
}

// True iff `formula` holds under the (pinned, hence unique) context.
inline bool solver_holds(const tickcheck::smt::EncodingContext& ctx,
                         const std::string& formula) {
    using namespace tickcheck;
    auto script = smt::emit_script(ctx, formula, smt::Polarity::Assert);
    auto res = verify::run_solver(solver_command(), script.to_text());
    if (res.status == verify::SolverStatus::Sat) return true;
    if (res.status == verify::SolverStatus::Unsat) return false;
    throw Error("SolverError", "unexpected solver status: " + res.raw);
}

inline std::vector<bool> bits_of(unsigned v, int n) {
    std::vector<bool> out;
    for (int i = 0; i < n; ++i) out.push_back((v >> i) & 1u);
    return out;
}

}  // namespace testutil

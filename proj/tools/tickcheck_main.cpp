#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tickcheck/verify.hpp"

using namespace tickcheck;

namespace {

std::string default_solver() {
    const char* env = std::getenv("TICKCHECK_SOLVER");
    return env ? env : "";
}

int cmd_verify(const verify::VerificationTask& task, const std::string& out_path,
               const std::string& format) {
    verify::Report report = verify::run_task(task);
    if (!report.usable()) {
        std::cerr << format_diagnostics(report.diagnostics);
        return 3;
    }
    std::string text = verify::render_report(
        report, format == "json" ? verify::ReportFormat::Json : verify::ReportFormat::Table);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "cannot write " << out_path << "\n";
            return 3;
        }
        out << text;
        // keep the terminal informative even when the report goes to a file
        std::cout << verify::render_report(report, verify::ReportFormat::Table);
    }
    return verify::exit_code(report);
}

int cmd_simulate(const std::string& model_path, const std::string& spec_path, long long bound,
                 std::uint64_t seed, long long run) {
    verify::VerificationTask task;
    task.model_path = model_path;
    task.spec_path = spec_path;
    task.bound = bound;
    task.mode = verify::Mode::Probabilistic;
    std::vector<Diagnostic> diags;
    // a missing spec path means "no clocks", not an error
    std::optional<verify::LoadedTask> loaded;
    if (spec_path.empty()) {
        mdl::ParseResult parsed = mdl::parse_file(model_path);
        if (!parsed.root) {
            std::cerr << format_diagnostics(parsed.diagnostics);
            return 3;
        }
        model::ElaborationResult elab = model::elaborate(*parsed.root);
        if (!elab.model) {
            std::cerr << format_diagnostics(elab.diagnostics);
            return 3;
        }
        auto invalid = model::validate(*elab.model);
        if (has_error(invalid)) {
            std::cerr << format_diagnostics(invalid);
            return 3;
        }
        loaded = verify::LoadedTask{std::move(*elab.model), {}};
    } else {
        loaded = verify::load_task(task, diags);
        if (!loaded) {
            std::cerr << format_diagnostics(diags);
            return 3;
        }
    }
    try {
        sim::PinMap pins = verify::sample_scenario(loaded->model, bound, seed, run);
        sim::Trace trace = sim::simulate(loaded->model, bound, pins);
        sim::derive_ticks(loaded->model, trace, loaded->spec.clocks);
        std::cout << sim::to_csv(trace);
    } catch (const Error& e) {
        std::cerr << e.code() << ": " << e.what() << "\n";
        return 3;
    }
    return 0;
}

int cmd_emit(const std::string& model_path, const std::string& spec_path, long long bound,
             const std::string& constraint) {
    verify::VerificationTask task;
    task.model_path = model_path;
    task.spec_path = spec_path;
    task.bound = bound;
    task.mode = verify::Mode::Probabilistic;
    std::vector<Diagnostic> diags;
    std::optional<verify::LoadedTask> loaded = verify::load_task(task, diags);
    if (!loaded) {
        std::cerr << format_diagnostics(diags);
        return 3;
    }
    try {
        smt::EncodingContext ctx = smt::encode_model(loaded->model, bound);
        ccsl::encode_spec_clocks(ctx, loaded->spec);
        std::string goal = "true";
        smt::Polarity pol = smt::Polarity::Assert;
        if (!constraint.empty()) {
            const ccsl::TimingConstraint* found = nullptr;
            for (const auto& tc : loaded->spec.constraints)
                if (tc.name == constraint) found = &tc;
            if (!found) {
                std::cerr << "no constraint named '" << constraint << "'\n";
                return 3;
            }
            goal = ccsl::desugar(ctx, *found);
            pol = smt::Polarity::AssertNegated;
        }
        std::cout << smt::emit_smtlib(ctx, goal, pol);
    } catch (const Error& e) {
        std::cerr << e.code() << ": " << e.what() << "\n";
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tickcheck - model timing constraint verifier"};
    app.require_subcommand(1);

    // verify
    verify::VerificationTask task;
    task.solver_cmd = default_solver();
    std::string threshold_text, mode_text = "det", out_path, format = "table";
    auto* v = app.add_subcommand("verify", "check every constraint of a spec against a model");
    v->add_option("model", task.model_path, "model file (.mdl)")->required();
    v->add_option("spec", task.spec_path, "constraint spec (.tcs)")->required();
    v->add_option("--bound", task.bound, "unrolling bound N")->capture_default_str();
    v->add_option("--runs", task.runs, "sampled runs M (prob mode)")->capture_default_str();
    v->add_option("--seed", task.seed, "scenario seed")->capture_default_str();
    v->add_option("--threshold", threshold_text, "probability threshold override");
    v->add_option("--solver", task.solver_cmd, "solver command (default $TICKCHECK_SOLVER)");
    v->add_option("--mode", mode_text, "det or prob")->check(CLI::IsMember({"det", "prob"}));
    v->add_option("--jobs", task.jobs, "concurrent solver processes")->capture_default_str();
    v->add_option("--out", out_path, "write the report to a file");
    v->add_option("--format", format, "table or json")
        ->check(CLI::IsMember({"table", "json"}));

    // simulate
    std::string sim_model, sim_spec;
    long long sim_bound = 20, sim_run = 0;
    std::uint64_t sim_seed = 0;
    auto* s = app.add_subcommand("simulate", "run the concrete simulator, CSV trace on stdout");
    s->add_option("model", sim_model, "model file (.mdl)")->required();
    s->add_option("--spec", sim_spec, "spec whose clocks are added to the trace");
    s->add_option("--bound", sim_bound, "steps")->capture_default_str();
    s->add_option("--seed", sim_seed, "scenario seed")->capture_default_str();
    s->add_option("--run", sim_run, "scenario run index")->capture_default_str();

    // emit
    std::string emit_model, emit_spec, emit_constraint;
    long long emit_bound = 20;
    auto* e = app.add_subcommand("emit", "print the SMT-LIB encoding on stdout");
    e->add_option("model", emit_model, "model file (.mdl)")->required();
    e->add_option("spec", emit_spec, "constraint spec (.tcs)")->required();
    e->add_option("--bound", emit_bound, "unrolling bound N")->capture_default_str();
    e->add_option("--constraint", emit_constraint, "assert this constraint negated");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        int rc = app.exit(err);
        return rc == 0 ? 0 : 3;
    }

    if (v->parsed()) {
        task.mode = mode_text == "prob" ? verify::Mode::Probabilistic
                                        : verify::Mode::Deterministic;
        if (!threshold_text.empty()) {
            try {
                task.threshold = parse_rational(threshold_text);
            } catch (const Error&) {
                std::cerr << "bad --threshold value '" << threshold_text << "'\n";
                return 3;
            }
        }
        if (task.solver_cmd.empty()) {
            std::cerr << "no solver: pass --solver or set TICKCHECK_SOLVER\n";
            return 3;
        }
        return cmd_verify(task, out_path, format);
    }
    if (s->parsed()) return cmd_simulate(sim_model, sim_spec, sim_bound, sim_seed, sim_run);
    return cmd_emit(emit_model, emit_spec, emit_bound, emit_constraint);
}

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tickcheck/ccsl.hpp"
#include "tickcheck/model.hpp"
#include "tickcheck/sim.hpp"
#include "tickcheck/smt.hpp"

namespace tickcheck::verify {

enum class Mode { Deterministic, Probabilistic };

struct VerificationTask {
    std::string model_path;
    std::string spec_path;
    long long bound = 100;
    long long runs = 100;
    std::uint64_t seed = 0;
    std::optional<Rational> threshold;  // overrides per-constraint prob
    std::string solver_cmd;
    Mode mode = Mode::Deterministic;
    int jobs = 1;
};

enum class SolverStatus { Sat, Unsat, Unknown, SolverError };

struct SolverResult {
    SolverStatus status = SolverStatus::SolverError;
    std::map<std::string, Value> assignment;  // only when Sat
    long long wall_ms = 0;
    std::string raw;  // output excerpt, for diagnostics
};

// One external solver process per query; SMT-LIB on stdin, answer on
// stdout. Never throws: spawn/protocol failures yield SolverError.
SolverResult run_solver(const std::string& command, const std::string& script);

// First line sat|unsat|unknown; on sat, parses the (define-fun ...) /
// (get-value ...) s-expressions. Throws Error("SolverProtocolError").
SolverResult parse_solver_output(const std::string& text);

// Deterministic pins for every (RandomSource, step) pair, keyed by
// (seed, run k, block id, step); identical arguments give identical pins.
sim::PinMap sample_scenario(const model::SystemModel& m, long long bound, std::uint64_t seed,
                            long long k);

enum class Result { Valid, Invalid, Undetermined };

std::string to_string(Result r);

struct Verdict {
    std::string name;
    std::string kind;
    Result result = Result::Undetermined;
    long long sat_runs = 0;
    long long total_runs = 0;
    Rational estimate;   // sat_runs / total_runs (det: 0 or 1)
    Rational threshold;  // effective threshold used
    long long vacuous_runs = 0;
    long long wall_ms = 0;
    std::string counterexample;  // rendered trace table, det + Sat only
    std::string wilson_ci;       // informational 95% interval
};

struct Report {
    std::string version;
    VerificationTask task;
    std::vector<Verdict> verdicts;
    long long wall_ms = 0;
    std::vector<Diagnostic> diagnostics;  // usage/parse failures
    bool usable() const { return diagnostics.empty(); }
};

// Loaded and validated pair of model and spec, reusable across verdicts.
struct LoadedTask {
    model::SystemModel model;
    ccsl::TcsSpec spec;
};

// Parses, elaborates and validates both inputs; diagnostics on failure.
std::optional<LoadedTask> load_task(const VerificationTask& task,
                                    std::vector<Diagnostic>& diags);

Verdict run_deterministic_validity(const VerificationTask& task, const LoadedTask& loaded,
                                   const ccsl::TimingConstraint& tc);

Verdict run_probabilistic(const VerificationTask& task, const LoadedTask& loaded,
                          const ccsl::TimingConstraint& tc);

// All constraints of the spec, in declaration order.
Report run_task(const VerificationTask& task);

enum class ReportFormat { Table, Json };

// Byte-deterministic given equal verdicts (wall times excepted).
std::string render_report(const Report& report, ReportFormat format);

// 0 all valid; 1 any invalid; 2 any undetermined; 3 usage/parse error.
int exit_code(const Report& report);

}  // namespace tickcheck::verify

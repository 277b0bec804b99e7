#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tickcheck/action.hpp"
#include "tickcheck/diag.hpp"
#include "tickcheck/value.hpp"

namespace tickcheck::ccsl {

// A logical clock derived from the model trace; ticks are always defined
// by the trace, never free.
struct Clock {
    enum class Source { Rising, Entered, Every };
    std::string name;
    Source source = Source::Every;
    action::ExprPtr expr;    // Rising: Bool expression over trace names
    std::string state_path;  // Entered: "Chart.State" or unique state name
    long long period = 1;    // Every
    long long offset = 0;    // Every
};

enum class RelationKind { Coincidence, Causality, Precedence, Subclock, Exclusion };

std::string to_string(RelationKind k);

struct ClockRelation {
    RelationKind kind = RelationKind::Coincidence;
    std::string left, right;  // clock names
};

enum class ConstraintKind {
    EndToEnd,
    Periodic,
    Sporadic,
    Execution,
    Synchronization,
    Comparison,
    Exclusion,
};

std::string to_string(ConstraintKind k);

struct TimingConstraint {
    std::string name;
    ConstraintKind kind = ConstraintKind::Periodic;
    std::vector<std::string> clocks;  // kind-specific tuple, in spec order
    long long period = 0, jitter = 0;  // Periodic
    long long min_gap = 0;             // Sporadic
    long long lower = 0, upper = 0;    // Execution / EndToEnd
    long long window = 0;              // Synchronization
    bool comparison_is_precedence = true;  // Comparison: precedes vs causes
    std::optional<Rational> prob;      // PrCCSL threshold
};

// Throws Error("ParamError") when the TimingConstraint invariants are
// violated (negative params, l > u, J >= P, arity).
void check_params(const TimingConstraint& tc);

struct TcsSpec {
    std::vector<Clock> clocks;
    std::vector<TimingConstraint> constraints;

    const Clock* find_clock(const std::string& name) const;
};

struct TcsParseResult {
    std::optional<TcsSpec> spec;
    std::vector<Diagnostic> diagnostics;
};

// Constraint specification file (.tcs): clock definitions plus one
// constraint declaration per line of the seven kinds.
TcsParseResult parse_tcs(const std::string& text);
TcsParseResult parse_tcs_file(const std::string& path);

}  // namespace tickcheck::ccsl

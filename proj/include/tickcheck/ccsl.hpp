#pragma once

#include "tickcheck/ccsl_types.hpp"
#include "tickcheck/sim.hpp"
#include "tickcheck/smt.hpp"

namespace tickcheck::ccsl {

// symbol bases of the per-clock step vectors
std::string tick_symbol(const std::string& clock);       // ck_<name>, Bool, N entries
std::string history_symbol(const std::string& clock);    // hh_<name>, Int, N+1 entries
std::string sincelast_symbol(const std::string& clock);  // sl_<name>, Int, N entries

// Declares the tick vector and asserts its defining equivalence per step.
// Throws Error("UnknownStateRef") / Error("TypeError").
void encode_clock(smt::EncodingContext& ctx, const Clock& c);

// Declares H(0..N) with H(0)=0 and H(i+1) = H(i) + (tick(i) ? 1 : 0).
void encode_history(smt::EncodingContext& ctx, const Clock& c);

// Steps since the previous tick measured at the end of step i, with a
// virtual tick at step -1; used by the periodic/sporadic desugarings.
void ensure_sincelast(smt::EncodingContext& ctx, const std::string& clock);

// encode_clock + encode_history for every clock of the spec (idempotent).
void encode_spec_clocks(smt::EncodingContext& ctx, const TcsSpec& spec);

// Quantifier-free conjunction over steps of the bounded-trace semantics.
std::string encode_relation(smt::EncodingContext& ctx, const ClockRelation& r);

// Kind-specific bounded formula over tick/history vectors. Calls
// check_params first; throws Error("ParamError").
std::string desugar(smt::EncodingContext& ctx, const TimingConstraint& tc);

// ---- definitional oracles over concrete tick vectors ----

bool check_relation_ticks(RelationKind kind, const std::vector<bool>& l,
                          const std::vector<bool>& r);
bool check_relation_on_trace(const sim::Trace& trace, const ClockRelation& r);
bool check_constraint_on_trace(const sim::Trace& trace, const TimingConstraint& tc);

// Instance bookkeeping for the verdict statistics: an instance is one
// k-indexed obligation of the constraint; it is vacuous when the bound
// cut off the partner tick(s) it would be checked against.
struct InstanceStats {
    long long checked = 0;
    long long vacuous = 0;
};
InstanceStats count_instances(const sim::Trace& trace, const TimingConstraint& tc);

}  // namespace tickcheck::ccsl

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tickcheck/action.hpp"
#include "tickcheck/mdl.hpp"
#include "tickcheck/value.hpp"

namespace tickcheck::model {

enum class BlockKind {
    Constant,
    Gain,
    Sum,
    Product,
    RelationalOperator,
    LogicalOperator,
    Switch,
    UnitDelay,
    Inport,
    Outport,
    RandomSource,
};

std::string to_string(BlockKind k);

struct Distribution {
    enum class Kind { UniformInt, UniformReal, Bernoulli, DiscreteChoice } kind =
        Kind::UniformReal;
    Rational lo, hi;                // Uniform*
    Rational p;                     // Bernoulli
    std::vector<Rational> values;   // DiscreteChoice
    std::vector<long long> weights; // DiscreteChoice, positive
};

struct BlockInstance {
    long long id = 0;
    std::string name;
    BlockKind kind = BlockKind::Constant;
    int in_ports = 0;
    int out_ports = 1;

    // kind-specific parameters
    Value constant;          // Constant
    Rational gain;           // Gain
    std::string signs;       // Sum, e.g. "+-"
    std::string op;          // RelationalOperator (< <= > >= == ~=) / LogicalOperator (AND OR NOT)
    Rational threshold;      // Switch: control passes iff ctrl >= threshold
    Value delay_init;        // UnitDelay
    Distribution dist;       // RandomSource
    int port_index = 1;      // Inport / Outport
};

struct Endpoint {
    long long id = 0;  // block id or chart anchor block id
    int port = 1;      // 1-based
    bool operator==(const Endpoint&) const = default;
    bool operator<(const Endpoint& o) const { return id != o.id ? id < o.id : port < o.port; }
};

struct Connection {
    Endpoint src, dst;
};

struct StateNode {
    long long id = 0;
    std::string name;
    std::optional<long long> parent;  // absent for chart-root states
    std::vector<long long> substates; // source order
    bool has_history_junction = false;
    bool is_default = false;
    std::vector<action::Stmt> entry_actions, during_actions, exit_actions;
};

struct TransitionEdge {
    long long id = 0;
    long long src = 0, dst = 0;
    action::ExprPtr condition;  // Bool
    std::vector<action::Stmt> action;
    int priority = 1;  // lower fires first
};

struct ChartData {
    enum class Scope { Local, Input, Output } scope = Scope::Local;
    std::string name;
    ValueType type = ValueType::Real;
    Value init;
    int port = 0;  // 1-based for Input/Output
};

struct ChartDef {
    long long id = 0;
    std::string name;
    long long anchor_block = 0;  // Block node this chart is wired through
    std::vector<long long> root_states;
    std::map<long long, StateNode> states;
    std::vector<TransitionEdge> transitions;
    std::vector<ChartData> data;

    const StateNode& state(long long id_) const { return states.at(id_); }
    std::vector<const ChartData*> inputs() const;
    std::vector<const ChartData*> outputs() const;
    std::vector<const ChartData*> variables() const;  // Local + Output
    const ChartData* find_data(const std::string& name_) const;
    // Transitions leaving `src`, priority-ascending.
    std::vector<const TransitionEdge*> transitions_from(long long src) const;
    long long default_substate(long long parent) const;  // parent=0 for root level
    const std::vector<long long>& substates_of(long long parent) const;
};

struct SystemModel {
    std::vector<BlockInstance> blocks;
    std::vector<Connection> connections;
    std::vector<ChartDef> charts;

    const BlockInstance* find_block(long long id) const;
    const ChartDef* find_chart_by_anchor(long long block_id) const;
    const ChartDef* find_chart(long long chart_id) const;
    bool has_random_source() const;
    // Single incoming connection of an in-port, or nullptr.
    const Connection* incoming(Endpoint dst) const;
};

struct ElaborationResult {
    std::optional<SystemModel> model;
    std::vector<Diagnostic> diagnostics;
};

// Raw parse tree -> typed model. All violations are reported as
// diagnostics; a model is produced only when there are none.
ElaborationResult elaborate(const mdl::RawNode& root);

// Deterministic schedule of blocks and chart anchors: every connection
// whose source is a combinational block orders src before dst; UnitDelay
// and chart outputs are previous-step values and impose no edge.
// Throws Error("AlgebraicLoop") listing the cycle's ids.
std::vector<long long> topo_order(const SystemModel& model);

// Aggregated invariant checks; empty iff the model is encodable.
std::vector<Diagnostic> validate(const SystemModel& model);

// ---- shared symbol naming (encoder, simulator and report all agree) ----

std::string sanitize(const std::string& name);
std::string out_symbol(const SystemModel& m, long long block_id, int port);
std::string in_symbol(const SystemModel& m, long long block_id, int port);
std::string var_symbol(const ChartDef& chart, const std::string& var);
std::string act_symbol(const ChartDef& chart, long long state_id);
std::string hist_symbol(const ChartDef& chart, long long state_id);

// One per-step vector of the unrolled system.
struct VectorInfo {
    enum class Class { OutPort, InPort, ChartVar, StateActivity, History } cls;
    std::string base;  // symbol base name; step symbols are base__i
    ValueType type = ValueType::Real;
    long long owner_id = 0;  // block / chart id
    int port = 0;
    std::string detail;  // variable name / state id as text
};

// Deterministic catalog of every vector the encoding declares.
std::vector<VectorInfo> vector_catalog(const SystemModel& model);

// ValueType of the signal produced at an out-port (chart anchors included).
ValueType out_port_type(const SystemModel& m, long long block_id, int port);
ValueType in_port_type(const SystemModel& m, long long block_id, int port);

// Resolves a name usable in clock expressions / trace dumps:
// a chart variable or input name, or a block name (out-port 1; Outports
// resolve to their in-port). Throws Error("UnknownName"/"AmbiguousName").
struct ResolvedName {
    std::string base;
    ValueType type;
};
ResolvedName resolve_trace_name(const SystemModel& m, const std::string& name);

// "Chart.State" or a document-unique bare state name.
struct ResolvedState {
    const ChartDef* chart;
    long long state_id;
};
ResolvedState resolve_state_path(const SystemModel& m, const std::string& path);

}  // namespace tickcheck::model

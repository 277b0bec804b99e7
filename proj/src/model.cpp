#include "tickcheck/model.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

namespace tickcheck::model {

using mdl::ParamValue;
using mdl::RawNode;

std::string to_string(BlockKind k) {
    switch (k) {
        case BlockKind::Constant: return "Constant";
        case BlockKind::Gain: return "Gain";
        case BlockKind::Sum: return "Sum";
        case BlockKind::Product: return "Product";
        case BlockKind::RelationalOperator: return "RelationalOperator";
        case BlockKind::LogicalOperator: return "LogicalOperator";
        case BlockKind::Switch: return "Switch";
        case BlockKind::UnitDelay: return "UnitDelay";
        case BlockKind::Inport: return "Inport";
        case BlockKind::Outport: return "Outport";
        default: return "RandomSource";
    }
}

std::vector<const ChartData*> ChartDef::inputs() const {
    std::vector<const ChartData*> out;
    for (const auto& d : data)
        if (d.scope == ChartData::Scope::Input) out.push_back(&d);
    std::sort(out.begin(), out.end(),
              [](const ChartData* a, const ChartData* b) { return a->port < b->port; });
    return out;
}

std::vector<const ChartData*> ChartDef::outputs() const {
    std::vector<const ChartData*> out;
    for (const auto& d : data)
        if (d.scope == ChartData::Scope::Output) out.push_back(&d);
    std::sort(out.begin(), out.end(),
              [](const ChartData* a, const ChartData* b) { return a->port < b->port; });
    return out;
}

std::vector<const ChartData*> ChartDef::variables() const {
    std::vector<const ChartData*> out;
    for (const auto& d : data)
        if (d.scope != ChartData::Scope::Input) out.push_back(&d);
    return out;
}

const ChartData* ChartDef::find_data(const std::string& name_) const {
    for (const auto& d : data)
        if (d.name == name_) return &d;
    return nullptr;
}

std::vector<const TransitionEdge*> ChartDef::transitions_from(long long src) const {
    std::vector<const TransitionEdge*> out;
    for (const auto& t : transitions)
        if (t.src == src) out.push_back(&t);
    std::sort(out.begin(), out.end(), [](const TransitionEdge* a, const TransitionEdge* b) {
        return a->priority != b->priority ? a->priority < b->priority : a->id < b->id;
    });
    return out;
}

const std::vector<long long>& ChartDef::substates_of(long long parent) const {
    if (parent == 0) return root_states;
    return states.at(parent).substates;
}

long long ChartDef::default_substate(long long parent) const {
    for (long long sid : substates_of(parent))
        if (states.at(sid).is_default) return sid;
    throw Error("MissingDefault", "no default substate under state " + std::to_string(parent) +
                                      " of chart " + name);
}

const BlockInstance* SystemModel::find_block(long long id) const {
    for (const auto& b : blocks)
        if (b.id == id) return &b;
    return nullptr;
}

const ChartDef* SystemModel::find_chart_by_anchor(long long block_id) const {
    for (const auto& c : charts)
        if (c.anchor_block == block_id) return &c;
    return nullptr;
}

const ChartDef* SystemModel::find_chart(long long chart_id) const {
    for (const auto& c : charts)
        if (c.id == chart_id) return &c;
    return nullptr;
}

bool SystemModel::has_random_source() const {
    for (const auto& b : blocks)
        if (b.kind == BlockKind::RandomSource) return true;
    return false;
}

const Connection* SystemModel::incoming(Endpoint dst) const {
    for (const auto& c : connections)
        if (c.dst == dst) return &c;
    return nullptr;
}

// ---------------------------------------------------------------- naming

std::string sanitize(const std::string& name) {
    std::string out;
    for (char c : name)
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    if (out.empty()) out = "_";
    return out;
}

static std::string node_name(const SystemModel& m, long long block_id) {
    if (const BlockInstance* b = m.find_block(block_id)) return sanitize(b->name);
    if (const ChartDef* c = m.find_chart_by_anchor(block_id)) return sanitize(c->name);
    throw Error("UnknownBlock", "no block with id " + std::to_string(block_id));
}

std::string out_symbol(const SystemModel& m, long long block_id, int port) {
    return node_name(m, block_id) + "_o" + std::to_string(port);
}

std::string in_symbol(const SystemModel& m, long long block_id, int port) {
    return node_name(m, block_id) + "_i" + std::to_string(port);
}

std::string var_symbol(const ChartDef& chart, const std::string& var) {
    return sanitize(chart.name) + "_" + sanitize(var);
}

std::string act_symbol(const ChartDef& chart, long long state_id) {
    return sanitize(chart.name) + "_s" + std::to_string(state_id);
}

std::string hist_symbol(const ChartDef& chart, long long state_id) {
    return sanitize(chart.name) + "_h" + std::to_string(state_id);
}

ValueType out_port_type(const SystemModel& m, long long block_id, int port) {
    if (const ChartDef* c = m.find_chart_by_anchor(block_id)) {
        auto outs = c->outputs();
        if (port < 1 || port > static_cast<int>(outs.size()))
            throw Error("BadPort", "chart " + c->name + " has no out-port " + std::to_string(port));
        return outs[static_cast<size_t>(port - 1)]->type;
    }
    const BlockInstance* b = m.find_block(block_id);
    if (!b) throw Error("UnknownBlock", "no block with id " + std::to_string(block_id));
    switch (b->kind) {
        case BlockKind::Constant: return b->constant.type();
        case BlockKind::RelationalOperator:
        case BlockKind::LogicalOperator: return ValueType::Bool;
        case BlockKind::Outport: return in_port_type(m, block_id, 1);
        default: return ValueType::Real;
    }
}

ValueType in_port_type(const SystemModel& m, long long block_id, int port) {
    if (const ChartDef* c = m.find_chart_by_anchor(block_id)) {
        auto ins = c->inputs();
        if (port < 1 || port > static_cast<int>(ins.size()))
            throw Error("BadPort", "chart " + c->name + " has no in-port " + std::to_string(port));
        return ins[static_cast<size_t>(port - 1)]->type;
    }
    const BlockInstance* b = m.find_block(block_id);
    if (!b) throw Error("UnknownBlock", "no block with id " + std::to_string(block_id));
    switch (b->kind) {
        case BlockKind::LogicalOperator: return ValueType::Bool;
        case BlockKind::Outport: {
            // adopts the type of whatever drives it
            const Connection* c2 = m.incoming({block_id, 1});
            if (!c2) return ValueType::Real;
            return out_port_type(m, c2->src.id, c2->src.port);
        }
        default: return ValueType::Real;
    }
}

std::vector<VectorInfo> vector_catalog(const SystemModel& model) {
    std::vector<VectorInfo> out;
    std::vector<std::pair<long long, bool>> nodes;  // (id, is_chart_anchor)
    for (const auto& b : model.blocks) nodes.emplace_back(b.id, false);
    for (const auto& c : model.charts) nodes.emplace_back(c.anchor_block, true);
    std::sort(nodes.begin(), nodes.end());
    for (auto [id, is_anchor] : nodes) {
        int n_in, n_out;
        if (is_anchor) {
            const ChartDef* c = model.find_chart_by_anchor(id);
            n_in = static_cast<int>(c->inputs().size());
            n_out = static_cast<int>(c->outputs().size());
        } else {
            const BlockInstance* b = model.find_block(id);
            n_in = b->in_ports;
            n_out = b->out_ports;
        }
        for (int p = 1; p <= n_in; ++p)
            out.push_back({VectorInfo::Class::InPort, in_symbol(model, id, p),
                           in_port_type(model, id, p), id, p, ""});
        for (int p = 1; p <= n_out; ++p)
            out.push_back({VectorInfo::Class::OutPort, out_symbol(model, id, p),
                           out_port_type(model, id, p), id, p, ""});
    }
    std::vector<const ChartDef*> charts;
    for (const auto& c : model.charts) charts.push_back(&c);
    std::sort(charts.begin(), charts.end(),
              [](const ChartDef* a, const ChartDef* b) { return a->id < b->id; });
    for (const ChartDef* c : charts) {
        for (const ChartData* d : c->variables())
            out.push_back({VectorInfo::Class::ChartVar, var_symbol(*c, d->name), d->type, c->id, 0,
                           d->name});
        for (const auto& [sid, st] : c->states) {
            out.push_back({VectorInfo::Class::StateActivity, act_symbol(*c, sid), ValueType::Int,
                           c->id, 0, std::to_string(sid)});
        }
        for (const auto& [sid, st] : c->states) {
            if (st.has_history_junction)
                out.push_back({VectorInfo::Class::History, hist_symbol(*c, sid), ValueType::Int,
                               c->id, 0, std::to_string(sid)});
        }
    }
    return out;
}

ResolvedName resolve_trace_name(const SystemModel& m, const std::string& name) {
    std::vector<ResolvedName> found;
    std::string chart_scope, leaf = name;
    if (auto dot = name.find('.'); dot != std::string::npos) {
        chart_scope = name.substr(0, dot);
        leaf = name.substr(dot + 1);
    }
    for (const auto& c : m.charts) {
        if (!chart_scope.empty() && c.name != chart_scope) continue;
        if (const ChartData* d = c.find_data(leaf)) {
            if (d->scope == ChartData::Scope::Input) {
                found.push_back({in_symbol(m, c.anchor_block, d->port), d->type});
            } else {
                found.push_back({var_symbol(c, d->name), d->type});
            }
        }
    }
    if (chart_scope.empty()) {
        for (const auto& b : m.blocks) {
            if (b.name != name) continue;
            if (b.kind == BlockKind::Outport) {
                found.push_back({in_symbol(m, b.id, 1), in_port_type(m, b.id, 1)});
            } else if (b.out_ports >= 1) {
                found.push_back({out_symbol(m, b.id, 1), out_port_type(m, b.id, 1)});
            }
        }
    }
    if (found.empty()) throw Error("UnknownName", "unknown signal or variable '" + name + "'");
    if (found.size() > 1) throw Error("AmbiguousName", "name '" + name + "' is ambiguous");
    return found.front();
}

ResolvedState resolve_state_path(const SystemModel& m, const std::string& path) {
    std::string chart_scope, leaf = path;
    if (auto dot = path.find('.'); dot != std::string::npos) {
        chart_scope = path.substr(0, dot);
        leaf = path.substr(dot + 1);
    }
    std::vector<ResolvedState> found;
    for (const auto& c : m.charts) {
        if (!chart_scope.empty() && c.name != chart_scope) continue;
        for (const auto& [sid, st] : c.states)
            if (st.name == leaf) found.push_back({&c, sid});
    }
    if (found.empty()) throw Error("UnknownStateRef", "unknown state '" + path + "'");
    if (found.size() > 1) throw Error("AmbiguousName", "state name '" + path + "' is ambiguous");
    return found.front();
}

// ------------------------------------------------------------ elaboration

namespace {

class Elaborator {
  public:
    explicit Elaborator(const RawNode& root) : root_(root) {}

    ElaborationResult run() {
        for (const RawNode* system : mdl::find_all(root_, "System")) {
            for (const RawNode& child : system->children) {
                if (child.kind == "Block") elaborate_block(child);
            }
        }
        for (const RawNode* chart : mdl::find_all(root_, "chart")) elaborate_chart(*chart);
        // Lines second so endpoints can be checked against charts too.
        for (const RawNode* system : mdl::find_all(root_, "System")) {
            for (const RawNode& child : system->children) {
                if (child.kind == "Line") elaborate_line(child);
            }
        }
        check_actions();
        ElaborationResult result;
        result.diagnostics = std::move(diags_);
        if (!has_error(result.diagnostics)) result.model = std::move(model_);
        return result;
    }

  private:
    void err(std::string code, std::string message, SourceSpan span = {}) {
        diags_.push_back(error_diag(std::move(code), std::move(message), span));
    }

    std::optional<long long> get_int(const RawNode& n, const std::string& key) {
        const ParamValue* p = n.find_param(key);
        if (!p) return std::nullopt;
        try {
            return std::stoll(p->text);
        } catch (...) {
            err("BadParam", "parameter '" + key + "' of '" + n.kind + "' is not an integer", n.span);
            return std::nullopt;
        }
    }

    std::optional<std::string> get_text(const RawNode& n, const std::string& key) {
        const ParamValue* p = n.find_param(key);
        if (!p) return std::nullopt;
        return p->text;
    }

    std::optional<Rational> get_rational(const RawNode& n, const std::string& key) {
        const ParamValue* p = n.find_param(key);
        if (!p) return std::nullopt;
        try {
            return parse_rational(p->text);
        } catch (const Error&) {
            err("BadParam", "parameter '" + key + "' of '" + n.kind + "' is not a number", n.span);
            return std::nullopt;
        }
    }

    // Numeric scalars are Real; "true"/"false" are Bool.
    std::optional<Value> get_value(const RawNode& n, const std::string& key) {
        const ParamValue* p = n.find_param(key);
        if (!p) return std::nullopt;
        if (p->text == "true") return Value(true);
        if (p->text == "false") return Value(false);
        try {
            return Value(parse_rational(p->text));
        } catch (const Error&) {
            err("BadParam", "parameter '" + key + "' of '" + n.kind + "' is not a value", n.span);
            return std::nullopt;
        }
    }

    std::vector<action::Stmt> get_stmts(const RawNode& n, const std::string& key) {
        auto text = get_text(n, key);
        if (!text) return {};
        try {
            return action::parse_stmts(*text);
        } catch (const Error& e) {
            err(e.code(), "in '" + key + "' of '" + n.kind + "': " + e.what(), n.span);
            return {};
        }
    }

    void elaborate_block(const RawNode& n) {
        auto id = get_int(n, "id");
        auto type = get_text(n, "BlockType");
        if (!id || !type) {
            err("BadParam", "Block node needs 'id' and 'BlockType'", n.span);
            return;
        }
        if (*type == "SubSystem") {
            anchor_spans_[*id] = n.span;
            anchor_names_[*id] = get_text(n, "Name").value_or("SubSystem" + std::to_string(*id));
            return;  // wired up by the chart that references it
        }
        BlockInstance b;
        b.id = *id;
        b.name = get_text(n, "Name").value_or("Block" + std::to_string(*id));
        static const std::map<std::string, BlockKind> kinds = {
            {"Constant", BlockKind::Constant},
            {"Gain", BlockKind::Gain},
            {"Sum", BlockKind::Sum},
            {"Product", BlockKind::Product},
            {"RelationalOperator", BlockKind::RelationalOperator},
            {"LogicalOperator", BlockKind::LogicalOperator},
            {"Switch", BlockKind::Switch},
            {"UnitDelay", BlockKind::UnitDelay},
            {"Inport", BlockKind::Inport},
            {"Outport", BlockKind::Outport},
            {"RandomSource", BlockKind::RandomSource},
        };
        auto it = kinds.find(*type);
        if (it == kinds.end()) {
            err("UnknownBlockKind", "unknown block kind '" + *type + "'", n.span);
            return;
        }
        b.kind = it->second;
        switch (b.kind) {
            case BlockKind::Constant: {
                b.constant = get_value(n, "Value").value_or(Value(Rational(0)));
                b.in_ports = 0;
                break;
            }
            case BlockKind::Gain: {
                b.gain = get_rational(n, "Gain").value_or(Rational(1));
                b.in_ports = 1;
                break;
            }
            case BlockKind::Sum: {
                b.signs = get_text(n, "Inputs").value_or("++");
                bool ok = !b.signs.empty();
                for (char c : b.signs) ok = ok && (c == '+' || c == '-');
                if (!ok) {
                    err("BadParam", "Sum 'Inputs' must be a nonempty string of + and -", n.span);
                    return;
                }
                b.in_ports = static_cast<int>(b.signs.size());
                break;
            }
            case BlockKind::Product: {
                b.in_ports = static_cast<int>(get_int(n, "Inputs").value_or(2));
                if (b.in_ports < 1) {
                    err("BadParam", "Product needs at least one input", n.span);
                    return;
                }
                break;
            }
            case BlockKind::RelationalOperator: {
                b.op = get_text(n, "Operator").value_or("==");
                static const std::set<std::string> rel = {"<", "<=", ">", ">=", "==", "~="};
                if (!rel.count(b.op)) {
                    err("BadParam", "bad RelationalOperator '" + b.op + "'", n.span);
                    return;
                }
                b.in_ports = 2;
                break;
            }
            case BlockKind::LogicalOperator: {
                b.op = get_text(n, "Operator").value_or("AND");
                if (b.op != "AND" && b.op != "OR" && b.op != "NOT") {
                    err("BadParam", "bad LogicalOperator '" + b.op + "'", n.span);
                    return;
                }
                b.in_ports = b.op == "NOT" ? 1 : static_cast<int>(get_int(n, "Inputs").value_or(2));
                break;
            }
            case BlockKind::Switch: {
                b.threshold = get_rational(n, "Threshold").value_or(Rational(1, 2));
                b.in_ports = 3;
                break;
            }
            case BlockKind::UnitDelay: {
                b.delay_init = get_value(n, "X0").value_or(Value(Rational(0)));
                b.in_ports = 1;
                break;
            }
            case BlockKind::Inport: {
                b.port_index = static_cast<int>(get_int(n, "Port").value_or(1));
                b.in_ports = 0;
                break;
            }
            case BlockKind::Outport: {
                b.port_index = static_cast<int>(get_int(n, "Port").value_or(1));
                b.in_ports = 1;
                b.out_ports = 0;
                break;
            }
            case BlockKind::RandomSource: {
                if (!elaborate_distribution(n, b.dist)) return;
                b.in_ports = 0;
                break;
            }
        }
        model_.blocks.push_back(std::move(b));
    }

    bool elaborate_distribution(const RawNode& n, Distribution& d) {
        std::string kind = get_text(n, "Distribution").value_or("UniformReal");
        if (kind == "UniformInt" || kind == "UniformReal") {
            d.kind = kind == "UniformInt" ? Distribution::Kind::UniformInt
                                          : Distribution::Kind::UniformReal;
            d.lo = get_rational(n, "Lo").value_or(Rational(0));
            d.hi = get_rational(n, "Hi").value_or(Rational(1));
            if (d.lo > d.hi) {
                err("BadParam", "RandomSource Lo > Hi", n.span);
                return false;
            }
            if (d.kind == Distribution::Kind::UniformInt &&
                (d.lo.get_den() != 1 || d.hi.get_den() != 1)) {
                err("BadParam", "UniformInt bounds must be integers", n.span);
                return false;
            }
            return true;
        }
        if (kind == "Bernoulli") {
            d.kind = Distribution::Kind::Bernoulli;
            d.p = get_rational(n, "P").value_or(Rational(1, 2));
            if (d.p < 0 || d.p > 1) {
                err("BadParam", "Bernoulli P must be in [0,1]", n.span);
                return false;
            }
            return true;
        }
        if (kind == "DiscreteChoice") {
            d.kind = Distribution::Kind::DiscreteChoice;
            std::istringstream vs(get_text(n, "Values").value_or(""));
            std::string tok;
            while (vs >> tok) {
                try {
                    d.values.push_back(parse_rational(tok));
                } catch (const Error&) {
                    err("BadParam", "bad DiscreteChoice value '" + tok + "'", n.span);
                    return false;
                }
            }
            if (d.values.empty()) {
                err("BadParam", "DiscreteChoice needs at least one value", n.span);
                return false;
            }
            std::istringstream ws(get_text(n, "Weights").value_or(""));
            long long w;
            while (ws >> w) d.weights.push_back(w);
            if (d.weights.empty()) d.weights.assign(d.values.size(), 1);
            if (d.weights.size() != d.values.size()) {
                err("BadParam", "DiscreteChoice Values/Weights length mismatch", n.span);
                return false;
            }
            for (long long x : d.weights) {
                if (x <= 0) {
                    err("BadParam", "DiscreteChoice weights must be positive", n.span);
                    return false;
                }
            }
            return true;
        }
        err("BadParam", "unknown distribution '" + kind + "'", n.span);
        return false;
    }

    void elaborate_line(const RawNode& n) {
        auto sb = get_int(n, "SrcBlock");
        auto db = get_int(n, "DstBlock");
        if (!sb || !db) {
            err("DanglingConnection", "Line needs SrcBlock and DstBlock", n.span);
            return;
        }
        Connection c;
        c.src = {*sb, static_cast<int>(get_int(n, "SrcPort").value_or(1))};
        c.dst = {*db, static_cast<int>(get_int(n, "DstPort").value_or(1))};
        for (Endpoint ep : {c.src, c.dst}) {
            bool is_src = ep == c.src;
            int arity = endpoint_arity(ep.id, is_src, n.span);
            if (arity < 0) return;  // diagnostic already emitted
            if (ep.port < 1 || ep.port > arity) {
                err("ArityMismatch",
                    "port " + std::to_string(ep.port) + " out of range for block id " +
                        std::to_string(ep.id),
                    n.span);
                return;
            }
        }
        model_.connections.push_back(c);
    }

    // -1 on unknown endpoint; arity of the relevant side otherwise.
    int endpoint_arity(long long id, bool src_side, SourceSpan span) {
        if (const BlockInstance* b = model_.find_block(id))
            return src_side ? b->out_ports : b->in_ports;
        if (const ChartDef* c = model_.find_chart_by_anchor(id))
            return static_cast<int>(src_side ? c->outputs().size() : c->inputs().size());
        err("DanglingConnection", "Line names nonexistent block id " + std::to_string(id), span);
        return -1;
    }

    void elaborate_chart(const RawNode& n) {
        ChartDef chart;
        auto id = get_int(n, "id");
        auto anchor = get_int(n, "block");
        if (!id || !anchor) {
            err("BadParam", "chart node needs 'id' and 'block'", n.span);
            return;
        }
        chart.id = *id;
        chart.anchor_block = *anchor;
        chart.name = get_text(n, "name").value_or("Chart" + std::to_string(*id));
        if (!anchor_spans_.count(*anchor)) {
            err("DanglingConnection",
                "chart '" + chart.name + "' references nonexistent SubSystem block id " +
                    std::to_string(*anchor),
                n.span);
            return;
        }
        for (const RawNode& child : n.children) {
            if (child.kind == "state") {
                StateNode st;
                auto sid = get_int(child, "id");
                if (!sid) {
                    err("BadParam", "state node needs 'id'", child.span);
                    continue;
                }
                st.id = *sid;
                st.name = get_text(child, "name").value_or("S" + std::to_string(*sid));
                long long tree = get_int(child, "treeNode").value_or(0);
                if (tree != 0) st.parent = tree;
                st.is_default = get_int(child, "default").value_or(0) != 0;
                st.has_history_junction = get_int(child, "history").value_or(0) != 0;
                st.entry_actions = get_stmts(child, "entry");
                st.during_actions = get_stmts(child, "during");
                st.exit_actions = get_stmts(child, "exit");
                chart.states[st.id] = std::move(st);
            } else if (child.kind == "transition") {
                TransitionEdge t;
                auto tid = get_int(child, "id");
                auto src = get_int(child, "src");
                auto dst = get_int(child, "dst");
                if (!tid || !src || !dst) {
                    err("BadParam", "transition node needs 'id', 'src' and 'dst'", child.span);
                    continue;
                }
                t.id = *tid;
                t.src = *src;
                t.dst = *dst;
                t.priority = static_cast<int>(get_int(child, "priority").value_or(1));
                std::string cond = get_text(child, "condition").value_or("true");
                try {
                    t.condition = action::parse_expr(cond);
                } catch (const Error& e) {
                    err(e.code(), "in transition condition: " + std::string(e.what()), child.span);
                    continue;
                }
                t.action = get_stmts(child, "action");
                chart.transitions.push_back(std::move(t));
            } else if (child.kind == "data") {
                ChartData d;
                auto name = get_text(child, "name");
                if (!name) {
                    err("BadParam", "data node needs 'name'", child.span);
                    continue;
                }
                d.name = *name;
                std::string scope = get_text(child, "scope").value_or("Local");
                if (scope == "Local") {
                    d.scope = ChartData::Scope::Local;
                } else if (scope == "Input") {
                    d.scope = ChartData::Scope::Input;
                } else if (scope == "Output") {
                    d.scope = ChartData::Scope::Output;
                } else {
                    err("BadParam", "bad data scope '" + scope + "'", child.span);
                    continue;
                }
                std::string type = get_text(child, "type").value_or("Real");
                if (type == "Bool") {
                    d.type = ValueType::Bool;
                } else if (type == "Int") {
                    d.type = ValueType::Int;
                } else if (type == "Real") {
                    d.type = ValueType::Real;
                } else {
                    err("BadParam", "bad data type '" + type + "'", child.span);
                    continue;
                }
                std::string init = get_text(child, "initial")
                                       .value_or(d.type == ValueType::Bool ? "false" : "0");
                try {
                    if (d.type == ValueType::Bool) {
                        if (init != "true" && init != "false")
                            throw Error("BadParam", "Bool initial must be true or false");
                        d.init = Value(init == "true");
                    } else if (d.type == ValueType::Int) {
                        Rational r = parse_rational(init);
                        if (r.get_den() != 1)
                            throw Error("BadParam", "Int initial must be an integer");
                        d.init = Value(mpz_class(r.get_num()));
                    } else {
                        d.init = Value(parse_rational(init));
                    }
                } catch (const Error& e) {
                    err("BadParam", "bad initial value for '" + d.name + "': " + e.what(),
                        child.span);
                    continue;
                }
                d.port = static_cast<int>(get_int(child, "port").value_or(0));
                if (d.scope != ChartData::Scope::Local && d.type == ValueType::Int) {
                    err("BadParam",
                        "Input/Output data '" + d.name + "' must be Real or Bool (Int is chart-local)",
                        child.span);
                    continue;
                }
                chart.data.push_back(std::move(d));
            }
        }
        // link the state forest
        for (auto& [sid, st] : chart.states) {
            if (!st.parent) continue;
            auto pit = chart.states.find(*st.parent);
            if (pit == chart.states.end()) {
                err("UnresolvedName",
                    "state " + std::to_string(sid) + " names nonexistent parent " +
                        std::to_string(*st.parent),
                    n.span);
                return;
            }
        }
        // substate order follows the document order of state nodes
        for (const RawNode& child : n.children) {
            if (child.kind != "state") continue;
            auto sid = get_int(child, "id");
            if (!sid || !chart.states.count(*sid)) continue;
            const StateNode& st = chart.states.at(*sid);
            if (st.parent) {
                chart.states.at(*st.parent).substates.push_back(*sid);
            } else {
                chart.root_states.push_back(*sid);
            }
        }
        for (const auto& t : chart.transitions) {
            if (!chart.states.count(t.src) || !chart.states.count(t.dst)) {
                err("UnresolvedName",
                    "transition " + std::to_string(t.id) + " references unknown state", n.span);
                return;
            }
        }
        // every sibling group (root level included) has exactly one default
        std::map<long long, int> defaults;  // parent (0 = root) -> count
        defaults[0] = 0;
        for (const auto& [sid, st] : chart.states) {
            if (!st.substates.empty()) defaults[sid] = 0;
            defaults[st.parent.value_or(0)] += st.is_default ? 1 : 0;
        }
        for (const auto& [group, count] : defaults) {
            if (count > 1)
                err("MultipleDefaults",
                    "chart '" + chart.name + "': " + std::to_string(count) +
                        " default states under group " + std::to_string(group),
                    n.span);
            if (count == 0)
                err("MissingDefault",
                    "chart '" + chart.name + "': no default state under group " +
                        std::to_string(group),
                    n.span);
        }
        used_anchors_.insert(chart.anchor_block);
        model_.charts.push_back(std::move(chart));
    }

    // Type environment of a chart: all data members by declared type.
    action::TypeEnv chart_env(const ChartDef& c) {
        action::TypeEnv env;
        for (const auto& d : c.data) env[d.name] = d.type;
        return env;
    }

    void check_stmts(const ChartDef& c, const action::TypeEnv& env,
                     const std::vector<action::Stmt>& stmts, const std::string& where) {
        for (const auto& s : stmts) {
            const ChartData* d = c.find_data(s.target);
            if (d && d->scope == ChartData::Scope::Input) {
                err("AssignToInput",
                    "chart '" + c.name + "': " + where + " assigns input '" + s.target + "'");
                continue;
            }
            try {
                action::typecheck_stmt(s, env);
            } catch (const Error& e) {
                err(e.code() == "UnboundVariable" ? "UnresolvedName" : e.code(),
                    "chart '" + c.name + "', " + where + ": " + e.what());
            }
        }
    }

    void check_actions() {
        for (const auto& c : model_.charts) {
            action::TypeEnv env = chart_env(c);
            for (const auto& [sid, st] : c.states) {
                std::string where = "state '" + st.name + "'";
                check_stmts(c, env, st.entry_actions, where + " entry");
                check_stmts(c, env, st.during_actions, where + " during");
                check_stmts(c, env, st.exit_actions, where + " exit");
            }
            for (const auto& t : c.transitions) {
                try {
                    if (action::typecheck(t.condition, env) != ValueType::Bool)
                        err("TypeError", "chart '" + c.name + "': condition of transition " +
                                             std::to_string(t.id) + " is not Bool");
                } catch (const Error& e) {
                    err(e.code() == "UnboundVariable" ? "UnresolvedName" : e.code(),
                        "chart '" + c.name + "', transition " + std::to_string(t.id) + ": " +
                            e.what());
                }
                check_stmts(c, env, t.action, "transition " + std::to_string(t.id) + " action");
            }
        }
    }

    const RawNode& root_;
    SystemModel model_;
    std::vector<Diagnostic> diags_;
    std::map<long long, SourceSpan> anchor_spans_;
    std::map<long long, std::string> anchor_names_;
    std::set<long long> used_anchors_;

  public:
    const std::map<long long, std::string>& anchor_names() const { return anchor_names_; }
};

}  // namespace

ElaborationResult elaborate(const mdl::RawNode& root) { return Elaborator(root).run(); }

// ------------------------------------------------------------- topo order

std::vector<long long> topo_order(const SystemModel& model) {
    std::vector<long long> nodes;
    for (const auto& b : model.blocks) nodes.push_back(b.id);
    for (const auto& c : model.charts) nodes.push_back(c.anchor_block);
    std::sort(nodes.begin(), nodes.end());

    auto is_delay_like = [&](long long id) {
        if (model.find_chart_by_anchor(id)) return true;
        const BlockInstance* b = model.find_block(id);
        return b && b->kind == BlockKind::UnitDelay;
    };

    std::map<long long, std::set<long long>> succ;
    std::map<long long, int> indeg;
    for (long long id : nodes) indeg[id] = 0;
    for (const auto& c : model.connections) {
        // A delay-like node's output depends only on the previous step, so
        // edges into it impose no same-step ordering; edges out of it do.
        if (is_delay_like(c.dst.id)) continue;
        if (succ[c.src.id].insert(c.dst.id).second) ++indeg[c.dst.id];
    }

    std::priority_queue<long long, std::vector<long long>, std::greater<>> ready;
    for (long long id : nodes)
        if (indeg[id] == 0) ready.push(id);
    std::vector<long long> order;
    while (!ready.empty()) {
        long long id = ready.top();
        ready.pop();
        order.push_back(id);
        for (long long s : succ[id])
            if (--indeg[s] == 0) ready.push(s);
    }
    if (order.size() != nodes.size()) {
        // extract one cycle from the remaining subgraph for the message
        std::set<long long> remaining;
        for (long long id : nodes)
            if (indeg[id] > 0) remaining.insert(id);
        std::ostringstream os;
        os << "algebraic loop through blocks:";
        for (long long id : remaining) os << " " << id;
        throw Error("AlgebraicLoop", os.str());
    }
    return order;
}

// -------------------------------------------------------------- validate

std::vector<Diagnostic> validate(const SystemModel& model) {
    std::vector<Diagnostic> diags;
    auto err = [&](std::string code, std::string message) {
        diags.push_back(error_diag(std::move(code), std::move(message)));
    };

    // unique sanitized node names keep step symbols collision-free
    std::set<std::string> names;
    auto claim_name = [&](const std::string& n) {
        if (!names.insert(sanitize(n)).second)
            err("DuplicateName", "duplicate block/chart name '" + n + "'");
    };
    for (const auto& b : model.blocks) claim_name(b.name);
    for (const auto& c : model.charts) {
        claim_name(c.name);
        if (const BlockInstance* b = model.find_block(c.anchor_block))
            err("BadAnchor", "chart '" + c.name + "' anchor id " + std::to_string(c.anchor_block) +
                                 " is a " + to_string(b->kind) + " block");
    }

    // every in-port driven exactly once
    std::map<Endpoint, int> drivers;
    for (const auto& c : model.connections) ++drivers[c.dst];
    auto check_ports = [&](long long id, int n_in, const std::string& name) {
        for (int p = 1; p <= n_in; ++p) {
            int n = drivers.count({id, p}) ? drivers[{id, p}] : 0;
            if (n == 0)
                err("UnconnectedPort",
                    "in-port " + std::to_string(p) + " of '" + name + "' has no incoming line");
            if (n > 1)
                err("MultipleDrivers",
                    "in-port " + std::to_string(p) + " of '" + name + "' has " + std::to_string(n) +
                        " incoming lines");
        }
    };
    for (const auto& b : model.blocks) check_ports(b.id, b.in_ports, b.name);
    for (const auto& c : model.charts)
        check_ports(c.anchor_block, static_cast<int>(c.inputs().size()), c.name);

    // line type agreement
    for (const auto& c : model.connections) {
        try {
            ValueType st = out_port_type(model, c.src.id, c.src.port);
            const BlockInstance* dstb = model.find_block(c.dst.id);
            if (dstb && dstb->kind == BlockKind::Outport) continue;  // adopts
            ValueType dt = in_port_type(model, c.dst.id, c.dst.port);
            if (st != dt)
                err("TypeMismatch", "line from " + std::to_string(c.src.id) + ":" +
                                        std::to_string(c.src.port) + " carries " + to_string(st) +
                                        " into a " + to_string(dt) + " port of " +
                                        std::to_string(c.dst.id));
        } catch (const Error& e) {
            err(e.code(), e.what());
        }
    }

    for (const auto& c : model.charts) {
        // default-state coverage per sibling group
        std::vector<long long> groups{0};
        for (const auto& [sid, st] : c.states)
            if (!st.substates.empty()) groups.push_back(sid);
        for (long long g : groups) {
            const auto& sibs = c.substates_of(g);
            if (g == 0 && sibs.empty()) {
                err("EmptyChart", "chart '" + c.name + "' has no states");
                continue;
            }
            if (sibs.empty()) continue;
            int defaults = 0;
            for (long long sid : sibs) defaults += c.state(sid).is_default ? 1 : 0;
            if (defaults == 0)
                err("MissingDefault", "chart '" + c.name + "': no default state under group " +
                                          std::to_string(g));
            if (defaults > 1)
                err("MultipleDefaults", "chart '" + c.name + "': " + std::to_string(defaults) +
                                            " default states under group " + std::to_string(g));
        }
        // sibling-only transitions with distinct priorities
        std::map<long long, std::set<int>> prios;
        for (const auto& t : c.transitions) {
            const StateNode& s = c.state(t.src);
            const StateNode& d = c.state(t.dst);
            if (s.parent != d.parent)
                err("NonSiblingTransition",
                    "chart '" + c.name + "': transition " + std::to_string(t.id) +
                        " connects non-sibling states");
            if (!prios[t.src].insert(t.priority).second)
                err("DuplicatePriority", "chart '" + c.name + "': state " + std::to_string(t.src) +
                                             " has two transitions with priority " +
                                             std::to_string(t.priority));
        }
        // unique data names; Input ports contiguous
        std::set<std::string> dnames;
        for (const auto& d : c.data)
            if (!dnames.insert(d.name).second)
                err("DuplicateName", "chart '" + c.name + "': duplicate data '" + d.name + "'");
    }

    try {
        topo_order(model);
    } catch (const Error& e) {
        err(e.code(), e.what());
    }
    return diags;
}

}  // namespace tickcheck::model

#include "tickcheck/sim.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tickcheck::sim {

using model::BlockInstance;
using model::BlockKind;
using model::ChartData;
using model::ChartDef;
using model::Connection;
using model::StateNode;
using model::SystemModel;
using model::TransitionEdge;

const std::vector<Value>& Trace::at(const std::string& base) const {
    auto it = vals.find(base);
    if (it == vals.end()) throw Error("UnknownName", "trace has no vector '" + base + "'");
    return it->second;
}

const std::vector<bool>& Trace::ticks_of(const std::string& clock) const {
    auto it = ticks.find(clock);
    if (it == ticks.end())
        throw Error("ClockUndefinedOnTrace", "clock '" + clock + "' not derived on this trace");
    return it->second;
}

namespace {

// Mutable execution state of one chart.
struct ChartRuntime {
    const ChartDef* chart;
    std::vector<long long> config;          // active chain, outer -> inner
    std::map<std::string, Value> vars;      // Local + Output data
    std::map<long long, long long> history; // history-junction parent -> last substate

    // Descend from `first` picking history or default substates.
    std::vector<long long> enter_chain(long long first) const {
        std::vector<long long> chain;
        long long cur = first;
        while (true) {
            chain.push_back(cur);
            const StateNode& st = chart->state(cur);
            if (st.substates.empty()) break;
            cur = st.has_history_junction ? history.at(cur) : chart->default_substate(cur);
        }
        return chain;
    }
};

class Simulator {
  public:
    Simulator(const SystemModel& model, long long bound, const PinMap& pins, const InputMap& inputs)
        : model_(model), bound_(bound), pins_(pins), inputs_(inputs) {}

    Trace run() {
        trace_.bound = bound_;
        for (const auto& v : model::vector_catalog(model_))
            trace_.vals[v.base].resize(static_cast<size_t>(bound_));
        order_ = model::topo_order(model_);
        for (const auto& c : model_.charts) {
            ChartRuntime rt;
            rt.chart = &c;
            for (const auto& [sid, st] : c.states)
                if (st.has_history_junction) rt.history[sid] = c.default_substate(sid);
            charts_.push_back(std::move(rt));
        }
        for (long long i = 0; i < bound_; ++i) {
            step_ = i;
            for (long long id : order_) eval_node(id);
            for (auto& rt : charts_) chart_step(rt);
        }
        return std::move(trace_);
    }

  private:
    void set(const std::string& base, Value v) {
        trace_.vals.at(base)[static_cast<size_t>(step_)] = std::move(v);
    }
    const Value& get(const std::string& base, long long i) const {
        return trace_.vals.at(base)[static_cast<size_t>(i)];
    }

    void propagate(long long id, int port, const Value& v) {
        for (const Connection& c : model_.connections) {
            if (c.src.id != id || c.src.port != port) continue;
            set(model::in_symbol(model_, c.dst.id, c.dst.port), v);
        }
    }

    Value in_val(long long id, int port) const {
        return get(model::in_symbol(model_, id, port), step_);
    }

    void eval_node(long long id) {
        if (const ChartDef* c = model_.find_chart_by_anchor(id)) {
            auto outs = c->outputs();
            for (int p = 1; p <= static_cast<int>(outs.size()); ++p) {
                const ChartData* d = outs[static_cast<size_t>(p - 1)];
                Value v = step_ == 0 ? d->init : get(model::var_symbol(*c, d->name), step_ - 1);
                set(model::out_symbol(model_, id, p), v);
                propagate(id, p, v);
            }
            return;
        }
        const BlockInstance& b = *model_.find_block(id);
        if (b.out_ports == 0) return;  // Outport: its in-port value is the signal
        Value out;
        switch (b.kind) {
            case BlockKind::Constant:
                out = b.constant;
                break;
            case BlockKind::Gain:
                out = Value(Rational(b.gain * in_val(id, 1).as_rational()));
                break;
            case BlockKind::Sum: {
                Rational acc = 0;
                for (int p = 1; p <= b.in_ports; ++p) {
                    Rational v = in_val(id, p).as_rational();
                    acc += b.signs[static_cast<size_t>(p - 1)] == '+' ? v : -v;
                }
                out = Value(acc);
                break;
            }
            case BlockKind::Product: {
                Rational acc = 1;
                for (int p = 1; p <= b.in_ports; ++p) acc *= in_val(id, p).as_rational();
                out = Value(acc);
                break;
            }
            case BlockKind::RelationalOperator: {
                Rational a = in_val(id, 1).as_rational(), c = in_val(id, 2).as_rational();
                bool r;
                if (b.op == "<") r = a < c;
                else if (b.op == "<=") r = a <= c;
                else if (b.op == ">") r = a > c;
                else if (b.op == ">=") r = a >= c;
                else if (b.op == "==") r = a == c;
                else r = a != c;  // ~=
                out = Value(r);
                break;
            }
            case BlockKind::LogicalOperator: {
                if (b.op == "NOT") {
                    out = Value(!in_val(id, 1).as_bool());
                } else {
                    bool r = b.op == "AND";
                    for (int p = 1; p <= b.in_ports; ++p) {
                        bool v = in_val(id, p).as_bool();
                        r = b.op == "AND" ? (r && v) : (r || v);
                    }
                    out = Value(r);
                }
                break;
            }
            case BlockKind::Switch: {
                bool pass = in_val(id, 2).as_rational() >= b.threshold;
                out = pass ? in_val(id, 1) : in_val(id, 3);
                break;
            }
            case BlockKind::UnitDelay:
                out = step_ == 0 ? b.delay_init
                                 : get(model::in_symbol(model_, id, 1), step_ - 1);
                break;
            case BlockKind::Inport: {
                auto it = inputs_.find(id);
                if (it == inputs_.end() || static_cast<long long>(it->second.size()) <= step_)
                    throw Error("MissingPin", "no input value for Inport '" + b.name +
                                                  "' at step " + std::to_string(step_));
                out = it->second[static_cast<size_t>(step_)];
                break;
            }
            case BlockKind::RandomSource: {
                auto it = pins_.find({id, step_});
                if (it == pins_.end())
                    throw Error("MissingPin", "no pinned value for RandomSource '" + b.name +
                                                  "' at step " + std::to_string(step_));
                out = it->second;
                break;
            }
            default:
                throw Error("UnsupportedKind", "cannot simulate block kind " + to_string(b.kind));
        }
        set(model::out_symbol(model_, id, 1), out);
        propagate(id, 1, out);
    }

    // Variable/input environment the chart reads at this step: variables
    // and inputs from step i-1, except step 0 entry which reads step-0
    // inputs (blocks are already evaluated) and initial variable values.
    action::Store chart_store(const ChartRuntime& rt) const {
        action::Store store;
        const ChartDef& c = *rt.chart;
        long long read_step = step_ == 0 ? 0 : step_ - 1;
        for (const ChartData* d : c.inputs())
            store[d->name] = get(model::in_symbol(model_, c.anchor_block, d->port), read_step);
        for (const auto& [name, v] : rt.vars) store[name] = v;
        return store;
    }

    void run_actions(ChartRuntime& rt, action::Store& store,
                     const std::vector<action::Stmt>& stmts) {
        for (const auto& s : stmts) {
            try {
                store[s.target] = action::eval_concrete(s.rhs, store);
            } catch (const Error& e) {
                throw Error(e.code(),
                            std::string(e.what()) + " (chart '" + rt.chart->name + "', step " +
                                std::to_string(step_) + ")");
            }
            rt.vars[s.target] = store[s.target];
        }
    }

    void record_chart(const ChartRuntime& rt) {
        const ChartDef& c = *rt.chart;
        std::set<long long> active(rt.config.begin(), rt.config.end());
        for (const auto& [sid, st] : c.states)
            set(model::act_symbol(c, sid), Value(static_cast<long long>(active.count(sid))));
        for (const auto& [name, v] : rt.vars) set(model::var_symbol(c, name), v);
        for (const auto& [sid, sub] : rt.history) set(model::hist_symbol(c, sid), Value(sub));
    }

    void chart_step(ChartRuntime& rt) {
        const ChartDef& c = *rt.chart;
        if (step_ == 0) {
            for (const ChartData* d : c.variables()) rt.vars[d->name] = d->init;
            rt.config = rt.enter_chain(c.default_substate(0));
            action::Store store = chart_store(rt);
            for (long long sid : rt.config) run_actions(rt, store, c.state(sid).entry_actions);
        } else {
            action::Store store = chart_store(rt);
            // first enabled transition, outermost active state first,
            // priority order within a state
            const TransitionEdge* fired = nullptr;
            size_t src_depth = 0;
            for (size_t d = 0; d < rt.config.size() && !fired; ++d) {
                for (const TransitionEdge* t : c.transitions_from(rt.config[d])) {
                    if (action::eval_concrete(t->condition, store).as_bool()) {
                        fired = t;
                        src_depth = d;
                        break;
                    }
                }
            }
            if (fired) {
                // exit the source and its active descendants, innermost first
                for (size_t d = rt.config.size(); d-- > src_depth;)
                    run_actions(rt, store, c.state(rt.config[d]).exit_actions);
                run_actions(rt, store, fired->action);
                std::vector<long long> entered = rt.enter_chain(fired->dst);
                rt.config.resize(src_depth);
                rt.config.insert(rt.config.end(), entered.begin(), entered.end());
                for (long long sid : entered) run_actions(rt, store, c.state(sid).entry_actions);
            } else {
                for (long long sid : rt.config) run_actions(rt, store, c.state(sid).during_actions);
            }
        }
        // history tracks the active substate of its parent
        for (size_t d = 0; d + 1 < rt.config.size(); ++d) {
            if (c.state(rt.config[d]).has_history_junction)
                rt.history[rt.config[d]] = rt.config[d + 1];
        }
        record_chart(rt);
    }

    const SystemModel& model_;
    long long bound_;
    const PinMap& pins_;
    const InputMap& inputs_;
    Trace trace_;
    std::vector<long long> order_;
    std::vector<ChartRuntime> charts_;
    long long step_ = 0;
};

}  // namespace

Trace simulate(const SystemModel& model, long long bound, const PinMap& pins,
               const InputMap& inputs) {
    if (bound < 1) throw Error("BoundTooSmall", "simulation bound must be >= 1");
    return Simulator(model, bound, pins, inputs).run();
}

void derive_ticks(const SystemModel& model, Trace& trace, const std::vector<ccsl::Clock>& clocks) {
    for (const auto& clk : clocks) {
        std::vector<bool> t(static_cast<size_t>(trace.bound), false);
        switch (clk.source) {
            case ccsl::Clock::Source::Every: {
                for (long long i = clk.offset; i < trace.bound; i += clk.period)
                    t[static_cast<size_t>(i)] = true;
                break;
            }
            case ccsl::Clock::Source::Entered: {
                auto rs = model::resolve_state_path(model, clk.state_path);
                const auto& act = trace.at(model::act_symbol(*rs.chart, rs.state_id));
                for (long long i = 0; i < trace.bound; ++i) {
                    bool now = act[static_cast<size_t>(i)].as_int() == 1;
                    bool before = i > 0 && act[static_cast<size_t>(i - 1)].as_int() == 1;
                    t[static_cast<size_t>(i)] = now && !before;
                }
                break;
            }
            case ccsl::Clock::Source::Rising: {
                // evaluate the edge expression over resolved trace vectors
                std::set<std::string> free;
                std::vector<const action::Expr*> work{clk.expr.get()};
                while (!work.empty()) {
                    const action::Expr* e = work.back();
                    work.pop_back();
                    if (e->op == action::Op::Var) free.insert(e->name);
                    if (e->lhs) work.push_back(e->lhs.get());
                    if (e->rhs) work.push_back(e->rhs.get());
                }
                auto value_at = [&](long long i) {
                    action::Store store;
                    for (const auto& name : free) {
                        auto r = model::resolve_trace_name(model, name);
                        store[name] = trace.at(r.base)[static_cast<size_t>(i)];
                    }
                    Value v = action::eval_concrete(clk.expr, store);
                    if (v.type() != ValueType::Bool)
                        throw Error("TypeError", "rising() expression of clock '" + clk.name +
                                                     "' is not Bool");
                    return v.as_bool();
                };
                bool prev = false;
                for (long long i = 0; i < trace.bound; ++i) {
                    bool now = value_at(i);
                    t[static_cast<size_t>(i)] = now && (i == 0 || !prev);
                    prev = now;
                }
                break;
            }
        }
        trace.ticks[clk.name] = std::move(t);
    }
}

std::string to_csv(const Trace& trace) {
    std::ostringstream os;
    std::vector<std::string> cols;
    for (const auto& [name, _] : trace.vals) cols.push_back(name);
    for (const auto& [name, _] : trace.ticks) cols.push_back("tick:" + name);
    os << "step";
    for (const auto& c : cols) os << "," << c;
    os << "\n";
    auto render = [](const Value& v) -> std::string {
        switch (v.type()) {
            case ValueType::Bool: return v.as_bool() ? "true" : "false";
            case ValueType::Int: return v.as_int().get_str();
            default: return rational_to_string(v.as_real());
        }
    };
    for (long long i = 0; i < trace.bound; ++i) {
        os << i;
        for (const auto& [name, vec] : trace.vals) os << "," << render(vec[static_cast<size_t>(i)]);
        for (const auto& [name, vec] : trace.ticks)
            os << "," << (vec[static_cast<size_t>(i)] ? 1 : 0);
        os << "\n";
    }
    return os.str();
}

}  // namespace tickcheck::sim

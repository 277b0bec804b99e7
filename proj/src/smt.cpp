#include "tickcheck/smt.hpp"

#include <algorithm>
#include <sstream>

namespace tickcheck::smt {

using model::BlockInstance;
using model::BlockKind;
using model::ChartData;
using model::ChartDef;
using model::StateNode;
using model::SystemModel;
using model::TransitionEdge;

// ------------------------------------------------------------- helpers

std::string app(const std::string& op, const std::vector<std::string>& args) {
    std::string out = "(" + op;
    for (const auto& a : args) {
        out += ' ';
        out += a;
    }
    out += ')';
    return out;
}

std::string conj(const std::vector<std::string>& parts) {
    if (parts.empty()) return "true";
    if (parts.size() == 1) return parts.front();
    return app("and", parts);
}

std::string disj(const std::vector<std::string>& parts) {
    if (parts.empty()) return "false";
    if (parts.size() == 1) return parts.front();
    return app("or", parts);
}

std::string implies(const std::string& a, const std::string& b) { return app("=>", {a, b}); }

static std::string sort_name(ValueType t) {
    switch (t) {
        case ValueType::Bool: return "Bool";
        case ValueType::Int: return "Int";
        default: return "Real";
    }
}

// ------------------------------------------------------- EncodingContext

EncodingContext::EncodingContext(const SystemModel& model, long long bound, std::string prefix)
    : model_(&model), bound_(bound), prefix_(std::move(prefix)) {
    if (bound < 1) throw Error("BoundTooSmall", "encoding bound must be >= 1");
}

std::string EncodingContext::sym(const std::string& base, long long step) const {
    auto it = vectors_.find(base);
    if (it == vectors_.end())
        throw Error("UndeclaredSymbol", "vector '" + base + "' was never declared");
    if (step < 0 || step >= it->second.second)
        throw Error("UndeclaredSymbol",
                    "step " + std::to_string(step) + " out of range for vector '" + base + "'");
    return prefix_ + base + "__" + std::to_string(step);
}

void EncodingContext::declare_vector(const std::string& base, ValueType sort, long long count) {
    if (!vectors_.emplace(base, std::make_pair(sort, count)).second)
        throw Error("DuplicateSymbol", "vector '" + base + "' declared twice");
    for (long long i = 0; i < count; ++i)
        declare_const(prefix_ + base + "__" + std::to_string(i), sort);
}

void EncodingContext::declare_const(const std::string& name, ValueType sort) {
    if (!declared_.insert(name).second)
        throw Error("DuplicateSymbol", "symbol '" + name + "' declared twice");
    decls_.push_back({name, sort});
}

ValueType EncodingContext::vector_sort(const std::string& base) const {
    auto it = vectors_.find(base);
    if (it == vectors_.end())
        throw Error("UndeclaredSymbol", "vector '" + base + "' was never declared");
    return it->second.first;
}

void EncodingContext::add_assertion(std::string formula) {
    assertions_.push_back(std::move(formula));
}

void EncodingContext::set_pins(const sim::PinMap& pins) {
    // must cover every (RandomSource, step) pair exactly once
    for (const auto& b : model_->blocks) {
        if (b.kind != BlockKind::RandomSource) continue;
        for (long long i = 0; i < bound_; ++i) {
            if (!pins.count({b.id, i}))
                throw Error("MissingPin", "scenario pins missing (" + b.name + ", step " +
                                              std::to_string(i) + ")");
        }
    }
    pins_ = pins;
}

void EncodingContext::set_inputs(const sim::InputMap& inputs) { inputs_ = inputs; }

// ----------------------------------------------------------- expressions

namespace {

bool is_int_literal_tree(const action::ExprPtr& e) {
    if (e->op == action::Op::Lit) return e->literal.type() == ValueType::Int;
    if (e->op == action::Op::Neg) return is_int_literal_tree(e->lhs);
    return false;
}

Term coerce_real(Term t, const action::ExprPtr& origin) {
    if (t.type != ValueType::Int) return t;
    if (origin && is_int_literal_tree(origin)) {
        Value v = action::eval_concrete(origin, {});
        return {smt_real_literal(Rational(v.as_int())), ValueType::Real};
    }
    // fallback: an explicit conversion keeps the sorts straight
    return {app("to_real", {t.text}), ValueType::Real};
}

}  // namespace

Term encode_expr(const action::ExprPtr& e, const TermEnv& env) {
    using action::Op;
    switch (e->op) {
        case Op::Lit:
            return {smt_literal(e->literal), e->literal.type()};
        case Op::Var: {
            auto it = env.find(e->name);
            if (it == env.end())
                throw Error("UnboundVariable", "no encoding for variable '" + e->name + "'");
            return it->second;
        }
        case Op::Neg: {
            Term t = encode_expr(e->lhs, env);
            return {app("-", {t.text}), t.type};
        }
        case Op::Not: {
            Term t = encode_expr(e->lhs, env);
            return {app("not", {t.text}), ValueType::Bool};
        }
        case Op::And:
        case Op::Or: {
            Term l = encode_expr(e->lhs, env);
            Term r = encode_expr(e->rhs, env);
            return {app(e->op == Op::And ? "and" : "or", {l.text, r.text}), ValueType::Bool};
        }
        default: {
            Term l = encode_expr(e->lhs, env);
            Term r = encode_expr(e->rhs, env);
            if (l.type != r.type) {
                // typechecker guarantees the Int side is a literal
                if (l.type == ValueType::Int) l = coerce_real(l, e->lhs);
                if (r.type == ValueType::Int) r = coerce_real(r, e->rhs);
            }
            bool ints = l.type == ValueType::Int;
            std::string op;
            ValueType out = l.type;
            switch (e->op) {
                case Op::Add: op = "+"; break;
                case Op::Sub: op = "-"; break;
                case Op::Mul: op = "*"; break;
                case Op::Div: op = ints ? "div" : "/"; break;
                case Op::Lt: op = "<"; out = ValueType::Bool; break;
                case Op::Le: op = "<="; out = ValueType::Bool; break;
                case Op::Gt: op = ">"; out = ValueType::Bool; break;
                case Op::Ge: op = ">="; out = ValueType::Bool; break;
                case Op::Eq: op = "="; out = ValueType::Bool; break;
                default: out = ValueType::Bool; break;  // Ne
            }
            if (e->op == Op::Ne) return {app("not", {app("=", {l.text, r.text})}), out};
            return {app(op, {l.text, r.text}), out};
        }
    }
}

// ------------------------------------------------------------- encoding

namespace {

// chain entered from the chart's default root state, defaults all the way
std::vector<long long> initial_config(const ChartDef& c) {
    std::vector<long long> chain;
    long long cur = c.default_substate(0);
    while (true) {
        chain.push_back(cur);
        const StateNode& st = c.state(cur);
        if (st.substates.empty()) break;
        cur = c.default_substate(cur);
    }
    return chain;
}

// variable names assigned anywhere in the statement list
void collect_targets(const std::vector<action::Stmt>& stmts, std::set<std::string>& out) {
    for (const auto& s : stmts) out.insert(s.target);
}

std::set<std::string> initial_entry_targets(const ChartDef& c) {
    std::set<std::string> out;
    for (long long sid : initial_config(c)) collect_targets(c.state(sid).entry_actions, out);
    return out;
}

}  // namespace

EncodingContext init_context(const SystemModel& model, long long bound, std::string prefix) {
    EncodingContext ctx(model, bound, std::move(prefix));
    for (const auto& v : model::vector_catalog(model)) ctx.declare_vector(v.base, v.type, bound);
    // state activity is an integer restricted to {0,1}
    for (const auto& v : model::vector_catalog(model)) {
        if (v.cls != model::VectorInfo::Class::StateActivity) continue;
        for (long long i = 0; i < bound; ++i) {
            std::string s = ctx.sym(v.base, i);
            ctx.add_assertion(app("or", {app("=", {s, "0"}), app("=", {s, "1"})}));
        }
    }
    for (const auto& b : model.blocks) {
        if (b.kind == BlockKind::UnitDelay)
            ctx.add_assertion(
                app("=", {ctx.sym(model::out_symbol(model, b.id, 1), 0), smt_literal(b.delay_init)}));
    }
    // chart variables keep their declared initial value at step 0 unless
    // an initial entry action reassigns them (encode_chart pins those)
    for (const auto& c : model.charts) {
        std::set<std::string> entry_targets = initial_entry_targets(c);
        for (const ChartData* d : c.variables()) {
            if (entry_targets.count(d->name)) continue;
            ctx.add_assertion(
                app("=", {ctx.sym(model::var_symbol(c, d->name), 0), smt_literal(d->init)}));
        }
    }
    return ctx;
}

void encode_lines(EncodingContext& ctx) {
    const SystemModel& m = ctx.system();
    for (const auto& c : m.connections) {
        std::string src = model::out_symbol(m, c.src.id, c.src.port);
        std::string dst = model::in_symbol(m, c.dst.id, c.dst.port);
        for (long long i = 0; i < ctx.bound(); ++i)
            ctx.add_assertion(app("=", {ctx.sym(src, i), ctx.sym(dst, i)}));
    }
}

void encode_block(EncodingContext& ctx, const BlockInstance& b) {
    const SystemModel& m = ctx.system();
    long long N = ctx.bound();
    auto out = [&](long long i) { return ctx.sym(model::out_symbol(m, b.id, 1), i); };
    auto in = [&](int p, long long i) { return ctx.sym(model::in_symbol(m, b.id, p), i); };
    switch (b.kind) {
        case BlockKind::Constant: {
            std::string c = smt_literal(b.constant);
            for (long long i = 0; i < N; ++i) ctx.add_assertion(app("=", {out(i), c}));
            break;
        }
        case BlockKind::Gain: {
            std::string k = smt_real_literal(b.gain);
            for (long long i = 0; i < N; ++i)
                ctx.add_assertion(app("=", {out(i), app("*", {k, in(1, i)})}));
            break;
        }
        case BlockKind::Sum: {
            for (long long i = 0; i < N; ++i) {
                std::vector<std::string> terms;
                for (int p = 1; p <= b.in_ports; ++p) {
                    std::string t = in(p, i);
                    if (b.signs[static_cast<size_t>(p - 1)] == '-') t = app("-", {t});
                    terms.push_back(t);
                }
                ctx.add_assertion(app("=", {out(i), terms.size() == 1 ? terms[0] : app("+", terms)}));
            }
            break;
        }
        case BlockKind::Product: {
            for (long long i = 0; i < N; ++i) {
                std::vector<std::string> terms;
                for (int p = 1; p <= b.in_ports; ++p) terms.push_back(in(p, i));
                ctx.add_assertion(app("=", {out(i), terms.size() == 1 ? terms[0] : app("*", terms)}));
            }
            break;
        }
        case BlockKind::RelationalOperator: {
            for (long long i = 0; i < N; ++i) {
                std::string cmp;
                if (b.op == "~=") {
                    cmp = app("not", {app("=", {in(1, i), in(2, i)})});
                } else {
                    cmp = app(b.op == "==" ? "=" : b.op, {in(1, i), in(2, i)});
                }
                ctx.add_assertion(app("=", {out(i), cmp}));
            }
            break;
        }
        case BlockKind::LogicalOperator: {
            for (long long i = 0; i < N; ++i) {
                std::string f;
                if (b.op == "NOT") {
                    f = app("not", {in(1, i)});
                } else {
                    std::vector<std::string> terms;
                    for (int p = 1; p <= b.in_ports; ++p) terms.push_back(in(p, i));
                    f = app(b.op == "AND" ? "and" : "or", terms);
                }
                ctx.add_assertion(app("=", {out(i), f}));
            }
            break;
        }
        case BlockKind::Switch: {
            std::string thr = smt_real_literal(b.threshold);
            for (long long i = 0; i < N; ++i)
                ctx.add_assertion(app(
                    "=", {out(i), app("ite", {app(">=", {in(2, i), thr}), in(1, i), in(3, i)})}));
            break;
        }
        case BlockKind::UnitDelay: {
            // step 0 is asserted by init_context
            for (long long i = 1; i < N; ++i)
                ctx.add_assertion(app("=", {out(i), in(1, i - 1)}));
            break;
        }
        case BlockKind::Inport: {
            if (const sim::InputMap* inputs = ctx.inputs()) {
                auto it = inputs->find(b.id);
                if (it == inputs->end())
                    throw Error("MissingPin", "no input series for Inport '" + b.name + "'");
                for (long long i = 0; i < N; ++i)
                    ctx.add_assertion(
                        app("=", {out(i), smt_literal(it->second.at(static_cast<size_t>(i)))}));
            }
            // otherwise the input is a free symbol per step
            break;
        }
        case BlockKind::RandomSource: {
            if (const sim::PinMap* pins = ctx.pins()) {
                for (long long i = 0; i < N; ++i)
                    ctx.add_assertion(app("=", {out(i), smt_literal(pins->at({b.id, i}))}));
                break;
            }
            // support constraints only: a sound "for all disturbances" mode
            for (long long i = 0; i < N; ++i) {
                switch (b.dist.kind) {
                    case model::Distribution::Kind::UniformInt:
                    case model::Distribution::Kind::UniformReal:
                        ctx.add_assertion(app("<=", {smt_real_literal(b.dist.lo), out(i)}));
                        ctx.add_assertion(app("<=", {out(i), smt_real_literal(b.dist.hi)}));
                        break;
                    case model::Distribution::Kind::Bernoulli:
                        ctx.add_assertion(app("or", {app("=", {out(i), "0.0"}),
                                                     app("=", {out(i), "1.0"})}));
                        break;
                    case model::Distribution::Kind::DiscreteChoice: {
                        std::vector<std::string> alts;
                        for (const auto& v : b.dist.values)
                            alts.push_back(app("=", {out(i), smt_real_literal(v)}));
                        ctx.add_assertion(disj(alts));
                        break;
                    }
                }
            }
            break;
        }
        case BlockKind::Outport:
            break;  // its in-port symbol is the signal; lines pin it
    }
}

namespace {

// One way the chart can react in a step: a guard over step i-1 symbols
// plus the resulting configuration and action sequence.
struct Scenario {
    std::vector<std::string> guard;           // conjuncts at step i-1
    std::vector<long long> config;            // active chain at step i
    std::vector<const std::vector<action::Stmt>*> actions;  // execution order
};

class ChartEncoder {
  public:
    ChartEncoder(EncodingContext& ctx, const ChartDef& chart) : ctx_(ctx), c_(chart) {
        enumerate_configs(0, {});
    }

    void run() {
        encode_step0();
        for (long long i = 1; i < ctx_.bound(); ++i) encode_step(i);
        encode_anchor_ports();
        encode_partition();
    }

  private:
    // all root-to-leaf chains
    void enumerate_configs(long long group, std::vector<long long> prefix) {
        for (long long sid : c_.substates_of(group)) {
            std::vector<long long> chain = prefix;
            chain.push_back(sid);
            if (c_.state(sid).substates.empty()) {
                configs_.push_back(chain);
            } else {
                enumerate_configs(sid, chain);
            }
        }
    }

    TermEnv env_at(long long step) const {
        TermEnv env;
        const SystemModel& m = ctx_.system();
        for (const ChartData* d : c_.inputs())
            env[d->name] = {ctx_.sym(model::in_symbol(m, c_.anchor_block, d->port), step), d->type};
        for (const ChartData* d : c_.variables())
            env[d->name] = {ctx_.sym(model::var_symbol(c_, d->name), step), d->type};
        return env;
    }

    void apply_actions(TermEnv& store, const std::vector<action::Stmt>& stmts) const {
        for (const auto& s : stmts) {
            Term t = encode_expr(s.rhs, store);
            ValueType want = c_.find_data(s.target)->type;
            if (t.type == ValueType::Int && want == ValueType::Real)
                t = {smt_real_literal(Rational(action::eval_concrete(s.rhs, {}).as_int())),
                     ValueType::Real};
            t.type = want;
            store[s.target] = t;
        }
    }

    // descend from `first`; at history junctions branch on the remembered
    // substate (a guard over hist symbols at step i-1)
    struct EnterPath {
        std::vector<std::pair<long long, long long>> hist_req;  // (parent, substate)
        std::vector<long long> chain;
    };
    void enter_paths(long long first, EnterPath cur, std::vector<EnterPath>& out) const {
        cur.chain.push_back(first);
        const StateNode& st = c_.state(first);
        if (st.substates.empty()) {
            out.push_back(cur);
            return;
        }
        if (st.has_history_junction) {
            for (long long sub : st.substates) {
                EnterPath next = cur;
                next.hist_req.emplace_back(first, sub);
                enter_paths(sub, next, out);
            }
        } else {
            enter_paths(c_.default_substate(first), cur, out);
        }
    }

    // effect conjunction: all activities, all variables, all hist vars
    std::string effects(long long i, const Scenario& sc) const {
        std::vector<std::string> eff;
        std::set<long long> active(sc.config.begin(), sc.config.end());
        for (const auto& [sid, st] : c_.states)
            eff.push_back(app("=", {ctx_.sym(model::act_symbol(c_, sid), i),
                                    active.count(sid) ? "1" : "0"}));
        TermEnv store = env_at(i - 1);
        for (const auto* stmts : sc.actions) apply_actions(store, *stmts);
        for (const ChartData* d : c_.variables())
            eff.push_back(
                app("=", {ctx_.sym(model::var_symbol(c_, d->name), i), store.at(d->name).text}));
        // hist tracks the active substate while the parent is active
        for (const auto& [sid, st] : c_.states) {
            if (!st.has_history_junction) continue;
            std::string h = ctx_.sym(model::hist_symbol(c_, sid), i);
            std::string next;
            if (active.count(sid)) {
                long long sub = 0;
                for (size_t d = 0; d + 1 < sc.config.size(); ++d)
                    if (sc.config[d] == sid) sub = sc.config[d + 1];
                next = std::to_string(sub);
            } else {
                next = ctx_.sym(model::hist_symbol(c_, sid), i - 1);
            }
            eff.push_back(app("=", {h, next}));
        }
        return conj(eff);
    }

    void encode_step0() {
        std::vector<long long> config = initial_config(c_);
        std::set<long long> active(config.begin(), config.end());
        for (const auto& [sid, st] : c_.states)
            ctx_.add_assertion(app(
                "=", {ctx_.sym(model::act_symbol(c_, sid), 0), active.count(sid) ? "1" : "0"}));
        // entry actions over initial values; inputs read step-0 signals
        TermEnv store;
        const SystemModel& m = ctx_.system();
        for (const ChartData* d : c_.inputs())
            store[d->name] = {ctx_.sym(model::in_symbol(m, c_.anchor_block, d->port), 0), d->type};
        for (const ChartData* d : c_.variables())
            store[d->name] = {smt_literal(d->init), d->type};
        std::set<std::string> targets;
        for (long long sid : config) {
            apply_actions(store, c_.state(sid).entry_actions);
            collect_targets(c_.state(sid).entry_actions, targets);
        }
        for (const ChartData* d : c_.variables()) {
            if (!targets.count(d->name)) continue;  // init_context already pinned it
            ctx_.add_assertion(
                app("=", {ctx_.sym(model::var_symbol(c_, d->name), 0), store.at(d->name).text}));
        }
        for (const auto& [sid, st] : c_.states) {
            if (!st.has_history_junction) continue;
            long long sub = c_.default_substate(sid);
            for (size_t d = 0; d + 1 < config.size(); ++d)
                if (config[d] == sid) sub = config[d + 1];
            ctx_.add_assertion(
                app("=", {ctx_.sym(model::hist_symbol(c_, sid), 0), std::to_string(sub)}));
        }
    }

    void encode_step(long long i) {
        TermEnv env = env_at(i - 1);
        for (const auto& chain : configs_) {
            std::string chain_guard =
                app("=", {ctx_.sym(model::act_symbol(c_, chain.back()), i - 1), "1"});
            // candidate transitions: outermost active state first, then
            // priority order; the first whose condition holds fires
            std::vector<std::pair<size_t, const TransitionEdge*>> cands;
            for (size_t d = 0; d < chain.size(); ++d)
                for (const TransitionEdge* t : c_.transitions_from(chain[d]))
                    cands.emplace_back(d, t);
            std::sort(cands.begin(), cands.end(),
                      [&](const auto& a, const auto& b) {
                          if (a.first != b.first) return a.first < b.first;
                          const TransitionEdge *x = a.second, *y = b.second;
                          return x->priority != y->priority ? x->priority < y->priority
                                                            : x->id < y->id;
                      });
            std::vector<std::string> negs;
            for (const auto& [depth, t] : cands) {
                // defensive re-check of the sibling invariant
                if (c_.state(t->src).parent != c_.state(t->dst).parent)
                    throw Error("NonSiblingTransition",
                                "transition " + std::to_string(t->id) + " is not sibling-local");
                std::string cond = encode_expr(t->condition, env).text;
                std::vector<EnterPath> paths;
                enter_paths(t->dst, {}, paths);
                for (const EnterPath& p : paths) {
                    Scenario sc;
                    sc.guard.push_back(chain_guard);
                    sc.guard.insert(sc.guard.end(), negs.begin(), negs.end());
                    sc.guard.push_back(cond);
                    for (const auto& [parent, sub] : p.hist_req)
                        sc.guard.push_back(app(
                            "=", {ctx_.sym(model::hist_symbol(c_, parent), i - 1),
                                  std::to_string(sub)}));
                    sc.config.assign(chain.begin(), chain.begin() + static_cast<long>(depth));
                    sc.config.insert(sc.config.end(), p.chain.begin(), p.chain.end());
                    // exits innermost-first, then the transition action,
                    // then entries outermost-first
                    for (size_t d = chain.size(); d-- > depth;)
                        sc.actions.push_back(&c_.state(chain[d]).exit_actions);
                    sc.actions.push_back(&t->action);
                    for (long long sid : p.chain) sc.actions.push_back(&c_.state(sid).entry_actions);
                    ctx_.add_assertion(implies(conj(sc.guard), effects(i, sc)));
                }
                negs.push_back(app("not", {cond}));
            }
            Scenario stay;
            stay.guard.push_back(chain_guard);
            stay.guard.insert(stay.guard.end(), negs.begin(), negs.end());
            stay.config = chain;
            for (long long sid : chain) stay.actions.push_back(&c_.state(sid).during_actions);
            ctx_.add_assertion(implies(conj(stay.guard), effects(i, stay)));
        }
    }

    // the anchor's out-ports expose chart outputs with a one-step delay
    void encode_anchor_ports() {
        const SystemModel& m = ctx_.system();
        auto outs = c_.outputs();
        for (int p = 1; p <= static_cast<int>(outs.size()); ++p) {
            const ChartData* d = outs[static_cast<size_t>(p - 1)];
            std::string base = model::out_symbol(m, c_.anchor_block, p);
            ctx_.add_assertion(app("=", {ctx_.sym(base, 0), smt_literal(d->init)}));
            for (long long i = 1; i < ctx_.bound(); ++i)
                ctx_.add_assertion(app(
                    "=", {ctx_.sym(base, i), ctx_.sym(model::var_symbol(c_, d->name), i - 1)}));
        }
    }

    // parent active iff exactly one substate active; root group sums to 1
    void encode_partition() {
        for (long long i = 0; i < ctx_.bound(); ++i) {
            std::vector<std::string> roots;
            for (long long sid : c_.root_states)
                roots.push_back(ctx_.sym(model::act_symbol(c_, sid), i));
            ctx_.add_assertion(
                app("=", {"1", roots.size() == 1 ? roots[0] : app("+", roots)}));
            for (const auto& [sid, st] : c_.states) {
                if (st.substates.empty()) continue;
                std::vector<std::string> subs;
                for (long long sub : st.substates)
                    subs.push_back(ctx_.sym(model::act_symbol(c_, sub), i));
                ctx_.add_assertion(app("=", {ctx_.sym(model::act_symbol(c_, sid), i),
                                             subs.size() == 1 ? subs[0] : app("+", subs)}));
            }
        }
    }

    EncodingContext& ctx_;
    const ChartDef& c_;
    std::vector<std::vector<long long>> configs_;
};

}  // namespace

void encode_chart(EncodingContext& ctx, const ChartDef& chart) { ChartEncoder(ctx, chart).run(); }

EncodingContext encode_model(const SystemModel& model, long long bound, const sim::PinMap* pins,
                             const sim::InputMap* inputs, std::string prefix) {
    EncodingContext ctx = init_context(model, bound, std::move(prefix));
    if (pins) ctx.set_pins(*pins);
    if (inputs) ctx.set_inputs(*inputs);
    encode_lines(ctx);
    for (const auto& b : model.blocks) encode_block(ctx, b);
    for (const auto& c : model.charts) encode_chart(ctx, c);
    return ctx;
}

// ---------------------------------------------------------------- emit

namespace {

const std::set<std::string>& reserved_words() {
    static const std::set<std::string> words = {
        "and", "or",  "not", "=>",  "ite", "=",    "<",     "<=",      ">",
        ">=",  "+",   "-",   "*",   "/",   "div",  "mod",   "to_real", "true",
        "false", "distinct",
    };
    return words;
}

void check_symbols(const std::string& formula, const std::set<std::string>& declared) {
    size_t i = 0;
    while (i < formula.size()) {
        char c = formula[i];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = i;
            while (i < formula.size() && (std::isalnum(static_cast<unsigned char>(formula[i])) ||
                                          formula[i] == '_'))
                ++i;
            std::string tok = formula.substr(start, i - start);
            if (!reserved_words().count(tok) && !declared.count(tok))
                throw Error("UndeclaredSymbol", "assertion references undeclared symbol '" + tok +
                                                    "' in: " + formula.substr(0, 80));
            continue;
        }
        ++i;
    }
}

}  // namespace

SmtScript emit_script(const EncodingContext& ctx, const std::string& goal, Polarity polarity,
                      const std::vector<std::string>& get_values) {
    SmtScript script;
    script.declarations = ctx.declarations();
    script.assertions = ctx.assertions();
    script.goal = polarity == Polarity::AssertNegated ? app("not", {goal}) : goal;
    script.footer.push_back("(check-sat)");
    if (get_values.empty()) {
        script.footer.push_back("(get-model)");
    } else {
        std::string gv = "(get-value (";
        for (size_t i = 0; i < get_values.size(); ++i) {
            if (i) gv += ' ';
            gv += get_values[i];
        }
        gv += "))";
        script.footer.push_back(gv);
    }
    std::set<std::string> declared;
    for (const auto& d : script.declarations) declared.insert(d.name);
    for (const auto& a : script.assertions) check_symbols(a, declared);
    check_symbols(script.goal, declared);
    return script;
}

std::string SmtScript::to_text() const {
    std::ostringstream os;
    os << "(set-logic QF_LIRA)\n";
    for (const auto& d : declarations)
        os << "(declare-const " << d.name << " " << sort_name(d.sort) << ")\n";
    for (const auto& a : assertions) os << "(assert " << a << ")\n";
    os << "(assert " << goal << ")\n";
    for (const auto& f : footer) os << f << "\n";
    return os.str();
}

std::string emit_smtlib(const EncodingContext& ctx, const std::string& goal, Polarity polarity) {
    return emit_script(ctx, goal, polarity).to_text();
}

}  // namespace tickcheck::smt

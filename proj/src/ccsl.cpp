#include "tickcheck/ccsl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace tickcheck::ccsl {

using smt::app;
using smt::conj;
using smt::disj;
using smt::implies;

std::string to_string(RelationKind k) {
    switch (k) {
        case RelationKind::Coincidence: return "coincidence";
        case RelationKind::Causality: return "causality";
        case RelationKind::Precedence: return "precedence";
        case RelationKind::Subclock: return "subclock";
        default: return "exclusion";
    }
}

std::string to_string(ConstraintKind k) {
    switch (k) {
        case ConstraintKind::EndToEnd: return "endToEnd";
        case ConstraintKind::Periodic: return "periodic";
        case ConstraintKind::Sporadic: return "sporadic";
        case ConstraintKind::Execution: return "execution";
        case ConstraintKind::Synchronization: return "synchronization";
        case ConstraintKind::Comparison: return "comparison";
        default: return "exclusion";
    }
}

const Clock* TcsSpec::find_clock(const std::string& name) const {
    for (const auto& c : clocks)
        if (c.name == name) return &c;
    return nullptr;
}

std::string tick_symbol(const std::string& clock) { return "ck_" + model::sanitize(clock); }
std::string history_symbol(const std::string& clock) { return "hh_" + model::sanitize(clock); }
std::string sincelast_symbol(const std::string& clock) { return "sl_" + model::sanitize(clock); }

// ------------------------------------------------------------- encoding

namespace {

void free_vars(const action::ExprPtr& e, std::set<std::string>& out) {
    if (!e) return;
    if (e->op == action::Op::Var) out.insert(e->name);
    free_vars(e->lhs, out);
    free_vars(e->rhs, out);
}

}  // namespace

void encode_clock(smt::EncodingContext& ctx, const Clock& c) {
    long long N = ctx.bound();
    std::string ck = tick_symbol(c.name);
    ctx.declare_vector(ck, ValueType::Bool, N);
    switch (c.source) {
        case Clock::Source::Every: {
            if (c.period < 1)
                throw Error("ParamError", "clock '" + c.name + "': every-period must be >= 1");
            for (long long i = 0; i < N; ++i) {
                bool tick = i >= c.offset && (i - c.offset) % c.period == 0;
                ctx.add_assertion(app("=", {ctx.sym(ck, i), tick ? "true" : "false"}));
            }
            break;
        }
        case Clock::Source::Entered: {
            model::ResolvedState rs;
            try {
                rs = model::resolve_state_path(ctx.system(), c.state_path);
            } catch (const Error& e) {
                throw Error("UnknownStateRef",
                            "clock '" + c.name + "': " + std::string(e.what()));
            }
            std::string act = model::act_symbol(*rs.chart, rs.state_id);
            ctx.add_assertion(
                app("=", {ctx.sym(ck, 0), app("=", {ctx.sym(act, 0), "1"})}));
            for (long long i = 1; i < N; ++i)
                ctx.add_assertion(
                    app("=", {ctx.sym(ck, i),
                              app("and", {app("=", {ctx.sym(act, i), "1"}),
                                          app("=", {ctx.sym(act, i - 1), "0"})})}));
            break;
        }
        case Clock::Source::Rising: {
            std::set<std::string> names;
            free_vars(c.expr, names);
            action::TypeEnv tenv;
            std::map<std::string, std::string> bases;
            for (const auto& n : names) {
                model::ResolvedName rn = model::resolve_trace_name(ctx.system(), n);
                tenv[n] = rn.type;
                bases[n] = rn.base;
            }
            if (action::typecheck(c.expr, tenv) != ValueType::Bool)
                throw Error("TypeError",
                            "clock '" + c.name + "': rising() needs a Bool expression");
            auto at = [&](long long i) {
                smt::TermEnv env;
                for (const auto& [n, base] : bases) env[n] = {ctx.sym(base, i), tenv[n]};
                return smt::encode_expr(c.expr, env).text;
            };
            ctx.add_assertion(app("=", {ctx.sym(ck, 0), at(0)}));
            for (long long i = 1; i < N; ++i)
                ctx.add_assertion(app(
                    "=", {ctx.sym(ck, i), app("and", {at(i), app("not", {at(i - 1)})})}));
            break;
        }
    }
}

void encode_history(smt::EncodingContext& ctx, const Clock& c) {
    long long N = ctx.bound();
    std::string ck = tick_symbol(c.name);
    std::string hh = history_symbol(c.name);
    ctx.declare_vector(hh, ValueType::Int, N + 1);
    ctx.add_assertion(app("=", {ctx.sym(hh, 0), "0"}));
    for (long long i = 0; i < N; ++i)
        ctx.add_assertion(app("=", {ctx.sym(hh, i + 1),
                                    app("+", {ctx.sym(hh, i),
                                              app("ite", {ctx.sym(ck, i), "1", "0"})})}));
}

void ensure_sincelast(smt::EncodingContext& ctx, const std::string& clock) {
    std::string sl = sincelast_symbol(clock);
    if (ctx.has_vector(sl)) return;
    std::string ck = tick_symbol(clock);
    long long N = ctx.bound();
    ctx.declare_vector(sl, ValueType::Int, N);
    ctx.add_assertion(app("=", {ctx.sym(sl, 0), app("ite", {ctx.sym(ck, 0), "0", "1"})}));
    for (long long i = 1; i < N; ++i)
        ctx.add_assertion(
            app("=", {ctx.sym(sl, i),
                      app("ite", {ctx.sym(ck, i), "0", app("+", {ctx.sym(sl, i - 1), "1"})})}));
}

void encode_spec_clocks(smt::EncodingContext& ctx, const TcsSpec& spec) {
    for (const auto& c : spec.clocks) {
        if (ctx.has_vector(tick_symbol(c.name))) continue;
        encode_clock(ctx, c);
        encode_history(ctx, c);
    }
}

std::string encode_relation(smt::EncodingContext& ctx, const ClockRelation& r) {
    long long N = ctx.bound();
    std::string ckl = tick_symbol(r.left), ckr = tick_symbol(r.right);
    std::string hl = history_symbol(r.left), hr = history_symbol(r.right);
    std::vector<std::string> parts;
    switch (r.kind) {
        case RelationKind::Coincidence:
            for (long long i = 0; i < N; ++i)
                parts.push_back(app("=", {ctx.sym(ckl, i), ctx.sym(ckr, i)}));
            break;
        case RelationKind::Causality:
            for (long long i = 0; i <= N; ++i)
                parts.push_back(app(">=", {ctx.sym(hl, i), ctx.sym(hr, i)}));
            break;
        case RelationKind::Precedence:
            for (long long i = 0; i < N; ++i)
                parts.push_back(implies(app("=", {ctx.sym(hl, i), ctx.sym(hr, i)}),
                                        app("not", {ctx.sym(ckr, i)})));
            break;
        case RelationKind::Subclock:
            for (long long i = 0; i < N; ++i)
                parts.push_back(implies(ctx.sym(ckl, i), ctx.sym(ckr, i)));
            break;
        case RelationKind::Exclusion:
            for (long long i = 0; i < N; ++i)
                parts.push_back(app("not", {app("and", {ctx.sym(ckl, i), ctx.sym(ckr, i)})}));
            break;
    }
    return conj(parts);
}

void check_params(const TimingConstraint& tc) {
    auto fail = [&](const std::string& why) {
        throw Error("ParamError", "constraint '" + tc.name + "': " + why);
    };
    size_t want = tc.kind == ConstraintKind::Periodic || tc.kind == ConstraintKind::Sporadic
                      ? 1
                      : tc.kind == ConstraintKind::Synchronization ? 0 : 2;
    if (want != 0 && tc.clocks.size() != want)
        fail("expects " + std::to_string(want) + " clock(s)");
    if (tc.kind == ConstraintKind::Synchronization && tc.clocks.size() < 2)
        fail("expects at least 2 clocks");
    if (tc.period < 0 || tc.jitter < 0 || tc.min_gap < 0 || tc.lower < 0 || tc.upper < 0 ||
        tc.window < 0)
        fail("step parameters must be >= 0");
    if (tc.kind == ConstraintKind::Periodic && tc.jitter >= tc.period)
        fail("jitter must be smaller than period");
    if ((tc.kind == ConstraintKind::EndToEnd || tc.kind == ConstraintKind::Execution) &&
        tc.lower > tc.upper)
        fail("lower must not exceed upper");
    if (tc.prob && (*tc.prob < 0 || *tc.prob > 1)) fail("probability threshold not in [0,1]");
}

std::string desugar(smt::EncodingContext& ctx, const TimingConstraint& tc) {
    check_params(tc);
    long long N = ctx.bound();
    std::vector<std::string> parts;
    switch (tc.kind) {
        case ConstraintKind::Periodic:
        case ConstraintKind::Sporadic: {
            const std::string& c = tc.clocks[0];
            ensure_sincelast(ctx, c);
            std::string ck = tick_symbol(c), hh = history_symbol(c), sl = sincelast_symbol(c);
            for (long long j = 1; j < N; ++j) {
                std::string gap = app("+", {ctx.sym(sl, j - 1), "1"});
                std::string guard =
                    app("and", {ctx.sym(ck, j), app(">=", {ctx.sym(hh, j), "1"})});
                std::string body;
                if (tc.kind == ConstraintKind::Periodic) {
                    body = app("and", {app("<=", {std::to_string(tc.period - tc.jitter), gap}),
                                       app("<=", {gap, std::to_string(tc.period + tc.jitter)})});
                } else {
                    body = app("<=", {std::to_string(tc.min_gap), gap});
                }
                parts.push_back(implies(guard, body));
            }
            break;
        }
        case ConstraintKind::EndToEnd:
        case ConstraintKind::Execution: {
            std::string cka = tick_symbol(tc.clocks[0]), ckb = tick_symbol(tc.clocks[1]);
            std::string ha = history_symbol(tc.clocks[0]), hb = history_symbol(tc.clocks[1]);
            parts.push_back(encode_relation(
                ctx, {RelationKind::Causality, tc.clocks[0], tc.clocks[1]}));
            for (long long j = 0; j < N; ++j) {
                std::vector<std::string> alts;
                for (long long d = tc.lower; d <= tc.upper && d <= j; ++d)
                    alts.push_back(app("and", {ctx.sym(cka, j - d),
                                               app("=", {ctx.sym(ha, j - d), ctx.sym(hb, j)})}));
                parts.push_back(implies(ctx.sym(ckb, j), disj(alts)));
            }
            break;
        }
        case ConstraintKind::Synchronization: {
            for (const auto& p : tc.clocks) {
                std::string ckp = tick_symbol(p), hp = history_symbol(p);
                for (const auto& q : tc.clocks) {
                    if (p == q) continue;
                    std::string ckq = tick_symbol(q), hq = history_symbol(q);
                    for (long long j = 0; j < N; ++j) {
                        // obligation exists only when every clock reaches
                        // its matching occurrence within the bound
                        std::vector<std::string> guard = {ctx.sym(ckp, j)};
                        for (const auto& r : tc.clocks)
                            guard.push_back(app(">=", {ctx.sym(history_symbol(r), N),
                                                       app("+", {ctx.sym(hp, j), "1"})}));
                        std::vector<std::string> alts;
                        for (long long d = -tc.window; d <= tc.window; ++d) {
                            if (j + d < 0 || j + d >= N) continue;
                            alts.push_back(
                                app("and", {ctx.sym(ckq, j + d),
                                            app("=", {ctx.sym(hq, j + d), ctx.sym(hp, j)})}));
                        }
                        parts.push_back(implies(conj(guard), disj(alts)));
                    }
                }
            }
            break;
        }
        case ConstraintKind::Comparison:
            parts.push_back(encode_relation(
                ctx, {tc.comparison_is_precedence ? RelationKind::Precedence
                                                  : RelationKind::Causality,
                      tc.clocks[0], tc.clocks[1]}));
            break;
        case ConstraintKind::Exclusion:
            parts.push_back(
                encode_relation(ctx, {RelationKind::Exclusion, tc.clocks[0], tc.clocks[1]}));
            break;
    }
    return conj(parts);
}

// --------------------------------------------------------------- oracles

namespace {

std::vector<long long> prefix_counts(const std::vector<bool>& ticks) {
    std::vector<long long> h(ticks.size() + 1, 0);
    for (size_t i = 0; i < ticks.size(); ++i) h[i + 1] = h[i] + (ticks[i] ? 1 : 0);
    return h;
}

std::vector<long long> tick_indices(const std::vector<bool>& ticks) {
    std::vector<long long> idx;
    for (size_t i = 0; i < ticks.size(); ++i)
        if (ticks[i]) idx.push_back(static_cast<long long>(i));
    return idx;
}

const std::vector<bool>& ticks_or_throw(const sim::Trace& trace, const std::string& name) {
    auto it = trace.ticks.find(name);
    if (it == trace.ticks.end())
        throw Error("ClockUndefinedOnTrace", "clock '" + name + "' has no tick vector");
    return it->second;
}

}  // namespace

bool check_relation_ticks(RelationKind kind, const std::vector<bool>& l,
                          const std::vector<bool>& r) {
    size_t n = std::min(l.size(), r.size());
    switch (kind) {
        case RelationKind::Coincidence:
            for (size_t i = 0; i < n; ++i)
                if (l[i] != r[i]) return false;
            return true;
        case RelationKind::Causality: {
            auto hl = prefix_counts(l), hr = prefix_counts(r);
            for (size_t i = 0; i <= n; ++i)
                if (hl[i] < hr[i]) return false;
            return true;
        }
        case RelationKind::Precedence: {
            auto hl = prefix_counts(l), hr = prefix_counts(r);
            for (size_t i = 0; i < n; ++i)
                if (hl[i] == hr[i] && r[i]) return false;
            return true;
        }
        case RelationKind::Subclock:
            for (size_t i = 0; i < n; ++i)
                if (l[i] && !r[i]) return false;
            return true;
        default:  // Exclusion
            for (size_t i = 0; i < n; ++i)
                if (l[i] && r[i]) return false;
            return true;
    }
}

bool check_relation_on_trace(const sim::Trace& trace, const ClockRelation& r) {
    return check_relation_ticks(r.kind, ticks_or_throw(trace, r.left),
                                ticks_or_throw(trace, r.right));
}

bool check_constraint_on_trace(const sim::Trace& trace, const TimingConstraint& tc) {
    check_params(tc);
    switch (tc.kind) {
        case ConstraintKind::Periodic:
        case ConstraintKind::Sporadic: {
            auto idx = tick_indices(ticks_or_throw(trace, tc.clocks[0]));
            for (size_t k = 0; k + 1 < idx.size(); ++k) {
                long long gap = idx[k + 1] - idx[k];
                if (tc.kind == ConstraintKind::Periodic) {
                    if (gap < tc.period - tc.jitter || gap > tc.period + tc.jitter) return false;
                } else if (gap < tc.min_gap) {
                    return false;
                }
            }
            return true;
        }
        case ConstraintKind::EndToEnd:
        case ConstraintKind::Execution: {
            const auto& ta = ticks_or_throw(trace, tc.clocks[0]);
            const auto& tb = ticks_or_throw(trace, tc.clocks[1]);
            if (!check_relation_ticks(RelationKind::Causality, ta, tb)) return false;
            auto ia = tick_indices(ta), ib = tick_indices(tb);
            for (size_t k = 0; k < std::min(ia.size(), ib.size()); ++k) {
                long long d = ib[k] - ia[k];
                if (d < tc.lower || d > tc.upper) return false;
            }
            return true;
        }
        case ConstraintKind::Synchronization: {
            std::vector<std::vector<long long>> idx;
            size_t common = static_cast<size_t>(-1);
            for (const auto& c : tc.clocks) {
                idx.push_back(tick_indices(ticks_or_throw(trace, c)));
                common = std::min(common, idx.back().size());
            }
            for (size_t k = 0; k < common; ++k) {
                long long lo = idx[0][k], hi = idx[0][k];
                for (const auto& v : idx) {
                    lo = std::min(lo, v[k]);
                    hi = std::max(hi, v[k]);
                }
                if (hi - lo > tc.window) return false;
            }
            return true;
        }
        case ConstraintKind::Comparison:
            return check_relation_ticks(tc.comparison_is_precedence ? RelationKind::Precedence
                                                                    : RelationKind::Causality,
                                        ticks_or_throw(trace, tc.clocks[0]),
                                        ticks_or_throw(trace, tc.clocks[1]));
        default:  // Exclusion
            return check_relation_ticks(RelationKind::Exclusion,
                                        ticks_or_throw(trace, tc.clocks[0]),
                                        ticks_or_throw(trace, tc.clocks[1]));
    }
}

InstanceStats count_instances(const sim::Trace& trace, const TimingConstraint& tc) {
    InstanceStats st;
    switch (tc.kind) {
        case ConstraintKind::Periodic:
        case ConstraintKind::Sporadic: {
            auto n = static_cast<long long>(
                tick_indices(ticks_or_throw(trace, tc.clocks[0])).size());
            st.checked = n > 0 ? n - 1 : 0;
            st.vacuous = n > 0 ? 1 : 0;  // the last tick's open interval
            return st;
        }
        case ConstraintKind::EndToEnd:
        case ConstraintKind::Execution: {
            auto na = static_cast<long long>(
                tick_indices(ticks_or_throw(trace, tc.clocks[0])).size());
            auto nb = static_cast<long long>(
                tick_indices(ticks_or_throw(trace, tc.clocks[1])).size());
            st.checked = std::min(na, nb);
            st.vacuous = na - st.checked;
            return st;
        }
        case ConstraintKind::Synchronization: {
            long long lo = -1, hi = 0;
            for (const auto& c : tc.clocks) {
                auto n = static_cast<long long>(tick_indices(ticks_or_throw(trace, c)).size());
                lo = lo < 0 ? n : std::min(lo, n);
                hi = std::max(hi, n);
            }
            st.checked = lo;
            st.vacuous = hi - lo;
            return st;
        }
        default:
            st.checked = trace.bound;
            st.vacuous = 0;
            return st;
    }
}

// ---------------------------------------------------------------- parser

namespace {

struct ParseCursor {
    const std::string& s;
    size_t i = 0;

    SourceSpan span_at(size_t pos) const {
        SourceSpan sp;
        for (size_t k = 0; k < pos && k < s.size(); ++k) {
            if (s[k] == '\n') {
                ++sp.line;
                sp.column = 1;
            } else {
                ++sp.column;
            }
        }
        sp.length = 1;
        return sp;
    }

    [[noreturn]] void fail(const std::string& code, const std::string& msg) const {
        throw Error(code, msg, span_at(i));
    }

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eof() {
        skip_ws();
        return i >= s.size();
    }
    void expect(char c) {
        skip_ws();
        if (i >= s.size() || s[i] != c)
            fail("SyntaxError", std::string("expected '") + c + "'");
        ++i;
    }
    bool accept(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    std::string ident(bool allow_dot = false) {
        skip_ws();
        size_t start = i;
        if (i >= s.size() || !(std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            fail("SyntaxError", "expected identifier");
        while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' ||
                                (allow_dot && s[i] == '.')))
            ++i;
        return s.substr(start, i - start);
    }
    std::string peek_ident() {
        skip_ws();
        size_t save = i;
        if (i >= s.size() || !(std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            return {};
        std::string w = ident();
        i = save;
        return w;
    }
    void keyword(const std::string& w) {
        skip_ws();
        size_t save = i;
        std::string got = ident();
        if (got != w) {
            i = save;
            fail("SyntaxError", "expected '" + w + "', found '" + got + "'");
        }
    }
    long long integer() {
        skip_ws();
        size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) fail("SyntaxError", "expected integer");
        return std::stoll(s.substr(start, i - start));
    }
    Rational decimal() {
        skip_ws();
        size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) fail("SyntaxError", "expected number");
        if (i < s.size() && s[i] == '.') {
            ++i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
        return parse_rational(s.substr(start, i - start));
    }
    long long named_int(const std::string& key) {
        keyword(key);
        expect('=');
        return integer();
    }
    // text of a balanced "(...)" group, '(' already consumed by caller
    std::string balanced() {
        size_t start = i;
        int depth = 1;
        while (i < s.size()) {
            if (s[i] == '(') ++depth;
            if (s[i] == ')' && --depth == 0) {
                std::string inner = s.substr(start, i - start);
                ++i;
                return inner;
            }
            ++i;
        }
        fail("SyntaxError", "unbalanced parentheses");
    }
};

Clock parse_clockdef(ParseCursor& cur) {
    Clock c;
    c.name = cur.ident();
    cur.expect('=');
    size_t kw_pos = cur.i;
    std::string kind = cur.ident();
    if (kind == "rising") {
        c.source = Clock::Source::Rising;
        cur.expect('(');
        std::string text = cur.balanced();
        try {
            c.expr = action::parse_expr(text);
        } catch (const Error& e) {
            cur.i = kw_pos;
            cur.fail("SyntaxError", "clock '" + c.name + "': " + std::string(e.what()));
        }
    } else if (kind == "entered") {
        c.source = Clock::Source::Entered;
        cur.expect('(');
        c.state_path = cur.ident(/*allow_dot=*/true);
        cur.expect(')');
    } else if (kind == "every") {
        c.source = Clock::Source::Every;
        c.period = cur.integer();
        if (cur.peek_ident() == "offset") {
            cur.keyword("offset");
            c.offset = cur.integer();
        }
    } else {
        cur.i = kw_pos;
        cur.fail("SyntaxError", "unknown clock source '" + kind + "'");
    }
    cur.expect(';');
    return c;
}

TimingConstraint parse_constraint(ParseCursor& cur) {
    TimingConstraint tc;
    tc.name = cur.ident();
    cur.expect(':');
    size_t kw_pos = cur.i;
    std::string kind = cur.ident();
    cur.expect('(');
    if (kind == "periodic") {
        tc.kind = ConstraintKind::Periodic;
        tc.clocks.push_back(cur.ident());
        cur.expect(',');
        tc.period = cur.named_int("period");
        cur.expect(',');
        tc.jitter = cur.named_int("jitter");
    } else if (kind == "sporadic") {
        tc.kind = ConstraintKind::Sporadic;
        tc.clocks.push_back(cur.ident());
        cur.expect(',');
        tc.min_gap = cur.named_int("minGap");
    } else if (kind == "execution" || kind == "endToEnd") {
        tc.kind = kind == "execution" ? ConstraintKind::Execution : ConstraintKind::EndToEnd;
        tc.clocks.push_back(cur.ident());
        cur.expect(',');
        tc.clocks.push_back(cur.ident());
        cur.expect(',');
        tc.lower = cur.named_int("lower");
        cur.expect(',');
        tc.upper = cur.named_int("upper");
    } else if (kind == "synchronization") {
        tc.kind = ConstraintKind::Synchronization;
        tc.clocks.push_back(cur.ident());
        while (true) {
            cur.expect(',');
            if (cur.peek_ident() == "window") break;
            tc.clocks.push_back(cur.ident());
        }
        tc.window = cur.named_int("window");
    } else if (kind == "comparison") {
        tc.kind = ConstraintKind::Comparison;
        tc.clocks.push_back(cur.ident());
        std::string rel = cur.ident();
        if (rel != "precedes" && rel != "causes")
            cur.fail("SyntaxError", "expected 'precedes' or 'causes', found '" + rel + "'");
        tc.comparison_is_precedence = rel == "precedes";
        tc.clocks.push_back(cur.ident());
    } else if (kind == "exclusion") {
        tc.kind = ConstraintKind::Exclusion;
        tc.clocks.push_back(cur.ident());
        cur.expect(',');
        tc.clocks.push_back(cur.ident());
    } else {
        cur.i = kw_pos;
        cur.fail("SyntaxError", "unknown constraint kind '" + kind + "'");
    }
    cur.expect(')');
    if (cur.peek_ident() == "prob") {
        cur.keyword("prob");
        cur.expect('>');
        cur.expect('=');
        tc.prob = cur.decimal();
    }
    cur.expect(';');
    return tc;
}

}  // namespace

TcsParseResult parse_tcs(const std::string& text) {
    TcsParseResult result;
    TcsSpec spec;
    ParseCursor cur{text};
    try {
        while (!cur.eof()) {
            size_t pos = cur.i;
            std::string word = cur.ident();
            if (word == "clock") {
                spec.clocks.push_back(parse_clockdef(cur));
            } else if (word == "constraint") {
                spec.constraints.push_back(parse_constraint(cur));
            } else {
                cur.i = pos;
                cur.fail("SyntaxError", "expected 'clock' or 'constraint', found '" + word + "'");
            }
        }
    } catch (const Error& e) {
        result.diagnostics.push_back(error_diag(e.code(), e.what(), e.span()));
        return result;
    }
    std::set<std::string> clock_names, constraint_names;
    for (const auto& c : spec.clocks)
        if (!clock_names.insert(c.name).second)
            result.diagnostics.push_back(
                error_diag("DuplicateClock", "clock '" + c.name + "' defined twice"));
    for (const auto& tc : spec.constraints) {
        if (!constraint_names.insert(tc.name).second)
            result.diagnostics.push_back(
                error_diag("DuplicateConstraint", "constraint '" + tc.name + "' defined twice"));
        for (const auto& c : tc.clocks)
            if (!clock_names.count(c))
                result.diagnostics.push_back(error_diag(
                    "UnknownClock", "constraint '" + tc.name + "' uses undefined clock '" + c + "'"));
        try {
            check_params(tc);
        } catch (const Error& e) {
            result.diagnostics.push_back(error_diag(e.code(), e.what()));
        }
    }
    for (const auto& c : spec.clocks) {
        if (c.source == Clock::Source::Every && c.period < 1)
            result.diagnostics.push_back(
                error_diag("ParamError", "clock '" + c.name + "': every-period must be >= 1"));
        if (c.source == Clock::Source::Every && c.offset < 0)
            result.diagnostics.push_back(
                error_diag("ParamError", "clock '" + c.name + "': offset must be >= 0"));
    }
    if (!has_error(result.diagnostics)) result.spec = std::move(spec);
    return result;
}

TcsParseResult parse_tcs_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        TcsParseResult r;
        r.diagnostics.push_back(error_diag("FileError", "cannot open '" + path + "'"));
        return r;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_tcs(buf.str());
}

}  // namespace tickcheck::ccsl

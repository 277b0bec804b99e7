#include "tickcheck/verify.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace tickcheck::verify {

using json = nlohmann::ordered_json;

std::string to_string(Result r) {
    switch (r) {
        case Result::Valid: return "valid";
        case Result::Invalid: return "invalid";
        default: return "undetermined";
    }
}

// ------------------------------------------------------------- sampling

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// counter-based stream: one independent 64-bit word per coordinate
std::uint64_t draw_word(std::uint64_t seed, long long k, long long block_id, long long step) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(k));
    h = splitmix64(h ^ static_cast<std::uint64_t>(block_id));
    h = splitmix64(h ^ static_cast<std::uint64_t>(step));
    return h;
}

Value draw_value(const model::Distribution& d, std::uint64_t word) {
    std::uint64_t r32 = word >> 32;  // 32 uniform bits
    switch (d.kind) {
        case model::Distribution::Kind::UniformReal: {
            Rational u(static_cast<unsigned long>(r32), 1UL);
            u /= Rational(mpz_class(1) << 32);
            return Value(d.lo + (d.hi - d.lo) * u);
        }
        case model::Distribution::Kind::UniformInt: {
            mpz_class lo(d.lo.get_num()), hi(d.hi.get_num());
            mpz_class span = hi - lo + 1;
            mpz_class off = mpz_class(static_cast<unsigned long>(word % 0xffffffffffffffffULL));
            // span is small in practice; word mod span is uniform enough
            mpz_class pick;
            mpz_mod(pick.get_mpz_t(), off.get_mpz_t(), span.get_mpz_t());
            return Value(Rational(lo + pick));
        }
        case model::Distribution::Kind::Bernoulli: {
            Rational u(static_cast<unsigned long>(r32), 1UL);
            u /= Rational(mpz_class(1) << 32);
            return Value(Rational(u < d.p ? 1 : 0));
        }
        default: {  // DiscreteChoice
            long long total = 0;
            for (long long w : d.weights) total += w;
            auto pick = static_cast<long long>(word % static_cast<std::uint64_t>(total));
            for (size_t i = 0; i < d.values.size(); ++i) {
                pick -= d.weights[i];
                if (pick < 0) return Value(d.values[i]);
            }
            return Value(d.values.back());
        }
    }
}

}  // namespace

sim::PinMap sample_scenario(const model::SystemModel& m, long long bound, std::uint64_t seed,
                            long long k) {
    sim::PinMap pins;
    for (const auto& b : m.blocks) {
        if (b.kind != model::BlockKind::RandomSource) continue;
        for (long long i = 0; i < bound; ++i)
            pins[{b.id, i}] = draw_value(b.dist, draw_word(seed, k, b.id, i));
    }
    return pins;
}

// --------------------------------------------------------------- solver

namespace {

struct Sexp {
    bool atom = true;
    std::string text;
    std::vector<Sexp> kids;
};

struct SexpReader {
    const std::string& s;
    size_t i = 0;

    void skip_ws() {
        while (i < s.size()) {
            if (std::isspace(static_cast<unsigned char>(s[i]))) {
                ++i;
            } else if (s[i] == ';') {
                while (i < s.size() && s[i] != '\n') ++i;
            } else {
                break;
            }
        }
    }
    bool done() {
        skip_ws();
        return i >= s.size();
    }
    Sexp next() {
        skip_ws();
        if (i >= s.size()) throw Error("SolverProtocolError", "unexpected end of solver output");
        if (s[i] == '(') {
            ++i;
            Sexp e;
            e.atom = false;
            while (true) {
                skip_ws();
                if (i >= s.size())
                    throw Error("SolverProtocolError", "unbalanced solver s-expression");
                if (s[i] == ')') {
                    ++i;
                    return e;
                }
                e.kids.push_back(next());
            }
        }
        if (s[i] == '"') {  // quoted string (error messages)
            size_t start = ++i;
            while (i < s.size() && s[i] != '"') ++i;
            Sexp e;
            e.text = s.substr(start, i - start);
            if (i < s.size()) ++i;
            return e;
        }
        size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '(' &&
               s[i] != ')')
            ++i;
        Sexp e;
        e.text = s.substr(start, i - start);
        return e;
    }
};

Value sexp_value(const Sexp& e, ValueType want) {
    if (e.atom) {
        if (e.text == "true") return Value(true);
        if (e.text == "false") return Value(false);
        Rational r = parse_rational(e.text);
        if (want == ValueType::Int) return Value(mpz_class(r.get_num()));
        return Value(r);
    }
    if (!e.kids.empty() && e.kids[0].atom && e.kids[0].text == "-" && e.kids.size() == 2) {
        Value v = sexp_value(e.kids[1], want);
        if (v.type() == ValueType::Int) return Value(mpz_class(-v.as_int()));
        return Value(Rational(-v.as_real()));
    }
    if (!e.kids.empty() && e.kids[0].atom && e.kids[0].text == "/" && e.kids.size() == 3) {
        Value n = sexp_value(e.kids[1], ValueType::Real);
        Value d = sexp_value(e.kids[2], ValueType::Real);
        Rational r = n.as_rational() / d.as_rational();
        r.canonicalize();
        return Value(r);
    }
    throw Error("SolverProtocolError", "unrecognized solver value term");
}

std::string excerpt(const std::string& s) {
    return s.size() <= 400 ? s : s.substr(0, 400) + "...";
}

}  // namespace

SolverResult parse_solver_output(const std::string& text) {
    SolverResult res;
    std::istringstream in(text);
    std::string first;
    if (!std::getline(in, first))
        throw Error("SolverProtocolError", "empty solver output");
    while (!first.empty() && (first.back() == '\r' || first.back() == ' ')) first.pop_back();
    if (first == "unsat") {
        res.status = SolverStatus::Unsat;
        return res;
    }
    if (first == "unknown") {
        res.status = SolverStatus::Unknown;
        return res;
    }
    if (first != "sat")
        throw Error("SolverProtocolError", "unrecognized solver answer: " + excerpt(first));
    res.status = SolverStatus::Sat;
    std::string rest(std::istreambuf_iterator<char>(in), {});
    SexpReader reader{rest};
    if (reader.done()) return res;
    Sexp top = reader.next();
    for (const Sexp& kid : top.kids) {
        if (kid.atom || kid.kids.empty()) continue;
        if (kid.kids[0].atom && kid.kids[0].text == "define-fun" && kid.kids.size() >= 5) {
            const std::string& name = kid.kids[1].text;
            const std::string& sort = kid.kids[3].text;
            ValueType t = sort == "Bool" ? ValueType::Bool
                          : sort == "Int" ? ValueType::Int
                                          : ValueType::Real;
            res.assignment[name] = sexp_value(kid.kids[4], t);
        } else if (kid.kids.size() == 2 && kid.kids[0].atom) {
            // (get-value ...) pair
            res.assignment[kid.kids[0].text] = sexp_value(kid.kids[1], ValueType::Real);
        }
    }
    return res;
}

SolverResult run_solver(const std::string& command, const std::string& script) {
    auto t0 = std::chrono::steady_clock::now();
    SolverResult res;
    char path[] = "/tmp/tickcheck_query_XXXXXX";
    int fd = mkstemp(path);
    if (fd < 0) {
        res.raw = "cannot create temporary query file";
        return res;
    }
    {
        std::ofstream out(path);
        out << script;
    }
    close(fd);
    std::string cmd = command + " < " + path + " 2>&1";
    std::string output;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        unlink(path);
        res.raw = "cannot spawn solver: " + command;
        return res;
    }
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
    int rc = pclose(pipe);
    unlink(path);
    auto done = [&]() {
        res.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    };
    if (rc != 0) {
        res.raw = "solver exited with status " + std::to_string(rc) + ": " + excerpt(output);
        done();
        return res;
    }
    try {
        res = parse_solver_output(output);
    } catch (const Error& e) {
        res.status = SolverStatus::SolverError;
        res.raw = std::string(e.what()) + " | " + excerpt(output);
    }
    done();
    return res;
}

// ------------------------------------------------------------- loading

std::optional<LoadedTask> load_task(const VerificationTask& task,
                                    std::vector<Diagnostic>& diags) {
    mdl::ParseResult parsed = mdl::parse_file(task.model_path);
    if (!parsed.root) {
        diags.insert(diags.end(), parsed.diagnostics.begin(), parsed.diagnostics.end());
        return std::nullopt;
    }
    model::ElaborationResult elab = model::elaborate(*parsed.root);
    if (!elab.model) {
        diags.insert(diags.end(), elab.diagnostics.begin(), elab.diagnostics.end());
        return std::nullopt;
    }
    std::vector<Diagnostic> invalid = model::validate(*elab.model);
    if (has_error(invalid)) {
        diags.insert(diags.end(), invalid.begin(), invalid.end());
        return std::nullopt;
    }
    ccsl::TcsParseResult tcs = ccsl::parse_tcs_file(task.spec_path);
    if (!tcs.spec) {
        diags.insert(diags.end(), tcs.diagnostics.begin(), tcs.diagnostics.end());
        return std::nullopt;
    }
    LoadedTask loaded{std::move(*elab.model), std::move(*tcs.spec)};
    if (task.mode == Mode::Deterministic && loaded.model.has_random_source()) {
        diags.push_back(error_diag(
            "ModeError", "deterministic mode rejects models with RandomSource blocks"));
        return std::nullopt;
    }
    // probe-encode at bound 1 so bad state paths / clock expressions are
    // reported as usage errors, not mid-verification failures
    try {
        smt::EncodingContext probe = smt::encode_model(loaded.model, 1);
        ccsl::encode_spec_clocks(probe, loaded.spec);
    } catch (const Error& e) {
        diags.push_back(error_diag(e.code(), e.what()));
        return std::nullopt;
    }
    return loaded;
}

// -------------------------------------------------------------- helpers

namespace {

Rational effective_threshold(const VerificationTask& task, const ccsl::TimingConstraint& tc) {
    if (task.threshold) return *task.threshold;
    if (tc.prob) return *tc.prob;
    return Rational(1);
}

std::string wilson_interval(long long sat, long long total) {
    if (total <= 0) return "";
    double p = static_cast<double>(sat) / static_cast<double>(total);
    double n = static_cast<double>(total);
    double z = 1.959963985;
    double denom = 1.0 + z * z / n;
    double center = (p + z * z / (2 * n)) / denom;
    double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << "[" << std::max(0.0, center - half) << ", "
       << std::min(1.0, center + half) << "]";
    return os.str();
}

// step-by-step tick table of the constraint's clocks from a solver model
std::string render_counterexample(const smt::EncodingContext& ctx,
                                  const ccsl::TimingConstraint& tc,
                                  const std::map<std::string, Value>& assignment) {
    std::ostringstream os;
    os << "step";
    for (const auto& c : tc.clocks) os << "  " << c;
    os << "\n";
    const long long limit = std::min<long long>(ctx.bound(), 60);
    for (long long i = 0; i < limit; ++i) {
        os << std::setw(4) << i;
        for (const auto& c : tc.clocks) {
            auto it = assignment.find(ctx.sym(ccsl::tick_symbol(c), i));
            os << "  " << std::setw(static_cast<int>(c.size()))
               << (it == assignment.end() ? "?" : it->second.as_bool() ? "1" : "0");
        }
        os << "\n";
    }
    if (limit < ctx.bound()) os << "  ... (" << ctx.bound() - limit << " more steps)\n";
    return os.str();
}

void parallel_for(long long n, int jobs, const std::function<void(long long)>& f) {
    int workers = std::max(1, jobs);
    if (workers == 1 || n <= 1) {
        for (long long i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::string> errors;
    std::mutex err_mu;
    auto loop = [&] {
        while (true) {
            long long i = next.fetch_add(1);
            if (i >= n) return;
            try {
                f(i);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(err_mu);
                errors.emplace_back(e.what());
            }
        }
    };
    std::vector<std::thread> ts;
    for (int t = 0; t < workers - 1; ++t) ts.emplace_back(loop);
    loop();
    for (auto& t : ts) t.join();
    if (!errors.empty()) throw Error("WorkerError", errors.front());
}

long long ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

}  // namespace

// --------------------------------------------------------- deterministic

Verdict run_deterministic_validity(const VerificationTask& task, const LoadedTask& loaded,
                                   const ccsl::TimingConstraint& tc) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    v.name = tc.name;
    v.kind = ccsl::to_string(tc.kind);
    v.threshold = effective_threshold(task, tc);
    v.total_runs = 1;
    smt::EncodingContext ctx = smt::encode_model(loaded.model, task.bound);
    ccsl::encode_spec_clocks(ctx, loaded.spec);
    std::string goal = ccsl::desugar(ctx, tc);
    smt::SmtScript script = smt::emit_script(ctx, goal, smt::Polarity::AssertNegated);
    SolverResult sr = run_solver(task.solver_cmd, script.to_text());
    switch (sr.status) {
        case SolverStatus::Unsat:
            v.result = Result::Valid;
            v.sat_runs = 1;
            v.estimate = 1;
            break;
        case SolverStatus::Sat:
            v.result = Result::Invalid;
            v.estimate = 0;
            v.counterexample = render_counterexample(ctx, tc, sr.assignment);
            break;
        default:
            v.result = Result::Undetermined;
            v.counterexample = sr.raw;
            break;
    }
    // vacuity is a trace property; report it when the model is closed
    bool closed = true;
    for (const auto& b : loaded.model.blocks)
        if (b.kind == model::BlockKind::Inport) closed = false;
    if (closed && v.result == Result::Valid) {
        sim::Trace trace = sim::simulate(loaded.model, task.bound);
        sim::derive_ticks(loaded.model, trace, loaded.spec.clocks);
        if (ccsl::count_instances(trace, tc).checked == 0) v.vacuous_runs = 1;
    }
    v.wall_ms = ms_since(t0);
    return v;
}

// --------------------------------------------------------- probabilistic

namespace {

struct RunOutcome {
    enum class State { Sat, Violated, Failed } state = State::Failed;
    std::string detail;
};

// per-run outcomes for every constraint, runs batched into shared solver
// scripts when the pinned model is closed (then each run has exactly one
// model, so indicator booleans decide every constraint in one query)
std::vector<std::vector<RunOutcome>> solve_runs(const VerificationTask& task,
                                                const LoadedTask& loaded,
                                                const std::vector<ccsl::TimingConstraint>& tcs) {
    const long long M = task.runs;
    const long long N = task.bound;
    bool closed = true;
    for (const auto& b : loaded.model.blocks)
        if (b.kind == model::BlockKind::Inport) closed = false;

    std::vector<std::vector<RunOutcome>> out(
        static_cast<size_t>(M), std::vector<RunOutcome>(tcs.size()));

    if (!closed) {
        // open model: one assert-negated query per (run, constraint)
        parallel_for(M * static_cast<long long>(tcs.size()), task.jobs, [&](long long idx) {
            long long k = idx / static_cast<long long>(tcs.size());
            size_t j = static_cast<size_t>(idx % static_cast<long long>(tcs.size()));
            sim::PinMap pins = sample_scenario(loaded.model, N, task.seed, k);
            smt::EncodingContext ctx = smt::encode_model(loaded.model, N, &pins);
            ccsl::encode_spec_clocks(ctx, loaded.spec);
            std::string goal = ccsl::desugar(ctx, tcs[j]);
            SolverResult sr = run_solver(
                task.solver_cmd,
                smt::emit_script(ctx, goal, smt::Polarity::AssertNegated).to_text());
            RunOutcome& o = out[static_cast<size_t>(k)][j];
            if (sr.status == SolverStatus::Unsat) {
                o.state = RunOutcome::State::Sat;
            } else if (sr.status == SolverStatus::Sat) {
                o.state = RunOutcome::State::Violated;
            } else {
                o.state = RunOutcome::State::Failed;
                o.detail = sr.raw;
            }
        });
        return out;
    }

    // batch size keeps scripts near a fixed declaration budget
    long long decls_per_run = 0;
    {
        smt::EncodingContext probe = smt::encode_model(loaded.model, N);
        ccsl::encode_spec_clocks(probe, loaded.spec);
        decls_per_run = static_cast<long long>(probe.declarations().size());
    }
    long long batch = std::clamp(60000 / std::max<long long>(1, decls_per_run), 1LL, M);
    long long n_batches = (M + batch - 1) / batch;

    parallel_for(n_batches, task.jobs, [&](long long bi) {
        long long k0 = bi * batch, k1 = std::min(M, k0 + batch);
        smt::SmtScript script;
        std::vector<std::string> indicators;
        for (long long k = k0; k < k1; ++k) {
            sim::PinMap pins = sample_scenario(loaded.model, N, task.seed, k);
            smt::EncodingContext ctx = smt::encode_model(loaded.model, N, &pins, nullptr,
                                                         "r" + std::to_string(k) + "_");
            ccsl::encode_spec_clocks(ctx, loaded.spec);
            std::vector<std::string> goals;
            for (const auto& tc : tcs) goals.push_back(ccsl::desugar(ctx, tc));
            for (const auto& d : ctx.declarations()) script.declarations.push_back(d);
            for (const auto& a : ctx.assertions()) script.assertions.push_back(a);
            for (size_t j = 0; j < goals.size(); ++j) {
                std::string b = "g" + std::to_string(k) + "_c" + std::to_string(j);
                script.declarations.push_back({b, ValueType::Bool});
                script.assertions.push_back(smt::app("=", {b, goals[j]}));
                indicators.push_back(b);
            }
        }
        script.goal = "true";
        script.footer.push_back("(check-sat)");
        std::string gv = "(get-value (";
        for (size_t i = 0; i < indicators.size(); ++i) {
            if (i) gv += ' ';
            gv += indicators[i];
        }
        gv += "))";
        script.footer.push_back(gv);
        SolverResult sr = run_solver(task.solver_cmd, script.to_text());
        for (long long k = k0; k < k1; ++k) {
            for (size_t j = 0; j < tcs.size(); ++j) {
                RunOutcome& o = out[static_cast<size_t>(k)][j];
                if (sr.status != SolverStatus::Sat) {
                    o.state = RunOutcome::State::Failed;
                    o.detail = sr.status == SolverStatus::Unknown ? "solver returned unknown"
                                                                  : sr.raw;
                    continue;
                }
                auto it = sr.assignment.find("g" + std::to_string(k) + "_c" + std::to_string(j));
                if (it == sr.assignment.end()) {
                    o.state = RunOutcome::State::Failed;
                    o.detail = "indicator missing from solver values";
                } else {
                    o.state = it->second.as_bool() ? RunOutcome::State::Sat
                                                   : RunOutcome::State::Violated;
                }
            }
        }
    });
    return out;
}

std::vector<Verdict> run_prob_all(const VerificationTask& task, const LoadedTask& loaded,
                                  const std::vector<ccsl::TimingConstraint>& tcs) {
    auto t0 = std::chrono::steady_clock::now();
    const long long M = task.runs;
    if (M < 1) throw Error("ParamError", "probabilistic mode requires runs >= 1");
    auto outcomes = solve_runs(task, loaded, tcs);

    bool closed = true;
    for (const auto& b : loaded.model.blocks)
        if (b.kind == model::BlockKind::Inport) closed = false;

    std::vector<Verdict> verdicts(tcs.size());
    std::vector<long long> vacuous(tcs.size(), 0);
    if (closed) {
        for (long long k = 0; k < M; ++k) {
            sim::PinMap pins = sample_scenario(loaded.model, task.bound, task.seed, k);
            sim::Trace trace = sim::simulate(loaded.model, task.bound, pins);
            sim::derive_ticks(loaded.model, trace, loaded.spec.clocks);
            for (size_t j = 0; j < tcs.size(); ++j) {
                if (outcomes[static_cast<size_t>(k)][j].state == RunOutcome::State::Sat &&
                    ccsl::count_instances(trace, tcs[j]).checked == 0)
                    ++vacuous[j];
            }
        }
    }
    for (size_t j = 0; j < tcs.size(); ++j) {
        Verdict& v = verdicts[j];
        v.name = tcs[j].name;
        v.kind = ccsl::to_string(tcs[j].kind);
        v.threshold = effective_threshold(task, tcs[j]);
        v.total_runs = M;
        v.vacuous_runs = vacuous[j];
        bool failed = false;
        long long first_violation = -1;
        for (long long k = 0; k < M; ++k) {
            switch (outcomes[static_cast<size_t>(k)][j].state) {
                case RunOutcome::State::Sat: ++v.sat_runs; break;
                case RunOutcome::State::Violated:
                    if (first_violation < 0) first_violation = k;
                    break;
                case RunOutcome::State::Failed:
                    failed = true;
                    if (v.counterexample.empty())
                        v.counterexample = outcomes[static_cast<size_t>(k)][j].detail;
                    break;
            }
        }
        v.estimate = Rational(static_cast<long>(v.sat_runs), static_cast<long>(M));
        v.estimate.canonicalize();
        v.wilson_ci = wilson_interval(v.sat_runs, M);
        if (failed) {
            v.result = Result::Undetermined;
        } else {
            v.result = v.estimate >= v.threshold ? Result::Valid : Result::Invalid;
            if (v.result == Result::Invalid && first_violation >= 0)
                v.counterexample =
                    "first violating run: k=" + std::to_string(first_violation) +
                    " (seed " + std::to_string(task.seed) + ")";
        }
        v.wall_ms = ms_since(t0);
    }
    return verdicts;
}

}  // namespace

Verdict run_probabilistic(const VerificationTask& task, const LoadedTask& loaded,
                          const ccsl::TimingConstraint& tc) {
    return run_prob_all(task, loaded, {tc}).front();
}

// --------------------------------------------------------------- driver

Report run_task(const VerificationTask& task) {
    auto t0 = std::chrono::steady_clock::now();
    Report report;
    report.version = "1.0.0";
    report.task = task;
    std::optional<LoadedTask> loaded = load_task(task, report.diagnostics);
    if (!loaded) return report;
    try {
        if (task.mode == Mode::Deterministic) {
            for (const auto& tc : loaded->spec.constraints)
                report.verdicts.push_back(run_deterministic_validity(task, *loaded, tc));
        } else {
            report.verdicts = run_prob_all(task, *loaded, loaded->spec.constraints);
        }
    } catch (const Error& e) {
        report.diagnostics.push_back(error_diag(e.code(), e.what()));
        return report;
    }
    report.wall_ms = ms_since(t0);
    return report;
}

// -------------------------------------------------------------- reports

std::string render_report(const Report& report, ReportFormat format) {
    if (format == ReportFormat::Json) {
        json j;
        j["version"] = report.version;
        json t;
        t["model"] = report.task.model_path;
        t["spec"] = report.task.spec_path;
        t["bound"] = report.task.bound;
        t["runs"] = report.task.runs;
        t["seed"] = report.task.seed;
        t["threshold"] =
            report.task.threshold ? rational_to_string(*report.task.threshold) : "";
        t["mode"] = report.task.mode == Mode::Deterministic ? "det" : "prob";
        t["jobs"] = report.task.jobs;
        j["task"] = t;
        j["verdicts"] = json::array();
        for (const auto& v : report.verdicts) {
            json e;
            e["name"] = v.name;
            e["kind"] = v.kind;
            e["result"] = to_string(v.result);
            e["sat_runs"] = v.sat_runs;
            e["total_runs"] = v.total_runs;
            e["estimate"] = rational_to_string(v.estimate);
            e["threshold"] = rational_to_string(v.threshold);
            e["vacuous_runs"] = v.vacuous_runs;
            e["wall_time_ms"] = v.wall_ms;
            j["verdicts"].push_back(e);
        }
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    size_t name_w = 10;
    for (const auto& v : report.verdicts) name_w = std::max(name_w, v.name.size());
    os << std::left << std::setw(static_cast<int>(name_w + 2)) << "Constraint"
       << std::setw(17) << "Kind" << std::setw(14) << "Result" << std::setw(10) << "SatRuns"
       << std::setw(12) << "Estimate" << std::setw(12) << "Threshold" << std::setw(9)
       << "Vacuous" << "Time(ms)" << "\n";
    for (const auto& v : report.verdicts) {
        os << std::left << std::setw(static_cast<int>(name_w + 2)) << v.name << std::setw(17)
           << v.kind << std::setw(14) << to_string(v.result) << std::setw(10)
           << (std::to_string(v.sat_runs) + "/" + std::to_string(v.total_runs)) << std::setw(12)
           << rational_to_string(v.estimate) << std::setw(12) << rational_to_string(v.threshold)
           << std::setw(9) << v.vacuous_runs << v.wall_ms << "\n";
        if (!v.wilson_ci.empty() && v.total_runs > 1)
            os << "  95% CI " << v.wilson_ci << "\n";
        if (!v.counterexample.empty() && v.result != Result::Valid)
            os << "  " << (v.result == Result::Invalid ? "counterexample:" : "detail:") << "\n"
               << v.counterexample << "\n";
    }
    return os.str();
}

int exit_code(const Report& report) {
    if (!report.usable()) return 3;
    bool invalid = false;
    for (const auto& v : report.verdicts) {
        if (v.result == Result::Undetermined) return 2;
        invalid = invalid || v.result == Result::Invalid;
    }
    return invalid ? 1 : 0;
}

}  // namespace tickcheck::verify

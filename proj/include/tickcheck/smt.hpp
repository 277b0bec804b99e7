#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tickcheck/model.hpp"
#include "tickcheck/sim.hpp"

namespace tickcheck::smt {

enum class Polarity { Assert, AssertNegated };

struct Declaration {
    std::string name;
    ValueType sort;
};

// Bounded unrolling of one model: a per-step symbol for every vector,
// plus the assertion list that pins their semantics. Single-owner;
// distinct contexts may be built concurrently.
class EncodingContext {
  public:
    // `prefix` namespaces every declared symbol so several contexts can
    // be concatenated into one solver script.
    EncodingContext(const model::SystemModel& model, long long bound, std::string prefix = "");

    const model::SystemModel& system() const { return *model_; }
    long long bound() const { return bound_; }

    // `<base>__<i>`; base must have been declared as a vector.
    std::string sym(const std::string& base, long long step) const;

    void declare_vector(const std::string& base, ValueType sort, long long count);
    void declare_const(const std::string& name, ValueType sort);
    bool has_vector(const std::string& base) const { return vectors_.count(base) != 0; }
    ValueType vector_sort(const std::string& base) const;

    void add_assertion(std::string formula);

    const std::vector<Declaration>& declarations() const { return decls_; }
    const std::vector<std::string>& assertions() const { return assertions_; }

    // RandomSource pins: (block id, step) -> value; empty = support-only.
    void set_pins(const sim::PinMap& pins);
    const sim::PinMap* pins() const { return pins_ ? &*pins_ : nullptr; }
    void set_inputs(const sim::InputMap& inputs);
    const sim::InputMap* inputs() const { return inputs_ ? &*inputs_ : nullptr; }

  private:
    const model::SystemModel* model_;
    long long bound_;
    std::string prefix_;
    std::vector<Declaration> decls_;
    std::vector<std::string> assertions_;
    std::map<std::string, std::pair<ValueType, long long>> vectors_;
    std::set<std::string> declared_;
    std::optional<sim::PinMap> pins_;
    std::optional<sim::InputMap> inputs_;
};

struct SmtScript {
    std::vector<Declaration> declarations;
    std::vector<std::string> assertions;
    std::string goal;  // already negated when polarity was AssertNegated
    std::vector<std::string> footer;  // (check-sat), (get-model) / (get-value ...)

    std::string to_text() const;
};

// Declares every step vector of the model, constrains state activity to
// {0,1} and asserts UnitDelay / chart-variable initial values at step 0
// (variables overwritten by initial entry actions are pinned by
// encode_chart instead).
EncodingContext init_context(const model::SystemModel& model, long long bound,
                             std::string prefix = "");

// Per step, one equality per connection.
void encode_lines(EncodingContext& ctx);

// Per step, the block kind's defining equation.
void encode_block(EncodingContext& ctx, const model::BlockInstance& block);

// The chart step relation: hierarchy partition, transition firing with
// priorities and outer-state preemption, action effects, frame
// conditions, and the anchor's delayed output ports.
void encode_chart(EncodingContext& ctx, const model::ChartDef& chart);

// init_context + encode_lines + every block + every chart.
EncodingContext encode_model(const model::SystemModel& model, long long bound,
                             const sim::PinMap* pins = nullptr,
                             const sim::InputMap* inputs = nullptr, std::string prefix = "");

// Deterministic SMT-LIB 2.6 rendering; throws Error("UndeclaredSymbol")
// when an assertion references an unknown symbol.
SmtScript emit_script(const EncodingContext& ctx, const std::string& goal, Polarity polarity,
                      const std::vector<std::string>& get_values = {});
std::string emit_smtlib(const EncodingContext& ctx, const std::string& goal, Polarity polarity);

// ---- small formula-building helpers (s-expression strings) ----

std::string app(const std::string& op, const std::vector<std::string>& args);
std::string conj(const std::vector<std::string>& parts);  // "true" when empty
std::string disj(const std::vector<std::string>& parts);  // "false" when empty
std::string implies(const std::string& a, const std::string& b);

// Action-language expression over an environment mapping variable names
// to already-encoded terms with sorts. Int literals widen to Real on
// demand, mirroring the typechecker.
struct Term {
    std::string text;
    ValueType type;
};
using TermEnv = std::map<std::string, Term>;
Term encode_expr(const action::ExprPtr& e, const TermEnv& env);

}  // namespace tickcheck::smt

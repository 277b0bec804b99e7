#pragma once

#include <map>
#include <string>
#include <vector>

#include "tickcheck/ccsl_types.hpp"
#include "tickcheck/model.hpp"

namespace tickcheck::sim {

// (block id, step) -> concrete value for RandomSource outputs
using PinMap = std::map<std::pair<long long, long long>, Value>;
// Inport block id -> per-step values
using InputMap = std::map<long long, std::vector<Value>>;

struct Trace {
    long long bound = 0;
    // every vector of model::vector_catalog, keyed by symbol base name
    std::map<std::string, std::vector<Value>> vals;
    // clock name -> tick list (filled by derive_ticks)
    std::map<std::string, std::vector<bool>> ticks;

    const std::vector<Value>& at(const std::string& base) const;
    const std::vector<bool>& ticks_of(const std::string& clock) const;
};

// Executes N steps of the model: blocks in topo order on current-step
// inputs (UnitDelay and chart outputs read the previous step), then one
// chart step per chart. Deterministic in (model, N, pins, inputs).
Trace simulate(const model::SystemModel& model, long long bound, const PinMap& pins = {},
               const InputMap& inputs = {});

// Fills trace.ticks for the given clock definitions.
void derive_ticks(const model::SystemModel& model, Trace& trace,
                  const std::vector<ccsl::Clock>& clocks);

// CSV dump: header `step,<name>...`, exact rationals as p/q.
std::string to_csv(const Trace& trace);

}  // namespace tickcheck::sim

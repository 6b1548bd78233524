#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fairadapt/model/types.hpp"
#include "fairadapt/sim/world.hpp"

namespace fairadapt::engine {

struct RuleEvaluation {
  std::string operation;
  std::size_t event = 0;  // iteration index of the triggering event
  sim::DayTime time;
  bool result = false;
  sim::Bindings bindings;  // restricted to the types the operation mentions
  std::string error;       // set when a path could not be followed

  bool operator==(const RuleEvaluation&) const = default;
};

struct MonitorResult {
  std::vector<RuleEvaluation> evaluations;
  /// Operations skipped because the event binds none of some root type.
  std::vector<std::string> unbound;
};

/// Root types an operation needs bound: those of its rule paths and of its
/// path-valued action parameters.
model::IdSet required_roots(const model::Operation& op);

/// Conjunction of the rule's conditions. Throws sim::SimError.
bool evaluate_rule(const model::Rule& rule, const sim::World& world, const sim::Bindings& bindings);

/// Evaluates every operation whose roots are all bound, in id order.
MonitorResult monitor(std::size_t event, const sim::Bindings& bindings, const sim::World& world,
                      const model::ModelBundle& bundle);

}  // namespace fairadapt::engine

#pragma once

#include <set>
#include <string>
#include <utility>

#include "fairadapt/model/types.hpp"
#include "fairadapt/sim/world.hpp"

namespace fairadapt::sim {

/// An operation's action bound to the instances of the current event.
struct ActionInstance {
  std::string operation;
  model::ActionSpec action;
  Bindings bindings;
};

/// State that lives for one loop iteration only.
struct IterationScratch {
  bool checkout_blocked = false;
};

struct ActionOutcome {
  std::string operation;
  model::Verb verb = model::Verb::SetField;
  bool applied = false;
  std::string reason;  // failure reason, empty when applied
  WorldDiff diff;

  bool operator==(const ActionOutcome&) const = default;
};

/// Executes a built-in verb. Failures (already_redirected, no_open_order,
/// exempt, ...) are reported in the outcome and leave the world untouched.
ActionOutcome apply_action(World& world, const ActionInstance& action, IterationScratch& scratch);

/// Instances an action reads or writes, and those it leaves unusable for
/// later actions. Used to order actions within one iteration.
struct ActionFootprint {
  std::set<InstanceKey> touches;
  std::set<InstanceKey> invalidates;
};

ActionFootprint footprint(const World& world, const ActionInstance& action);

}  // namespace fairadapt::sim

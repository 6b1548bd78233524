#pragma once

#include <string>
#include <vector>

#include "fairadapt/engine/planner.hpp"
#include "fairadapt/model/types.hpp"
#include "fairadapt/sim/actions.hpp"
#include "fairadapt/sim/world.hpp"

namespace fairadapt::engine {

struct PendingOp {
  std::string operation;
  int score = 0;

  bool operator==(const PendingOp&) const = default;
};

/// An operation dropped before execution because `kept`, an alternative of
/// the same OR node, was preferred.
struct Suppression {
  std::string operation;
  std::string kept;
  std::string reason;

  bool operator==(const Suppression&) const = default;
};

struct Execution {
  std::vector<sim::ActionOutcome> log;  // in execution order
  std::vector<Suppression> suppressed;
};

/// Chosen operations of the plans, first occurrence wins.
std::vector<PendingOp> pending_ops(const std::vector<Plan>& plans);

/// Runs the pending operations against `world`. OR alternatives are
/// deduplicated by (score, id); an invalidating action runs after every
/// other action touching the instance it invalidates; otherwise actions run
/// by (priority of their leaf, id). On an ordering cycle the least
/// authoritative action on it fails with "ordering_cycle".
Execution execute(const std::vector<PendingOp>& pending, sim::World& world,
                  const model::ModelBundle& bundle, const sim::Bindings& bindings,
                  sim::IterationScratch& scratch);

}  // namespace fairadapt::engine

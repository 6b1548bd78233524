#pragma once

#include <string>
#include <vector>

#include "fairadapt/engine/conflicts.hpp"
#include "fairadapt/engine/monitor.hpp"
#include "fairadapt/model/types.hpp"
#include "fairadapt/sim/actions.hpp"

namespace fairadapt::engine {

/// Why a violation needs no remedy: a conflicting node `by` was fulfilled
/// and is at least as authoritative.
struct Explanation {
  std::string by;
  int priority = 0;
  model::IdSet shared;

  bool operator==(const Explanation&) const = default;
};

struct Analysis {
  model::IdMap<model::NodeStatus> leaves;    // OFR id -> status
  model::IdMap<model::NodeStatus> statuses;  // requirement id -> status
  model::IdMap<std::vector<Explanation>> explained;
  /// Violated, unexplained roots ordered by (priority, id).
  std::vector<std::string> targets;
};

/// Per-OFR status: Fulfilled when some operation whose rule held was
/// applied, Violated when rules held but nothing was applied, else Idle.
model::IdMap<model::NodeStatus> leaf_statuses(const std::vector<RuleEvaluation>& evaluations,
                                              const std::vector<sim::ActionOutcome>& executed,
                                              const model::ModelBundle& bundle);

Analysis analyse(const std::vector<RuleEvaluation>& evaluations,
                 const std::vector<sim::ActionOutcome>& executed, const model::ModelBundle& bundle,
                 const std::vector<ConflictEdge>& edges);

}  // namespace fairadapt::engine

#pragma once

// One MAPE iteration per event. The live bundle (with its static conflict
// edges) is the loop's knowledge; injections and retirements swap it for a
// new version after the iteration that carried them.

#include <cstddef>
#include <string>
#include <vector>

#include "fairadapt/engine/analysis.hpp"
#include "fairadapt/engine/conflicts.hpp"
#include "fairadapt/engine/executor.hpp"
#include "fairadapt/engine/monitor.hpp"
#include "fairadapt/engine/planner.hpp"
#include "fairadapt/model/types.hpp"
#include "fairadapt/sim/events.hpp"
#include "fairadapt/sim/world.hpp"

namespace fairadapt::engine {

struct Knowledge {
  model::ModelBundle bundle;
  int version = 1;
  std::vector<ConflictEdge> edges;

  static Knowledge from(model::ModelBundle bundle, int version = 1);
};

struct RequirementState {
  model::NodeStatus status = model::NodeStatus::Idle;
  model::NodeStatus pre_status = model::NodeStatus::Idle;  // before any action ran
  int priority = model::kDefaultPriority;
  std::vector<std::string> operations;

  bool operator==(const RequirementState&) const = default;
};

struct TraceRecord {
  std::size_t iteration = 0;
  sim::Event event;
  sim::EventStatus event_status = sim::EventStatus::Applied;
  std::string event_reason;
  int model_version = 1;
  std::vector<RuleEvaluation> evaluations;
  std::vector<std::string> unbound;
  model::IdMap<RequirementState> requirements;
  std::vector<ConflictEdge> conflicts;
  model::IdMap<std::vector<Explanation>> explained;
  std::vector<std::string> targets;
  std::vector<Plan> plans;
  std::vector<Suppression> suppressed;
  std::vector<sim::ActionOutcome> executed;
  std::vector<std::string> unresolved;
  sim::WorldDiff world_diff;
  std::vector<std::string> errors;
};

using AdaptationTrace = std::vector<TraceRecord>;

/// Stages the event, then monitor, analyse, plan, execute, commit and a
/// final analysis. Failures land in `errors`; nothing is thrown.
TraceRecord mape_iteration(const sim::Event& event, sim::World& world, Knowledge& knowledge,
                           std::size_t iteration);

struct RunResult {
  AdaptationTrace trace;
  sim::World world;
  model::ModelBundle bundle;
  int model_version = 1;
};

/// Folds mape_iteration over the timeline. Throws std::logic_error if the
/// world loses referential integrity.
RunResult run(const sim::EventTimeline& timeline, model::ModelBundle bundle, sim::World world);

}  // namespace fairadapt::engine

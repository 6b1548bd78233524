#include "fairadapt/engine/loop.hpp"

#include <stdexcept>

#include "fairadapt/model/invariants.hpp"
#include "fairadapt/model/queries.hpp"

namespace fairadapt::engine {
namespace {

using model::NodeStatus;

void append(sim::WorldDiff& into, const sim::WorldDiff& from) {
  into.insert(into.end(), from.begin(), from.end());
}

/// Applies an injection or retirement; the new bundle must pass the load
/// invariants or the old one stays.
void evolve(const sim::Event& event, Knowledge& knowledge, std::vector<std::string>& errors) {
  model::ModelBundle next;
  try {
    if (event.kind == sim::EventKind::InjectRequirement) {
      if (!event.injection) throw std::invalid_argument("injection carries no requirements");
      next = model::inject(knowledge.bundle, event.injection->fragment, event.injection->parent);
    } else {
      if (!knowledge.bundle.requirements.contains(event.requirement)) {
        throw std::invalid_argument("unknown requirement '" + event.requirement + "'");
      }
      next = model::retire(knowledge.bundle, event.requirement);
    }
  } catch (const std::exception& e) {
    errors.push_back(e.what());
    return;
  }
  auto issues = model::check_invariants(next);
  if (!issues.empty()) {
    for (const auto& i : issues) errors.push_back(i.code + " " + i.message);
    return;
  }
  knowledge = Knowledge::from(std::move(next), knowledge.version + 1);
}

}  // namespace

Knowledge Knowledge::from(model::ModelBundle bundle, int version) {
  Knowledge k;
  k.edges = detect_conflicts(bundle);
  k.bundle = std::move(bundle);
  k.version = version;
  return k;
}

TraceRecord mape_iteration(const sim::Event& event, sim::World& world, Knowledge& knowledge,
                           std::size_t iteration) {
  const auto& bundle = knowledge.bundle;
  TraceRecord rec;
  rec.iteration = iteration;
  rec.event = event;
  rec.model_version = knowledge.version;

  sim::EventResult staged;
  bool staged_ok = true;
  try {
    staged = sim::stage_event(world, event);
    rec.event_status = staged.status;
    rec.event_reason = staged.reason;
  } catch (const sim::SimError& e) {
    staged_ok = false;
    rec.event_status = sim::EventStatus::Rejected;
    rec.event_reason = std::string(sim::to_string(e.code()));
    rec.errors.push_back(e.what());
    staged.bindings = {{"Clock", std::string(sim::kClockId)}};
  }
  append(rec.world_diff, staged.diff);

  auto seen = monitor(iteration, staged.bindings, world, bundle);
  rec.evaluations = std::move(seen.evaluations);
  rec.unbound = std::move(seen.unbound);
  model::IdSet fired;
  for (const auto& e : rec.evaluations) {
    if (e.result) fired.insert(e.operation);
    if (!e.error.empty()) rec.errors.push_back(e.operation + ": " + e.error);
  }

  const auto pre = analyse(rec.evaluations, {}, bundle, knowledge.edges);
  rec.targets = pre.targets;

  auto leaves = pre.leaves;
  auto provisional = pre.statuses;
  for (const auto& target : pre.targets) {
    if (provisional.at(target) != NodeStatus::Violated) continue;
    try {
      auto p = plan(bundle, target, provisional, &fired);
      for (const auto& op : p.chosen) leaves[bundle.operations.at(op).ofr] = NodeStatus::Fulfilled;
      provisional = model::propagate_satisfaction(bundle, leaves);
      rec.plans.push_back(std::move(p));
    } catch (const std::exception& e) {
      rec.errors.push_back(target + ": " + e.what());
    }
  }

  sim::IterationScratch scratch;
  auto exec = execute(pending_ops(rec.plans), world, bundle, staged.bindings, scratch);
  rec.suppressed = std::move(exec.suppressed);
  rec.executed = std::move(exec.log);
  for (const auto& o : rec.executed) append(rec.world_diff, o.diff);
  if (staged_ok) append(rec.world_diff, sim::commit_event(world, event, staged, scratch.checkout_blocked));

  const auto post = analyse(rec.evaluations, rec.executed, bundle, knowledge.edges);
  rec.explained = post.explained;
  rec.unresolved = post.targets;
  rec.conflicts = runtime_conflicts(knowledge.edges, post.statuses);

  model::Forest forest(bundle);
  for (const auto& [id, fr] : bundle.requirements) {
    rec.requirements.emplace(
        id, RequirementState{post.statuses.at(id), pre.statuses.at(id), fr.priority,
                             forest.operations_under(id)});
  }

  if (staged_ok && (event.kind == sim::EventKind::InjectRequirement ||
                    event.kind == sim::EventKind::RetireRequirement)) {
    evolve(event, knowledge, rec.errors);
  }
  return rec;
}

RunResult run(const sim::EventTimeline& timeline, model::ModelBundle bundle, sim::World world) {
  auto knowledge = Knowledge::from(std::move(bundle));
  AdaptationTrace trace;
  for (std::size_t i = 0; i < timeline.events.size(); ++i) {
    trace.push_back(mape_iteration(timeline.events[i], world, knowledge, i));
    auto problems = sim::validate_world(world);
    if (!problems.empty()) {
      throw std::logic_error("world invariant broken after iteration " + std::to_string(i) + ": " +
                             problems.front());
    }
  }
  return {std::move(trace), std::move(world), std::move(knowledge.bundle), knowledge.version};
}

}  // namespace fairadapt::engine

#include "fairadapt/engine/analysis.hpp"

#include <algorithm>

#include "fairadapt/model/queries.hpp"

namespace fairadapt::engine {

using model::NodeStatus;

model::IdMap<NodeStatus> leaf_statuses(const std::vector<RuleEvaluation>& evaluations,
                                       const std::vector<sim::ActionOutcome>& executed,
                                       const model::ModelBundle& bundle) {
  model::IdSet applied;
  for (const auto& o : executed) {
    if (o.applied) applied.insert(o.operation);
  }
  model::IdMap<NodeStatus> out;
  for (const auto& [id, ofr] : bundle.ofrs) out.emplace(id, NodeStatus::Idle);
  for (const auto& e : evaluations) {
    if (!e.result) continue;
    auto op = bundle.operations.find(e.operation);
    if (op == bundle.operations.end()) continue;
    auto& status = out[op->second.ofr];
    if (applied.contains(e.operation)) {
      status = NodeStatus::Fulfilled;
    } else if (status == NodeStatus::Idle) {
      status = NodeStatus::Violated;
    }
  }
  return out;
}

Analysis analyse(const std::vector<RuleEvaluation>& evaluations,
                 const std::vector<sim::ActionOutcome>& executed, const model::ModelBundle& bundle,
                 const std::vector<ConflictEdge>& edges) {
  Analysis out;
  out.leaves = leaf_statuses(evaluations, executed, bundle);
  const auto plain = model::propagate_satisfaction(bundle, out.leaves);
  out.statuses = plain;

  auto priority = [&](const std::string& id) { return bundle.requirements.at(id).priority; };
  for (const auto& e : edges) {
    if (e.severity != Severity::Likely) continue;
    for (const auto& [f, g] : {std::pair{e.a, e.b}, std::pair{e.b, e.a}}) {
      if (plain.at(f) != NodeStatus::Violated || plain.at(g) != NodeStatus::Fulfilled) continue;
      if (priority(g) > priority(f)) continue;
      out.explained[f].push_back({g, priority(g), e.shared});
      out.statuses[f] = NodeStatus::ConflictExplained;
    }
  }
  for (auto& [f, why] : out.explained) {
    std::sort(why.begin(), why.end(),
              [](const Explanation& x, const Explanation& y) { return x.by < y.by; });
  }

  model::Forest forest(bundle);
  for (const auto& root : forest.roots()) {
    if (out.statuses.at(root) == NodeStatus::Violated) out.targets.push_back(root);
  }
  std::sort(out.targets.begin(), out.targets.end(), [&](const auto& x, const auto& y) {
    return std::pair{priority(x), x} < std::pair{priority(y), y};
  });
  return out;
}

}  // namespace fairadapt::engine

#include "fairadapt/engine/planner.hpp"

#include <algorithm>
#include <tuple>

#include "fairadapt/model/queries.hpp"

namespace fairadapt::engine {
namespace {

using model::NodeStatus;

struct SubPlan {
  std::vector<std::string> ops;
  int score = 0;
  std::size_t writes = 0;
  std::vector<ChoicePoint> choices;
  std::vector<Rejection> rejected;

  auto key() const {
    return std::tuple{score, writes, ops.empty() ? std::string{} : ops.front()};
  }
};

class Planner {
 public:
  Planner(const model::ModelBundle& bundle, std::string_view target,
          const model::IdMap<NodeStatus>& statuses, const model::IdSet* fired)
      : bundle_(bundle), forest_(bundle), target_(target), statuses_(statuses), fired_(fired) {
    for (const auto& [id, status] : statuses) {
      if (status != NodeStatus::Fulfilled || !bundle.requirements.contains(id)) continue;
      auto rel = model::relation(bundle, target, id);
      if (model::same_goal(rel)) continue;
      conflicting_.emplace(id, model::resources_of(bundle, id));
    }
  }

  int score(const std::string& op) {
    if (auto it = scores_.find(op); it != scores_.end()) return it->second;
    const auto& writes = bundle_.operations.at(op).action.writes;
    int n = 0;
    for (const auto& [g, resources] : conflicting_) {
      if (std::any_of(writes.begin(), writes.end(),
                      [&](const std::string& w) { return resources.contains(w); })) {
        ++n;
      }
    }
    scores_[op] = n;
    return n;
  }

  SubPlan walk(const std::string& node) {
    const auto& req = forest_.requirement(node);
    switch (req.decomposition) {
      case model::Decomposition::Leaf: return leaf(node, req.ofr);
      case model::Decomposition::And: return all_of(req);
      case model::Decomposition::Or: return one_of(req);
    }
    return {};
  }

  std::map<std::string, int> scores() const { return scores_; }

 private:
  bool needs_repair(const std::string& node) const {
    auto it = statuses_.find(node);
    return it == statuses_.end() || it->second == NodeStatus::Violated;
  }

  SubPlan leaf(const std::string& node, const std::string& ofr) {
    std::vector<std::string> all;
    for (const auto& [id, op] : bundle_.operations) {
      if (op.ofr == ofr) all.push_back(id);
    }
    if (all.empty()) {
      throw model::ModelError(model::ErrorCode::NoOperationalisation, node,
                              "leaf '" + node + "' has no operation to choose from");
    }
    std::vector<std::string> candidates;
    if (fired_) {
      std::copy_if(all.begin(), all.end(), std::back_inserter(candidates),
                   [&](const std::string& op) { return fired_->contains(op); });
    }
    if (candidates.empty()) candidates = all;

    auto key = [&](const std::string& op) {
      return std::tuple{score(op), bundle_.operations.at(op).action.writes.size(), op};
    };
    auto best = *std::min_element(candidates.begin(), candidates.end(),
                                  [&](const auto& x, const auto& y) { return key(x) < key(y); });
    SubPlan out;
    out.ops = {best};
    out.score = score(best);
    out.writes = bundle_.operations.at(best).action.writes.size();
    out.choices.push_back({node, candidates, best});
    for (const auto& op : candidates) {
      if (op == best) continue;
      std::string reason = score(op) > out.score ? "higher_score"
                           : std::get<1>(key(op)) > out.writes ? "more_writes"
                                                                : "tie_id";
      out.rejected.push_back({op, score(op), reason});
    }
    return out;
  }

  SubPlan all_of(const model::FairnessRequirement& req) {
    SubPlan out;
    for (const auto& child : req.children) {
      if (!needs_repair(child)) continue;
      auto sub = walk(child);
      out.ops.insert(out.ops.end(), sub.ops.begin(), sub.ops.end());
      out.score += sub.score;
      out.writes += sub.writes;
      out.choices.insert(out.choices.end(), sub.choices.begin(), sub.choices.end());
      out.rejected.insert(out.rejected.end(), sub.rejected.begin(), sub.rejected.end());
    }
    return out;
  }

  SubPlan one_of(const model::FairnessRequirement& req) {
    std::vector<std::string> options;
    std::copy_if(req.children.begin(), req.children.end(), std::back_inserter(options),
                 [&](const std::string& c) { return needs_repair(c); });
    if (options.empty()) options = req.children;

    std::vector<SubPlan> subs;
    for (const auto& c : options) subs.push_back(walk(c));
    std::size_t best = 0;
    for (std::size_t i = 1; i < subs.size(); ++i) {
      if (subs[i].key() < subs[best].key()) best = i;
    }
    SubPlan out = subs[best];
    out.choices.insert(out.choices.begin(), ChoicePoint{req.id, options, options[best]});
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (i == best) continue;
      for (const auto& op : subs[i].ops) {
        out.rejected.push_back({op, score(op), "alternative_branch"});
      }
    }
    return out;
  }

  const model::ModelBundle& bundle_;
  model::Forest forest_;
  std::string target_;
  const model::IdMap<NodeStatus>& statuses_;
  const model::IdSet* fired_;
  model::IdMap<model::ResourceAccess> conflicting_;
  std::map<std::string, int> scores_;
};

}  // namespace

int score(const model::ModelBundle& bundle, std::string_view target, std::string_view op,
          const model::IdMap<model::NodeStatus>& statuses) {
  return Planner(bundle, target, statuses, nullptr).score(std::string(op));
}

Plan plan(const model::ModelBundle& bundle, std::string_view target,
          const model::IdMap<model::NodeStatus>& statuses, const model::IdSet* fired) {
  model::Forest forest(bundle);
  Planner planner(bundle, forest.node(target), statuses, fired);
  auto sub = planner.walk(forest.node(target));
  Plan out;
  out.target = std::string(target);
  out.chosen = std::move(sub.ops);
  out.rejected = std::move(sub.rejected);
  out.choices = std::move(sub.choices);
  out.scores = planner.scores();
  return out;
}

}  // namespace fairadapt::engine

#include "fairadapt/engine/executor.hpp"

#include <algorithm>
#include <functional>

#include "fairadapt/model/queries.hpp"

namespace fairadapt::engine {

std::vector<PendingOp> pending_ops(const std::vector<Plan>& plans) {
  std::vector<PendingOp> out;
  model::IdSet seen;
  for (const auto& p : plans) {
    for (const auto& op : p.chosen) {
      if (!seen.insert(op).second) continue;
      auto it = p.scores.find(op);
      out.push_back({op, it == p.scores.end() ? 0 : it->second});
    }
  }
  return out;
}

Execution execute(const std::vector<PendingOp>& pending, sim::World& world,
                  const model::ModelBundle& bundle, const sim::Bindings& bindings,
                  sim::IterationScratch& scratch) {
  Execution out;
  model::Forest forest(bundle);

  auto ranked = pending;
  std::sort(ranked.begin(), ranked.end(), [](const PendingOp& x, const PendingOp& y) {
    return std::pair{x.score, x.operation} < std::pair{y.score, y.operation};
  });
  std::vector<std::string> kept;
  for (const auto& p : ranked) {
    if (std::find(kept.begin(), kept.end(), p.operation) != kept.end()) continue;
    const auto& leaf = forest.leaf_of_operation(p.operation);
    auto rival = std::find_if(kept.begin(), kept.end(), [&](const std::string& k) {
      return model::relation(bundle, leaf, forest.leaf_of_operation(k)) ==
             model::Relation::DivergesAtOr;
    });
    if (rival != kept.end()) {
      out.suppressed.push_back({p.operation, *rival, "or_alternative"});
      continue;
    }
    kept.push_back(p.operation);
  }

  auto rank = [&](const std::string& op) {
    return std::pair{forest.requirement(forest.leaf_of_operation(op)).priority, op};
  };
  std::sort(kept.begin(), kept.end(), [&](const auto& x, const auto& y) { return rank(x) < rank(y); });

  const std::size_t n = kept.size();
  std::vector<sim::ActionInstance> actions;
  std::vector<sim::ActionFootprint> prints;
  for (const auto& op : kept) {
    actions.push_back({op, bundle.operations.at(op).action, bindings});
    prints.push_back(sim::footprint(world, actions.back()));
  }
  // before[i][j]: action i must run before action j
  std::vector<std::vector<bool>> before(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (const auto& key : prints[j].invalidates) {
        if (prints[i].touches.contains(key)) before[i][j] = true;
      }
    }
  }

  std::vector<bool> done(n, false);
  auto blocked = [&](std::size_t j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!done[i] && before[i][j]) return true;
    }
    return false;
  };
  auto on_cycle = [&](std::size_t start) {
    std::vector<bool> seen(n, false);
    std::function<bool(std::size_t)> reach = [&](std::size_t at) {
      for (std::size_t k = 0; k < n; ++k) {
        if (done[k] || !before[at][k]) continue;
        if (k == start) return true;
        if (seen[k]) continue;
        seen[k] = true;
        if (reach(k)) return true;
      }
      return false;
    };
    return reach(start);
  };

  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t j = 0; j < n && pick == n; ++j) {
      if (!done[j] && !blocked(j)) pick = j;
    }
    if (pick != n) {
      done[pick] = true;
      out.log.push_back(sim::apply_action(world, actions[pick], scratch));
      continue;
    }
    for (std::size_t j = n; j-- > 0;) {
      if (!done[j] && on_cycle(j)) {
        pick = j;
        break;
      }
    }
    done[pick] = true;
    out.log.push_back({kept[pick], actions[pick].action.verb, false, "ordering_cycle", {}});
  }
  return out;
}

}  // namespace fairadapt::engine

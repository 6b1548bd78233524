#include "fairadapt/engine/conflicts.hpp"

#include <algorithm>

namespace fairadapt::engine {
namespace {

using model::Access;
using model::ResourceAccess;

bool writes(const ResourceAccess& r, const std::string& type) {
  auto it = r.find(type);
  return it != r.end() && it->second == Access::Write;
}

model::IdSet shared_resources(const ResourceAccess& f, const ResourceAccess& g) {
  model::IdSet out;
  for (const auto& [type, access] : f) {
    if (!g.contains(type)) continue;
    if (access == Access::Write || writes(g, type)) out.insert(type);
  }
  return out;
}

}  // namespace

std::string_view to_string(Severity s) {
  return s == Severity::Likely ? "Likely" : "Discounted";
}

std::vector<ConflictEdge> detect_conflicts(const model::ModelBundle& bundle) {
  model::Forest forest(bundle);
  std::vector<std::string> ids;
  model::IdMap<ResourceAccess> resources;
  model::IdMap<std::vector<std::string>> ops;
  for (const auto& [id, fr] : bundle.requirements) {
    ids.push_back(id);
    resources.emplace(id, model::resources_of(bundle, id));
    ops.emplace(id, forest.operations_under(id));
  }

  std::vector<ConflictEdge> edges;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      const auto& a = ids[i];
      const auto& b = ids[j];
      auto shared = shared_resources(resources.at(a), resources.at(b));
      if (shared.empty()) continue;
      ConflictEdge e;
      e.a = a;
      e.b = b;
      e.shared = std::move(shared);
      e.overlap = model::affected_overlap(bundle, a, b);
      e.relation = model::relation(bundle, a, b);
      e.severity = model::same_goal(e.relation) ? Severity::Discounted : Severity::Likely;
      for (const auto& x : ops.at(a)) {
        const auto& lx = bundle.operations.at(x).links;
        for (const auto& y : ops.at(b)) {
          for (const auto& r : shared_resources(lx, bundle.operations.at(y).links)) {
            e.evidence.push_back({x, y, r});
          }
        }
      }
      edges.push_back(std::move(e));
    }
  }
  return edges;
}

std::vector<ConflictEdge> runtime_conflicts(const std::vector<ConflictEdge>& edges,
                                            const model::IdMap<model::NodeStatus>& statuses) {
  auto troubled = [&](const std::string& id) {
    auto it = statuses.find(id);
    return it != statuses.end() && (it->second == model::NodeStatus::Violated ||
                                    it->second == model::NodeStatus::ConflictExplained);
  };
  std::vector<ConflictEdge> out;
  std::copy_if(edges.begin(), edges.end(), std::back_inserter(out), [&](const ConflictEdge& e) {
    return e.severity == Severity::Likely && (troubled(e.a) || troubled(e.b));
  });
  return out;
}

}  // namespace fairadapt::engine

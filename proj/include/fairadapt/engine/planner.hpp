#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fairadapt/model/types.hpp"

namespace fairadapt::engine {

struct Rejection {
  std::string operation;
  int score = 0;
  std::string reason;  // higher_score, more_writes, tie_id, alternative_branch

  bool operator==(const Rejection&) const = default;
};

/// A LEAF choosing among its operations, or an OR node choosing a child.
struct ChoicePoint {
  std::string node;
  std::vector<std::string> options;
  std::string chosen;

  bool operator==(const ChoicePoint&) const = default;
};

struct Plan {
  std::string target;
  std::vector<std::string> chosen;
  std::vector<Rejection> rejected;
  std::map<std::string, int> scores;
  std::vector<ChoicePoint> choices;

  bool operator==(const Plan&) const = default;
};

/// Number of fulfilled requirement nodes g that diverge from `target` at an
/// OR node or are unrelated to it, and whose resources `op` writes.
int score(const model::ModelBundle& bundle, std::string_view target, std::string_view op,
          const model::IdMap<model::NodeStatus>& statuses);

/// Least-conflicting set of operations that would repair `target`. AND
/// nodes include every violated (or unknown) child; OR nodes and leaves
/// pick the lowest (score, writes, id). When `fired` is given, a leaf only
/// considers its operations in it, unless none of them are.
/// Throws model::ModelError NoOperationalisation.
Plan plan(const model::ModelBundle& bundle, std::string_view target,
          const model::IdMap<model::NodeStatus>& statuses, const model::IdSet* fired = nullptr);

}  // namespace fairadapt::engine

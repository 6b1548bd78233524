#pragma once

#include <string>
#include <vector>

#include "fairadapt/model/queries.hpp"
#include "fairadapt/model/types.hpp"

namespace fairadapt::engine {

enum class Severity { Likely, Discounted };

std::string_view to_string(Severity s);

/// Operation pair that makes an edge: `op_a` (under `a`) and `op_b` (under
/// `b`) both touch `resource` and at least one of them writes it.
struct Evidence {
  std::string op_a;
  std::string op_b;
  std::string resource;

  auto operator<=>(const Evidence&) const = default;
};

struct ConflictEdge {
  std::string a;  // a < b
  std::string b;
  model::IdSet shared;
  model::IdSet overlap;
  Severity severity = Severity::Likely;
  model::Relation relation = model::Relation::Unrelated;
  std::vector<Evidence> evidence;

  bool operator==(const ConflictEdge&) const = default;
};

/// Static conflict edges over every unordered pair of requirement nodes,
/// sorted by (a, b). An edge exists when one side writes a resource the
/// other reads or writes. Node statuses play no part here.
std::vector<ConflictEdge> detect_conflicts(const model::ModelBundle& bundle);

/// Likely edges with at least one endpoint Violated or ConflictExplained.
std::vector<ConflictEdge> runtime_conflicts(const std::vector<ConflictEdge>& edges,
                                            const model::IdMap<model::NodeStatus>& statuses);

}  // namespace fairadapt::engine

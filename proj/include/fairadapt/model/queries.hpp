#pragma once

// Pure queries over the three runtime models.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairadapt/model/errors.hpp"
#include "fairadapt/model/types.hpp"

namespace fairadapt::model {

/// Kind of the terminal segment of `path`. Throws ModelError with
/// UnknownType, UnknownField or NonScalarTerminal (a set-valued field used
/// as a terminal or traversed as an intermediate).
FieldKind resolve_path(const ResourceModel& model, const FieldPath& path);

/// Like resolve_path but a set-valued terminal is accepted; used for
/// `count(...)` operands.
FieldKind resolve_collection_path(const ResourceModel& model, const FieldPath& path);

/// Every resource type a path dereferences: the root plus the targets of the
/// reference fields it traverses.
IdSet path_types(const ResourceModel& model, const FieldPath& path);

/// Types read by the path-valued parameters of an action.
IdSet derive_action_reads(const ResourceModel& model, const std::vector<ActionParam>& params);

/// Links of an operation: rule paths and action reads as Read, declared
/// writes as Write.
ResourceAccess derive_links(const ResourceModel& model, const Rule& rule, const ActionSpec& action);

/// One policy per alternative operation of the OFR, ordered by operation id.
std::vector<Policy> policies_of(const ModelBundle& bundle, std::string_view ofr);

/// Parent/child structure of the requirement forest. Construction does not
/// validate; see check_invariants for that.
class Forest {
 public:
  explicit Forest(const ModelBundle& bundle);

  bool contains(std::string_view id) const;
  /// Node id for an FR id, or for an OFR id its leaf node. Throws UnknownNode.
  const std::string& node(std::string_view id) const;
  std::optional<std::string> parent(std::string_view id) const;
  const std::vector<std::string>& roots() const { return roots_; }
  /// Path from `id` up to its root, `id` first.
  std::vector<std::string> ancestry(std::string_view id) const;
  /// `id` and all of its descendants, pre-order.
  std::vector<std::string> subtree(std::string_view id) const;
  /// Operation ids attached to the leaves of `id`'s subtree, sorted.
  std::vector<std::string> operations_under(std::string_view id) const;
  /// Leaf node owning the operation's OFR.
  const std::string& leaf_of_operation(std::string_view op) const;
  const FairnessRequirement& requirement(std::string_view id) const;

 private:
  const ModelBundle* bundle_;
  std::map<std::string, std::string, std::less<>> parent_;
  std::map<std::string, std::string, std::less<>> leaf_of_ofr_;
  std::vector<std::string> roots_;
};

/// Union of the links of every operation under `fr`; Write wins over Read.
/// Throws UnknownNode, or DanglingLeaf when a leaf has no operation.
ResourceAccess resources_of(const ModelBundle& bundle, std::string_view fr);

/// Status of every requirement node given the status of each OFR. AND is
/// violated if any child is, OR only if all are; otherwise a node is
/// fulfilled if some child is and idle if none is. OFRs missing from
/// `leaf_statuses` count as Idle.
IdMap<NodeStatus> propagate_satisfaction(const ModelBundle& bundle,
                                         const IdMap<NodeStatus>& leaf_statuses);

enum class Relation { SameBranch, DivergesAtAnd, DivergesAtOr, Unrelated };

std::string_view to_string(Relation r);

/// Classifies two nodes by their lowest common ancestor. Accepts FR ids or
/// OFR ids (mapped to their leaf). Throws UnknownNode.
Relation relation(const ModelBundle& bundle, std::string_view a, std::string_view b);

/// True for SameBranch and DivergesAtAnd: both nodes serve the same goal.
bool same_goal(Relation r);

/// Intersection of the affected-stakeholder sets. Throws UnknownNode.
IdSet affected_overlap(const ModelBundle& bundle, std::string_view a, std::string_view b);

}  // namespace fairadapt::model

#include "fairadapt/model/queries.hpp"

#include <algorithm>
#include <functional>
#include <iterator>

namespace fairadapt::model {
namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& subject, const std::string& message) {
  throw ModelError(code, subject, message);
}

const ResourceType& find_type(const ResourceModel& model, const std::string& name) {
  auto it = model.find(name);
  if (it == model.end()) fail(ErrorCode::UnknownType, name, "unknown resource type '" + name + "'");
  return it->second;
}

FieldKind walk(const ResourceModel& model, const FieldPath& path, bool allow_set_terminal,
               IdSet* visited_types) {
  const ResourceType* current = &find_type(model, path.root);
  if (visited_types) visited_types->insert(path.root);
  if (path.segments.empty()) return FieldKind::reference(path.root);

  for (std::size_t i = 0; i < path.segments.size(); ++i) {
    const auto& segment = path.segments[i];
    const Field* field = current->find(segment);
    if (!field) {
      fail(ErrorCode::UnknownField, segment,
           "type '" + current->name + "' has no field '" + segment + "' in " + path.str());
    }
    if (i + 1 == path.segments.size()) {
      if (field->kind.tag == KindTag::SetOf && !allow_set_terminal) {
        fail(ErrorCode::NonScalarTerminal, segment,
             "'" + path.str() + "' is a set; compare it through count(...)");
      }
      return field->kind;
    }
    switch (field->kind.tag) {
      case KindTag::Reference:
        current = &find_type(model, field->kind.target);
        if (visited_types) visited_types->insert(field->kind.target);
        break;
      case KindTag::SetOf:
        fail(ErrorCode::NonScalarTerminal, segment,
             "cannot traverse set-valued field '" + segment + "' in " + path.str());
      default:
        fail(ErrorCode::UnknownField, path.segments[i + 1],
             "field '" + segment + "' of kind " + to_string(field->kind) + " has no field '" +
                 path.segments[i + 1] + "'");
    }
  }
  return FieldKind::reference(current->name);  // unreachable
}

void merge_access(ResourceAccess& into, const ResourceAccess& from) {
  for (const auto& [type, access] : from) {
    auto [it, inserted] = into.emplace(type, access);
    if (!inserted && access == Access::Write) it->second = Access::Write;
  }
}

}  // namespace

FieldKind resolve_path(const ResourceModel& model, const FieldPath& path) {
  return walk(model, path, false, nullptr);
}

FieldKind resolve_collection_path(const ResourceModel& model, const FieldPath& path) {
  return walk(model, path, true, nullptr);
}

IdSet path_types(const ResourceModel& model, const FieldPath& path) {
  IdSet types;
  walk(model, path, true, &types);
  return types;
}

IdSet derive_action_reads(const ResourceModel& model, const std::vector<ActionParam>& params) {
  IdSet reads;
  for (const auto& p : params) {
    if (const auto* path = std::get_if<PathOperand>(&p.value)) {
      reads.merge(path_types(model, path->path));
    }
  }
  return reads;
}

ResourceAccess derive_links(const ResourceModel& model, const Rule& rule, const ActionSpec& action) {
  ResourceAccess links;
  auto read = [&](const FieldPath& path) {
    for (const auto& t : path_types(model, path)) links.emplace(t, Access::Read);
  };
  for (const auto& c : rule.conditions) {
    read(c.lhs.path);
    if (const auto* rhs = std::get_if<PathOperand>(&c.rhs)) read(rhs->path);
  }
  for (const auto& t : action.reads) links.emplace(t, Access::Read);
  for (const auto& t : action.writes) links[t] = Access::Write;
  return links;
}

std::vector<Policy> policies_of(const ModelBundle& bundle, std::string_view ofr) {
  std::vector<Policy> out;
  for (const auto& [id, op] : bundle.operations) {
    if (op.ofr == ofr) out.push_back(Policy{op.rule, {op.action}});
  }
  return out;
}

Forest::Forest(const ModelBundle& bundle) : bundle_(&bundle) {
  for (const auto& [id, fr] : bundle.requirements) {
    if (fr.decomposition == Decomposition::Leaf) {
      leaf_of_ofr_.emplace(fr.ofr, id);
    } else {
      for (const auto& child : fr.children) parent_.emplace(child, id);
    }
  }
  for (const auto& [id, fr] : bundle.requirements) {
    if (!parent_.contains(id)) roots_.push_back(id);
  }
}

bool Forest::contains(std::string_view id) const {
  return bundle_->requirements.contains(id) || leaf_of_ofr_.contains(id);
}

const std::string& Forest::node(std::string_view id) const {
  if (auto it = bundle_->requirements.find(id); it != bundle_->requirements.end()) return it->first;
  if (auto it = leaf_of_ofr_.find(id); it != leaf_of_ofr_.end()) return it->second;
  fail(ErrorCode::UnknownNode, std::string(id), "unknown requirement '" + std::string(id) + "'");
}

std::optional<std::string> Forest::parent(std::string_view id) const {
  auto it = parent_.find(node(id));
  if (it == parent_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Forest::ancestry(std::string_view id) const {
  std::vector<std::string> chain{node(id)};
  IdSet seen{chain.front()};
  for (auto it = parent_.find(chain.back()); it != parent_.end(); it = parent_.find(chain.back())) {
    if (!seen.insert(it->second).second) break;  // cycle; reported by check_invariants
    chain.push_back(it->second);
  }
  return chain;
}

std::vector<std::string> Forest::subtree(std::string_view id) const {
  std::vector<std::string> out;
  IdSet seen;
  std::function<void(const std::string&)> visit = [&](const std::string& n) {
    if (!seen.insert(n).second) return;
    out.push_back(n);
    auto it = bundle_->requirements.find(n);
    if (it == bundle_->requirements.end()) return;
    for (const auto& c : it->second.children) visit(c);
  };
  visit(node(id));
  return out;
}

std::vector<std::string> Forest::operations_under(std::string_view id) const {
  IdSet ofrs;
  for (const auto& n : subtree(id)) {
    auto it = bundle_->requirements.find(n);
    if (it != bundle_->requirements.end() && it->second.decomposition == Decomposition::Leaf) {
      ofrs.insert(it->second.ofr);
    }
  }
  std::vector<std::string> ops;
  for (const auto& [op_id, op] : bundle_->operations) {
    if (ofrs.contains(op.ofr)) ops.push_back(op_id);
  }
  return ops;
}

const std::string& Forest::leaf_of_operation(std::string_view op) const {
  auto it = bundle_->operations.find(op);
  if (it == bundle_->operations.end()) {
    fail(ErrorCode::UnknownNode, std::string(op), "unknown operation '" + std::string(op) + "'");
  }
  auto leaf = leaf_of_ofr_.find(it->second.ofr);
  if (leaf == leaf_of_ofr_.end()) {
    fail(ErrorCode::UnknownNode, it->second.ofr,
         "operational requirement '" + it->second.ofr + "' is not attached to a leaf");
  }
  return leaf->second;
}

const FairnessRequirement& Forest::requirement(std::string_view id) const {
  return bundle_->requirements.find(node(id))->second;
}

ResourceAccess resources_of(const ModelBundle& bundle, std::string_view fr) {
  Forest forest(bundle);
  ResourceAccess out;
  for (const auto& n : forest.subtree(fr)) {
    const auto& req = forest.requirement(n);
    if (req.decomposition != Decomposition::Leaf) {
      if (req.children.empty()) {
        fail(ErrorCode::DanglingLeaf, n, "requirement '" + n + "' has no children");
      }
      continue;
    }
    bool any = false;
    for (const auto& [op_id, op] : bundle.operations) {
      if (op.ofr != req.ofr) continue;
      any = true;
      merge_access(out, op.links);
    }
    if (!any) fail(ErrorCode::DanglingLeaf, n, "leaf '" + n + "' has no operation");
  }
  return out;
}

IdMap<NodeStatus> propagate_satisfaction(const ModelBundle& bundle,
                                         const IdMap<NodeStatus>& leaf_statuses) {
  IdMap<NodeStatus> out;
  std::function<NodeStatus(const std::string&)> eval = [&](const std::string& id) -> NodeStatus {
    if (auto it = out.find(id); it != out.end()) return it->second;
    const auto& req = bundle.requirements.at(id);
    out[id] = NodeStatus::Idle;  // breaks cycles in malformed input
    NodeStatus status = NodeStatus::Idle;
    if (req.decomposition == Decomposition::Leaf) {
      auto it = leaf_statuses.find(req.ofr);
      status = it == leaf_statuses.end() ? NodeStatus::Idle : it->second;
      if (status == NodeStatus::ConflictExplained) status = NodeStatus::Violated;
    } else {
      std::size_t violated = 0;
      bool fulfilled = false;
      for (const auto& c : req.children) {
        NodeStatus s = eval(c);
        if (s == NodeStatus::Violated) ++violated;
        if (s == NodeStatus::Fulfilled) fulfilled = true;
      }
      bool node_violated = req.decomposition == Decomposition::And
                               ? violated > 0
                               : violated == req.children.size() && violated > 0;
      if (node_violated) {
        status = NodeStatus::Violated;
      } else if (fulfilled) {
        status = NodeStatus::Fulfilled;
      }
    }
    out[id] = status;
    return status;
  };
  for (const auto& [id, req] : bundle.requirements) eval(id);
  return out;
}

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::SameBranch: return "SameBranch";
    case Relation::DivergesAtAnd: return "DivergesAtAND";
    case Relation::DivergesAtOr: return "DivergesAtOR";
    case Relation::Unrelated: return "Unrelated";
  }
  return "?";
}

Relation relation(const ModelBundle& bundle, std::string_view a, std::string_view b) {
  Forest forest(bundle);
  auto up_a = forest.ancestry(a);
  auto up_b = forest.ancestry(b);
  if (std::find(up_a.begin(), up_a.end(), up_b.front()) != up_a.end() ||
      std::find(up_b.begin(), up_b.end(), up_a.front()) != up_b.end()) {
    return Relation::SameBranch;
  }
  IdSet b_set(up_b.begin(), up_b.end());
  for (const auto& n : up_a) {
    if (!b_set.contains(n)) continue;
    return forest.requirement(n).decomposition == Decomposition::Or ? Relation::DivergesAtOr
                                                                    : Relation::DivergesAtAnd;
  }
  return Relation::Unrelated;
}

bool same_goal(Relation r) { return r == Relation::SameBranch || r == Relation::DivergesAtAnd; }

IdSet affected_overlap(const ModelBundle& bundle, std::string_view a, std::string_view b) {
  Forest forest(bundle);
  const auto& ra = forest.requirement(a).affects;
  const auto& rb = forest.requirement(b).affects;
  IdSet out;
  std::set_intersection(ra.begin(), ra.end(), rb.begin(), rb.end(), std::inserter(out, out.end()));
  return out;
}

}  // namespace fairadapt::model

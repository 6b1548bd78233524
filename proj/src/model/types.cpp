#include "fairadapt/model/types.hpp"

#include <cstdio>

#include "fairadapt/model/errors.hpp"

namespace fairadapt::model {

const Field* ResourceType::find(std::string_view field) const {
  for (const auto& f : fields) {
    if (f.name == field) return &f;
  }
  return nullptr;
}

std::string FieldPath::str() const {
  std::string out = root;
  for (const auto& s : segments) {
    out += '.';
    out += s;
  }
  return out;
}

const Operand* ActionSpec::param(std::string_view name) const {
  for (const auto& p : params) {
    if (p.name == name) return &p.value;
  }
  return nullptr;
}

bool ModelBundle::empty() const {
  return stakeholders.empty() && resources.empty() && requirements.empty() && ofrs.empty() &&
         operations.empty();
}

bool operator==(const ModelBundle& a, const ModelBundle& b) {
  return a.stakeholders == b.stakeholders && a.resources == b.resources &&
         a.requirements == b.requirements && a.ofrs == b.ofrs && a.operations == b.operations;
}

std::string_view to_string(StakeholderKind kind) {
  switch (kind) {
    case StakeholderKind::Individual: return "individual";
    case StakeholderKind::Group: return "group";
    case StakeholderKind::Organization: return "organization";
    case StakeholderKind::Authority: return "authority";
  }
  return "?";
}

std::string_view to_string(Verb verb) {
  switch (verb) {
    case Verb::RemoveItem: return "remove_item";
    case Verb::RedirectOut: return "redirect_out";
    case Verb::CapBasket: return "cap_basket";
    case Verb::ExemptItem: return "exempt_item";
    case Verb::SetField: return "set_field";
    case Verb::BlockCheckout: return "block_checkout";
  }
  return "?";
}

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
  }
  return "?";
}

std::string_view to_string(Decomposition d) {
  switch (d) {
    case Decomposition::And: return "AND";
    case Decomposition::Or: return "OR";
    case Decomposition::Leaf: return "LEAF";
  }
  return "?";
}

std::string_view to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::Fulfilled: return "FULFILLED";
    case NodeStatus::Violated: return "VIOLATED";
    case NodeStatus::Idle: return "IDLE";
    case NodeStatus::ConflictExplained: return "CONFLICT_EXPLAINED";
  }
  return "?";
}

std::string_view to_string(Access a) { return a == Access::Write ? "write" : "read"; }

std::string to_string(const FieldKind& kind) {
  switch (kind.tag) {
    case KindTag::Integer: return "integer";
    case KindTag::Boolean: return "boolean";
    case KindTag::Text: return "text";
    case KindTag::Time: return "time";
    case KindTag::Enum: {
      std::string out = "enum(";
      for (std::size_t i = 0; i < kind.enum_values.size(); ++i) {
        if (i) out += ", ";
        out += kind.enum_values[i];
      }
      return out + ")";
    }
    case KindTag::Reference: return "ref " + kind.target;
    case KindTag::SetOf: return "set " + kind.target;
  }
  return "?";
}

std::string format_time(TimeOfDay t) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d:%02d", t.minutes / 60, t.minutes % 60);
  return buf;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownType: return "UnknownType";
    case ErrorCode::UnknownField: return "UnknownField";
    case ErrorCode::NonScalarTerminal: return "NonScalarTerminal";
    case ErrorCode::DanglingLeaf: return "DanglingLeaf";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::NoOperationalisation: return "NoOperationalisation";
    case ErrorCode::InvalidModel: return "InvalidModel";
  }
  return "?";
}

}  // namespace fairadapt::model

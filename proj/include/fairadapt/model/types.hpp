#pragma once

// Runtime models: stakeholders, the resource schema, the fairness
// requirement forest and the operationalisation model. All of them are
// plain values; a ModelBundle is immutable once it has been validated.

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fairadapt/source_span.hpp"

namespace fairadapt::model {

template <typename T>
using IdMap = std::map<std::string, T, std::less<>>;

using IdSet = std::set<std::string, std::less<>>;

enum class StakeholderKind { Individual, Group, Organization, Authority };

struct Stakeholder {
  std::string id;
  std::string name;
  StakeholderKind kind = StakeholderKind::Individual;

  bool operator==(const Stakeholder&) const = default;
};

enum class KindTag { Integer, Boolean, Text, Enum, Time, Reference, SetOf };

/// Kind of a resource field. `enum_values` is used by Enum, `target` by
/// Reference and SetOf.
struct FieldKind {
  KindTag tag = KindTag::Integer;
  std::vector<std::string> enum_values;
  std::string target;

  bool operator==(const FieldKind&) const = default;

  static FieldKind integer() { return {KindTag::Integer, {}, {}}; }
  static FieldKind boolean() { return {KindTag::Boolean, {}, {}}; }
  static FieldKind text() { return {KindTag::Text, {}, {}}; }
  static FieldKind time() { return {KindTag::Time, {}, {}}; }
  static FieldKind enumeration(std::vector<std::string> values) {
    return {KindTag::Enum, std::move(values), {}};
  }
  static FieldKind reference(std::string type) { return {KindTag::Reference, {}, std::move(type)}; }
  static FieldKind set_of(std::string type) { return {KindTag::SetOf, {}, std::move(type)}; }
};

struct Field {
  std::string name;
  FieldKind kind;

  bool operator==(const Field&) const = default;
};

struct ResourceType {
  std::string name;
  std::vector<Field> fields;

  const Field* find(std::string_view field) const;
  bool operator==(const ResourceType&) const = default;
};

using ResourceModel = IdMap<ResourceType>;

/// Dotted reference such as `Order.owner.age`. An empty segment list denotes
/// the bound instance of `root` itself.
struct FieldPath {
  std::string root;
  std::vector<std::string> segments;

  std::string str() const;
  bool operator==(const FieldPath&) const = default;
};

/// Minutes since midnight, in [0, 1440).
struct TimeOfDay {
  int minutes = 0;

  auto operator<=>(const TimeOfDay&) const = default;
};

/// Enumeration literal, written as a bare identifier.
struct Symbol {
  std::string name;

  bool operator==(const Symbol&) const = default;
};

using Literal = std::variant<std::int64_t, bool, std::string, Symbol, TimeOfDay>;

/// A path used as a comparison operand, optionally wrapped in `count(...)`.
struct PathOperand {
  FieldPath path;
  bool count = false;

  bool operator==(const PathOperand&) const = default;
};

using Operand = std::variant<Literal, PathOperand>;

enum class CmpOp { Lt, Le, Gt, Ge, Eq, Ne };

struct Condition {
  PathOperand lhs;
  CmpOp op = CmpOp::Eq;
  Operand rhs;

  bool operator==(const Condition&) const = default;
};

/// Conjunction of conditions.
struct Rule {
  std::vector<Condition> conditions;

  bool operator==(const Rule&) const = default;
};

enum class Verb { RemoveItem, RedirectOut, CapBasket, ExemptItem, SetField, BlockCheckout };

struct ActionParam {
  std::string name;
  Operand value;

  bool operator==(const ActionParam&) const = default;
};

/// An action with its declared resource access. `reads` is derived from the
/// path-valued parameters, `writes` is declared in the source.
struct ActionSpec {
  Verb verb = Verb::SetField;
  std::vector<ActionParam> params;
  IdSet reads;
  IdSet writes;

  const Operand* param(std::string_view name) const;
  bool operator==(const ActionSpec&) const = default;
};

struct Policy {
  Rule rule;
  std::vector<ActionSpec> actions;

  bool operator==(const Policy&) const = default;
};

enum class Access { Read, Write };

/// Resource type -> strongest access (Write dominates Read).
using ResourceAccess = std::map<std::string, Access, std::less<>>;

/// The (s, p, r) leaf tuple. Its policy alternatives are the operations
/// declared `for` it; `resources` must equal the union of their links.
struct OperationalRequirement {
  std::string id;
  std::string specified_by;
  IdSet affects;
  IdSet resources;

  bool operator==(const OperationalRequirement&) const = default;
};

enum class Decomposition { And, Or, Leaf };

inline constexpr int kDefaultPriority = 10;

struct FairnessRequirement {
  std::string id;
  std::string description;
  std::string specified_by;
  IdSet affects;
  Decomposition decomposition = Decomposition::Leaf;
  std::vector<std::string> children;  // And / Or
  std::string ofr;                    // Leaf
  int priority = kDefaultPriority;    // lower is more authoritative

  bool operator==(const FairnessRequirement&) const = default;
};

struct Operation {
  std::string id;
  std::string ofr;
  Rule rule;
  ActionSpec action;
  ResourceAccess links;

  bool operator==(const Operation&) const = default;
};

enum class NodeStatus { Fulfilled, Violated, Idle, ConflictExplained };

struct ModelBundle {
  IdMap<Stakeholder> stakeholders;
  ResourceModel resources;
  IdMap<FairnessRequirement> requirements;
  IdMap<OperationalRequirement> ofrs;
  IdMap<Operation> operations;
  /// Declaration spans keyed by "<kind>:<id>", e.g. "requirement:FR1".
  /// Not part of structural equality.
  std::map<std::string, SourceSpan, std::less<>> spans;

  bool empty() const;
};

/// Structural equality; source spans are ignored.
bool operator==(const ModelBundle& a, const ModelBundle& b);

std::string_view to_string(StakeholderKind kind);
std::string_view to_string(Verb verb);
std::string_view to_string(CmpOp op);
std::string_view to_string(Decomposition d);
std::string_view to_string(NodeStatus s);
std::string_view to_string(Access a);
std::string to_string(const FieldKind& kind);
std::string format_time(TimeOfDay t);

}  // namespace fairadapt::model

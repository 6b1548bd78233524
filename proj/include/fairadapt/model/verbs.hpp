#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairadapt/model/types.hpp"

namespace fairadapt::model {

enum class ParamShape {
  InstanceOf,     // path whose kind is reference(type)
  IntLiteral,     // non-negative integer literal
  FieldTarget,    // path to a scalar field with at least one segment
  TargetLiteral,  // literal matching the kind of the FieldTarget parameter
};

struct ParamSpec {
  std::string_view name;
  ParamShape shape;
  std::string_view type;  // InstanceOf only
};

struct VerbSignature {
  Verb verb;
  std::string_view spelling;
  std::vector<ParamSpec> params;
  /// Type the verb mutates; empty for set_field (depends on its target).
  std::string_view mutates;
  /// remove_item and redirect_out make an instance unusable for later actions.
  bool invalidates;
};

const VerbSignature& signature(Verb verb);
std::optional<Verb> parse_verb(std::string_view spelling);

/// Type whose field `target` writes, i.e. the last type `target` dereferences.
std::string owner_type(const ResourceModel& model, const FieldPath& target);

/// Types an action must declare in `writes`.
IdSet required_writes(const ResourceModel& model, const ActionSpec& action);

}  // namespace fairadapt::model

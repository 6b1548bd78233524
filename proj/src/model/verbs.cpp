#include "fairadapt/model/verbs.hpp"

#include <array>

#include "fairadapt/model/queries.hpp"

namespace fairadapt::model {
namespace {

const std::array<VerbSignature, 6>& table() {
  static const std::array<VerbSignature, 6> verbs{{
      {Verb::RemoveItem, "remove_item", {{"order", ParamShape::InstanceOf, "Order"}}, "Order", true},
      {Verb::RedirectOut,
       "redirect_out",
       {{"shopper", ParamShape::InstanceOf, "Shopper"}},
       "Shopper",
       true},
      {Verb::CapBasket,
       "cap_basket",
       {{"order", ParamShape::InstanceOf, "Order"}, {"limit", ParamShape::IntLiteral, ""}},
       "Order",
       false},
      {Verb::ExemptItem,
       "exempt_item",
       {{"item", ParamShape::InstanceOf, "Item"}, {"order", ParamShape::InstanceOf, "Order"}},
       "Order",
       false},
      {Verb::SetField,
       "set_field",
       {{"target", ParamShape::FieldTarget, ""}, {"value", ParamShape::TargetLiteral, ""}},
       "",
       false},
      {Verb::BlockCheckout,
       "block_checkout",
       {{"order", ParamShape::InstanceOf, "Order"}},
       "Order",
       false},
  }};
  return verbs;
}

}  // namespace

const VerbSignature& signature(Verb verb) {
  for (const auto& v : table()) {
    if (v.verb == verb) return v;
  }
  return table().front();
}

std::optional<Verb> parse_verb(std::string_view spelling) {
  for (const auto& v : table()) {
    if (v.spelling == spelling) return v.verb;
  }
  return std::nullopt;
}

std::string owner_type(const ResourceModel& model, const FieldPath& target) {
  if (target.segments.size() <= 1) return target.root;
  FieldPath prefix{target.root, {target.segments.begin(), target.segments.end() - 1}};
  return resolve_collection_path(model, prefix).target;
}

IdSet required_writes(const ResourceModel& model, const ActionSpec& action) {
  const auto& sig = signature(action.verb);
  if (!sig.mutates.empty()) return {std::string(sig.mutates)};
  IdSet out;
  if (const auto* target = action.param("target")) {
    if (const auto* path = std::get_if<PathOperand>(target)) {
      out.insert(owner_type(model, path->path));
    }
  }
  return out;
}

}  // namespace fairadapt::model

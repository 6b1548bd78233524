#include "fairadapt/sim/actions.hpp"

#include <optional>

#include "fairadapt/model/queries.hpp"
#include "fairadapt/model/verbs.hpp"

namespace fairadapt::sim {
namespace {

using model::Verb;

std::optional<std::string> bound_instance(const World& world, const ActionInstance& a,
                                          std::string_view param) {
  const auto* operand = a.action.param(param);
  if (!operand) return std::nullopt;
  const auto* path = std::get_if<model::PathOperand>(operand);
  if (!path) return std::nullopt;
  try {
    auto v = evaluate_path(world, a.bindings, path->path);
    if (const auto* id = std::get_if<std::string>(&v)) return *id;
  } catch (const SimError&) {
  }
  return std::nullopt;
}

std::optional<std::string> binding(const ActionInstance& a, std::string_view type) {
  auto it = a.bindings.find(type);
  if (it == a.bindings.end()) return std::nullopt;
  return it->second;
}

ActionOutcome failed(const ActionInstance& a, std::string reason) {
  return {a.operation, a.action.verb, false, std::move(reason), {}};
}

bool order_live(const World& world, const std::string& order) {
  if (!world.contains({"Order", order})) return false;
  return std::get<std::string>(world.get({"Order", order}, "state")) != "closed";
}

bool exempted(const World& world, const std::string& order, const ActionInstance& a) {
  auto item = binding(a, "Item");
  return item && world.is_exempt(order, *item);
}

/// Instance owning the field a set_field target writes, plus the field name.
std::optional<std::pair<InstanceKey, std::string>> field_target(const World& world,
                                                                const ActionInstance& a) {
  const auto* operand = a.action.param("target");
  const auto* path = operand ? std::get_if<model::PathOperand>(operand) : nullptr;
  if (!path || path->path.segments.empty()) return std::nullopt;
  model::FieldPath prefix{path->path.root,
                          {path->path.segments.begin(), path->path.segments.end() - 1}};
  try {
    auto owner = evaluate_path(world, a.bindings, prefix);
    const auto* id = std::get_if<std::string>(&owner);
    if (!id) return std::nullopt;
    return std::pair{InstanceKey{model::owner_type(world.schema(), path->path), *id},
                     path->path.segments.back()};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

ActionOutcome apply_action(World& world, const ActionInstance& a, IterationScratch& scratch) {
  ActionOutcome out{a.operation, a.action.verb, true, {}, {}};
  switch (a.action.verb) {
    case Verb::RedirectOut: {
      auto shopper = bound_instance(world, a, "shopper");
      if (!shopper || !world.contains({"Shopper", *shopper})) return failed(a, "unbound_shopper");
      InstanceKey key{"Shopper", *shopper};
      if (std::get<std::string>(world.get(key, "status")) == "redirected") {
        return failed(a, "already_redirected");
      }
      world.set(key, "status", std::string("redirected"), &out.diff);
      return out;
    }
    case Verb::RemoveItem: {
      auto order = bound_instance(world, a, "order");
      if (!order || !order_live(world, *order)) return failed(a, "no_open_order");
      auto item = binding(a, "Item");
      if (!item) return failed(a, "no_item_binding");
      if (exempted(world, *order, a)) return failed(a, "exempt");
      const auto& items = std::get<std::vector<std::string>>(world.get({"Order", *order}, "items"));
      for (std::size_t i = items.size(); i-- > 0;) {
        if (items[i] != *item) continue;
        world.erase_element({"Order", *order}, "items", i, &out.diff);
        return out;
      }
      return failed(a, "item_not_in_order");
    }
    case Verb::CapBasket: {
      auto order = bound_instance(world, a, "order");
      if (!order || !order_live(world, *order)) return failed(a, "no_open_order");
      if (exempted(world, *order, a)) return failed(a, "exempt");
      const auto* limit_operand = a.action.param("limit");
      const auto* limit_literal = limit_operand ? std::get_if<model::Literal>(limit_operand) : nullptr;
      const auto* limit = limit_literal ? std::get_if<std::int64_t>(limit_literal) : nullptr;
      if (!limit) return failed(a, "bad_limit");
      InstanceKey key{"Order", *order};
      auto size = [&] { return std::get<std::vector<std::string>>(world.get(key, "items")).size(); };
      for (std::size_t i = size(); i-- > 0 && static_cast<std::int64_t>(size()) > *limit;) {
        const auto& items = std::get<std::vector<std::string>>(world.get(key, "items"));
        if (world.is_exempt(*order, items[i])) continue;
        world.erase_element(key, "items", i, &out.diff);
      }
      return out;
    }
    case Verb::ExemptItem: {
      auto order = bound_instance(world, a, "order");
      auto item = bound_instance(world, a, "item");
      if (!order || !order_live(world, *order)) return failed(a, "no_open_order");
      if (!item) return failed(a, "no_item_binding");
      if (!world.contains({"Item", *item})) return failed(a, "no_item_binding");
      if (!world.exempt(*order, *item, &out.diff)) return failed(a, "already_exempt");
      return out;
    }
    case Verb::BlockCheckout: {
      auto order = bound_instance(world, a, "order");
      if (!order || !order_live(world, *order)) return failed(a, "no_open_order");
      if (std::get<std::string>(world.get({"Order", *order}, "state")) != "checkout") {
        return failed(a, "no_pending_checkout");
      }
      if (exempted(world, *order, a)) return failed(a, "exempt");
      scratch.checkout_blocked = true;
      return out;
    }
    case Verb::SetField: {
      auto target = field_target(world, a);
      if (!target) return failed(a, "unbound_target");
      const auto* value = a.action.param("value");
      const auto* literal = value ? std::get_if<model::Literal>(value) : nullptr;
      if (!literal) return failed(a, "bad_value");
      world.set(target->first, target->second, to_value(*literal), &out.diff);
      return out;
    }
  }
  return failed(a, "unknown_verb");
}

ActionFootprint footprint(const World& world, const ActionInstance& a) {
  ActionFootprint fp;
  auto add_order = [&](std::set<InstanceKey>& into) {
    if (auto o = bound_instance(world, a, "order")) into.insert({"Order", *o});
  };
  auto add_item = [&](std::set<InstanceKey>& into) {
    if (auto i = binding(a, "Item")) into.insert({"Item", *i});
  };
  switch (a.action.verb) {
    case Verb::RemoveItem:
      add_order(fp.touches);
      add_item(fp.touches);
      add_item(fp.invalidates);
      break;
    case Verb::RedirectOut:
      if (auto s = bound_instance(world, a, "shopper")) {
        fp.touches.insert({"Shopper", *s});
        fp.invalidates.insert({"Shopper", *s});
        if (auto o = world.current_order(*s)) fp.invalidates.insert({"Order", *o});
      }
      break;
    case Verb::CapBasket:
      add_order(fp.touches);
      add_item(fp.touches);
      break;
    case Verb::ExemptItem:
      add_order(fp.touches);
      if (auto i = bound_instance(world, a, "item")) fp.touches.insert({"Item", *i});
      break;
    case Verb::BlockCheckout:
      add_order(fp.touches);
      break;
    case Verb::SetField:
      if (auto t = field_target(world, a)) fp.touches.insert(t->first);
      break;
  }
  return fp;
}

}  // namespace fairadapt::sim

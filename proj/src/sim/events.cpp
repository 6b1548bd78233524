#include "fairadapt/sim/events.hpp"

#include <array>

namespace fairadapt::sim {
namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 8> kKinds{{
    {EventKind::EnterSystem, "enter"},
    {EventKind::AddItem, "add_item"},
    {EventKind::RemoveItem, "remove_item"},
    {EventKind::Checkout, "checkout"},
    {EventKind::StockChange, "stock"},
    {EventKind::InjectRequirement, "inject_requirement"},
    {EventKind::RetireRequirement, "retire_requirement"},
    {EventKind::Tick, "tick"},
}};

InstanceKey shopper_key(const Event& e) { return {"Shopper", e.shopper}; }
InstanceKey item_key(const Event& e) { return {"Item", e.item}; }

bool redirected(const World& world, const std::string& shopper) {
  return std::get<std::string>(world.get({"Shopper", shopper}, "status")) == "redirected";
}

EventResult rejected(std::string reason, Bindings bindings, WorldDiff diff) {
  return {EventStatus::Rejected, std::move(reason), std::move(bindings), std::move(diff)};
}

}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& [k, s] : kKinds) {
    if (k == kind) return s;
  }
  return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view spelling) {
  for (const auto& [k, s] : kKinds) {
    if (s == spelling) return k;
  }
  return std::nullopt;
}

std::string_view to_string(EventStatus s) {
  switch (s) {
    case EventStatus::Applied: return "applied";
    case EventStatus::Rejected: return "rejected";
    case EventStatus::Forwarded: return "forwarded";
  }
  return "?";
}

World initial_world(std::shared_ptr<const model::ResourceModel> schema,
                    const std::vector<InstanceDecl>& instances) {
  World world = World::create(std::move(schema));
  for (const auto& decl : instances) {
    auto fields = decl.fields;
    if (decl.key.type == "Shopper") fields["status"] = std::string("active");
    world.create(decl.key, std::move(fields), nullptr);
  }
  return world;
}

EventResult stage_event(World& world, const Event& e) {
  EventResult result;
  world.set_clock(e.time, &result.diff);
  result.bindings.emplace("Clock", std::string(kClockId));

  switch (e.kind) {
    case EventKind::Tick:
      return result;
    case EventKind::InjectRequirement:
    case EventKind::RetireRequirement:
      result.status = EventStatus::Forwarded;
      return result;
    case EventKind::StockChange: {
      world.at(item_key(e));
      if (e.amount < 0) {
        throw SimError(SimErrorCode::NegativeStock,
                       "stock of '" + e.item + "' cannot be set to " + std::to_string(e.amount));
      }
      world.set(item_key(e), "stock", e.amount, &result.diff);
      result.bindings.emplace("Item", e.item);
      return result;
    }
    default:
      break;
  }

  world.at(shopper_key(e));
  if (e.kind == EventKind::AddItem || e.kind == EventKind::RemoveItem) world.at(item_key(e));

  if (e.kind == EventKind::EnterSystem) {
    world.set(shopper_key(e), "status", std::string("active"), &result.diff);
    auto order = world.current_order(e.shopper);
    if (!order) order = world.open_order(e.shopper, &result.diff);
    result.bindings.emplace("Shopper", e.shopper);
    result.bindings.emplace("Order", *order);
    return result;
  }

  if (redirected(world, e.shopper)) {
    return rejected("shopper_redirected", std::move(result.bindings), std::move(result.diff));
  }
  result.bindings.emplace("Shopper", e.shopper);
  auto order = world.current_order(e.shopper);

  switch (e.kind) {
    case EventKind::AddItem: {
      if (!order) order = world.open_order(e.shopper, &result.diff);
      world.insert_element({"Order", *order}, "items", e.item, &result.diff);
      result.bindings.emplace("Order", *order);
      result.bindings.emplace("Item", e.item);
      return result;
    }
    case EventKind::RemoveItem: {
      if (!order) {
        return rejected("no_open_order", std::move(result.bindings), std::move(result.diff));
      }
      result.bindings.emplace("Order", *order);
      const auto& items = std::get<std::vector<std::string>>(world.get({"Order", *order}, "items"));
      for (std::size_t i = items.size(); i-- > 0;) {
        if (items[i] != e.item) continue;
        world.erase_element({"Order", *order}, "items", i, &result.diff);
        result.bindings.emplace("Item", e.item);
        return result;
      }
      return rejected("item_not_in_order", std::move(result.bindings), std::move(result.diff));
    }
    case EventKind::Checkout: {
      if (!order) {
        return rejected("no_open_order", std::move(result.bindings), std::move(result.diff));
      }
      world.set({"Order", *order}, "state", std::string("checkout"), &result.diff);
      result.bindings.emplace("Order", *order);
      return result;
    }
    default:
      return result;
  }
}

WorldDiff commit_event(World& world, const Event& e, const EventResult& staged,
                       bool checkout_blocked) {
  WorldDiff diff;
  if (e.kind != EventKind::Checkout || staged.status != EventStatus::Applied) return diff;
  const InstanceKey order{"Order", staged.bindings.at("Order")};
  if (std::get<std::string>(world.get(order, "state")) != "checkout") return diff;

  bool settle = !checkout_blocked && !redirected(world, e.shopper);
  const auto items = std::get<std::vector<std::string>>(world.get(order, "items"));
  std::map<std::string, std::int64_t> demand;
  for (const auto& item : items) ++demand[item];
  for (const auto& [item, n] : demand) {
    if (std::get<std::int64_t>(world.get({"Item", item}, "stock")) < n) settle = false;
  }
  if (!settle) {
    world.set(order, "state", std::string("open"), &diff);
    return diff;
  }
  for (const auto& [item, n] : demand) {
    auto stock = std::get<std::int64_t>(world.get({"Item", item}, "stock"));
    world.set({"Item", item}, "stock", stock - n, &diff);
  }
  world.set(order, "state", std::string("closed"), &diff);
  return diff;
}

World apply_event(World world, const Event& event) {
  auto staged = stage_event(world, event);
  commit_event(world, event, staged, false);
  return world;
}

}  // namespace fairadapt::sim

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fairadapt/model/types.hpp"
#include "fairadapt/sim/world.hpp"

namespace fairadapt::sim {

enum class EventKind {
  EnterSystem,
  AddItem,
  RemoveItem,
  Checkout,
  StockChange,
  InjectRequirement,
  RetireRequirement,
  Tick,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view spelling);

/// Requirements added at runtime. Fragment roots are attached under
/// `parent` when it is non-empty, otherwise they become new roots.
struct Injection {
  std::string parent;
  model::ModelBundle fragment;
};

struct Event {
  DayTime time;
  EventKind kind = EventKind::Tick;
  std::string shopper;
  std::string item;
  std::string requirement;  // RetireRequirement
  std::int64_t amount = 0;  // StockChange
  std::shared_ptr<const Injection> injection;
  SourceSpan span;
};

/// Initial instance declared by a scenario.
struct InstanceDecl {
  InstanceKey key;
  std::map<std::string, Value, std::less<>> fields;
  SourceSpan span;
};

struct EventTimeline {
  std::vector<InstanceDecl> instances;
  std::vector<Event> events;
};

/// Builds the initial world for a scenario. Throws SimError.
World initial_world(std::shared_ptr<const model::ResourceModel> schema,
                    const std::vector<InstanceDecl>& instances);

enum class EventStatus { Applied, Rejected, Forwarded };

std::string_view to_string(EventStatus s);

struct EventResult {
  EventStatus status = EventStatus::Applied;
  std::string reason;
  /// Instances the engine may bind rules against; Clock is always bound.
  Bindings bindings;
  WorldDiff diff;
};

/// First half of event application, run before the adaptation loop sees the
/// event: moves the clock, appends items, marks a checkout as pending.
/// Inject/Retire/Tick only move the clock. Throws UnknownInstance or
/// NegativeStock; a redirected shopper's AddItem/RemoveItem/Checkout is
/// Rejected without touching the world.
EventResult stage_event(World& world, const Event& event);

/// Second half: settles a pending checkout (stock decremented and order
/// closed unless blocked, out of stock or the shopper was redirected).
WorldDiff commit_event(World& world, const Event& event, const EventResult& staged,
                       bool checkout_blocked);

/// stage_event followed by commit_event.
World apply_event(World world, const Event& event);

}  // namespace fairadapt::sim

#include "fairadapt/sim/world.hpp"

#include <algorithm>
#include <array>

namespace fairadapt::sim {
namespace {

using model::FieldKind;
using model::KindTag;

constexpr std::array<std::string_view, 7> kDays{"mon", "tue", "wed", "thu", "fri", "sat", "sun"};

[[noreturn]] void fail(SimErrorCode code, const std::string& message) {
  throw SimError(code, message);
}

void require_field(const model::ResourceModel& schema, std::string_view type,
                   std::string_view field, KindTag tag, std::string_view target = {},
                   std::vector<std::string_view> enum_values = {}) {
  auto it = schema.find(type);
  if (it == schema.end()) {
    fail(SimErrorCode::SchemaMismatch, "resource model lacks type '" + std::string(type) + "'");
  }
  const auto* f = it->second.find(field);
  std::string where = std::string(type) + "." + std::string(field);
  if (!f || f->kind.tag != tag || (!target.empty() && f->kind.target != target)) {
    fail(SimErrorCode::SchemaMismatch, "resource model lacks field " + where);
  }
  for (auto v : enum_values) {
    if (std::find(f->kind.enum_values.begin(), f->kind.enum_values.end(), v) ==
        f->kind.enum_values.end()) {
      fail(SimErrorCode::SchemaMismatch, where + " lacks enum value '" + std::string(v) + "'");
    }
  }
}

Value default_value(const FieldKind& kind) {
  switch (kind.tag) {
    case KindTag::Integer:
    case KindTag::Time: return std::int64_t{0};
    case KindTag::Boolean: return false;
    case KindTag::Text: return std::string{};
    case KindTag::Enum: return kind.enum_values.empty() ? std::string{} : kind.enum_values.front();
    case KindTag::Reference: return std::monostate{};
    case KindTag::SetOf: return std::vector<std::string>{};
  }
  return std::monostate{};
}

std::string key_str(const InstanceKey& k) { return k.type + " '" + k.id + "'"; }

}  // namespace

std::string_view to_string(Day day) { return kDays[static_cast<std::size_t>(day)]; }

std::optional<Day> parse_day(std::string_view text) {
  for (std::size_t i = 0; i < kDays.size(); ++i) {
    if (kDays[i] == text) return static_cast<Day>(i);
  }
  return std::nullopt;
}

std::string to_string(DayTime t) {
  return std::string(to_string(t.day)) + " " + model::format_time(model::TimeOfDay{t.minutes});
}

std::string to_string(const Value& v) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "none"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const std::vector<std::string>& xs) const {
      std::string out = "[";
      for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i];
      return out + "]";
    }
  };
  return std::visit(Visitor{}, v);
}

std::string_view to_string(DiffOp op) {
  switch (op) {
    case DiffOp::Set: return "set";
    case DiffOp::Insert: return "insert";
    case DiffOp::Erase: return "erase";
    case DiffOp::Create: return "create";
    case DiffOp::Delete: return "delete";
    case DiffOp::Exempt: return "exempt";
  }
  return "?";
}

std::string_view to_string(SimErrorCode code) {
  switch (code) {
    case SimErrorCode::UnknownInstance: return "UnknownInstance";
    case SimErrorCode::NegativeStock: return "NegativeStock";
    case SimErrorCode::SchemaMismatch: return "SchemaMismatch";
    case SimErrorCode::InvalidInstance: return "InvalidInstance";
    case SimErrorCode::UnboundRoot: return "UnboundRoot";
  }
  return "?";
}

World World::create(std::shared_ptr<const model::ResourceModel> schema) {
  const auto& s = *schema;
  require_field(s, "Clock", "day", KindTag::Enum, {},
                {kDays.begin(), kDays.end()});
  require_field(s, "Clock", "time", KindTag::Time);
  require_field(s, "Shopper", "age", KindTag::Integer);
  require_field(s, "Shopper", "status", KindTag::Enum, {}, {"active", "redirected"});
  require_field(s, "Item", "category", KindTag::Enum);
  require_field(s, "Item", "stock", KindTag::Integer);
  require_field(s, "Order", "owner", KindTag::Reference, "Shopper");
  require_field(s, "Order", "items", KindTag::SetOf, "Item");
  require_field(s, "Order", "state", KindTag::Enum, {}, {"open", "checkout", "closed"});

  World world(std::move(schema));
  world.create({"Clock", std::string(kClockId)},
               {{"day", std::string("mon")}, {"time", std::int64_t{0}}}, nullptr);
  return world;
}

DayTime World::clock() const {
  const auto& c = at({"Clock", std::string(kClockId)});
  auto day = parse_day(std::get<std::string>(c.fields.at("day")));
  return {day.value_or(Day::Mon), static_cast<int>(std::get<std::int64_t>(c.fields.at("time")))};
}

void World::set_clock(DayTime t, WorldDiff* diff) {
  const InstanceKey key{"Clock", std::string(kClockId)};
  set(key, "day", std::string(to_string(t.day)), diff);
  set(key, "time", std::int64_t{t.minutes}, diff);
}

const Instance& World::at(const InstanceKey& key) const {
  auto it = instances_.find(key);
  if (it == instances_.end()) fail(SimErrorCode::UnknownInstance, "unknown instance " + key_str(key));
  return it->second;
}

Instance& World::mutable_at(const InstanceKey& key) {
  auto it = instances_.find(key);
  if (it == instances_.end()) fail(SimErrorCode::UnknownInstance, "unknown instance " + key_str(key));
  return it->second;
}

const Value& World::get(const InstanceKey& key, std::string_view field) const {
  const auto& inst = at(key);
  auto it = inst.fields.find(field);
  if (it == inst.fields.end()) {
    fail(SimErrorCode::InvalidInstance, key_str(key) + " has no field '" + std::string(field) + "'");
  }
  return it->second;
}

void World::set(const InstanceKey& key, std::string_view field, Value value, WorldDiff* diff) {
  auto& inst = mutable_at(key);
  auto it = inst.fields.find(field);
  if (it == inst.fields.end()) {
    fail(SimErrorCode::InvalidInstance, key_str(key) + " has no field '" + std::string(field) + "'");
  }
  if (it->second == value) return;
  if (diff) diff->push_back({DiffOp::Set, key, std::string(field), it->second, value});
  it->second = std::move(value);
}

void World::insert_element(const InstanceKey& key, std::string_view field, std::string element,
                           WorldDiff* diff) {
  auto& inst = mutable_at(key);
  auto& list = std::get<std::vector<std::string>>(inst.fields.at(std::string(field)));
  list.push_back(element);
  if (diff) diff->push_back({DiffOp::Insert, key, std::string(field), {}, std::move(element)});
}

void World::erase_element(const InstanceKey& key, std::string_view field, std::size_t index,
                          WorldDiff* diff) {
  auto& inst = mutable_at(key);
  auto& list = std::get<std::vector<std::string>>(inst.fields.at(std::string(field)));
  std::string element = list.at(index);
  list.erase(list.begin() + static_cast<std::ptrdiff_t>(index));
  if (diff) diff->push_back({DiffOp::Erase, key, std::string(field), std::move(element), {}});
}

void World::create(const InstanceKey& key, std::map<std::string, Value, std::less<>> fields,
                   WorldDiff* diff) {
  auto type = schema_->find(key.type);
  if (type == schema_->end()) {
    fail(SimErrorCode::InvalidInstance, "unknown resource type '" + key.type + "'");
  }
  if (instances_.contains(key)) fail(SimErrorCode::InvalidInstance, "duplicate instance " + key_str(key));
  Instance inst;
  for (const auto& f : type->second.fields) inst.fields[f.name] = default_value(f.kind);
  for (auto& [name, value] : fields) {
    if (!inst.fields.contains(name)) {
      fail(SimErrorCode::InvalidInstance, key_str(key) + " has no field '" + name + "'");
    }
    inst.fields[name] = std::move(value);
  }
  instances_.emplace(key, std::move(inst));
  if (diff) diff->push_back({DiffOp::Create, key, {}, {}, {}});
}

std::optional<std::string> World::current_order(std::string_view shopper) const {
  std::optional<std::string> found;
  for (auto it = instances_.lower_bound({"Order", ""});
       it != instances_.end() && it->first.type == "Order"; ++it) {
    const auto& f = it->second.fields;
    const auto* owner = std::get_if<std::string>(&f.at("owner"));
    const auto& state = std::get<std::string>(f.at("state"));
    if (owner && *owner == shopper && state != "closed") found = it->first.id;
  }
  return found;
}

std::string World::open_order(std::string_view shopper, WorldDiff* diff) {
  int n = 1;
  for (auto it = instances_.lower_bound({"Order", ""});
       it != instances_.end() && it->first.type == "Order"; ++it) {
    const auto* owner = std::get_if<std::string>(&it->second.fields.at("owner"));
    if (owner && *owner == shopper) ++n;
  }
  std::string id = std::string(shopper) + "_o" + std::to_string(n);
  create({"Order", id},
         {{"owner", std::string(shopper)}, {"state", std::string("open")},
          {"items", std::vector<std::string>{}}},
         diff);
  return id;
}

Value evaluate_path(const World& world, const Bindings& bindings, const model::FieldPath& path) {
  auto bound = bindings.find(path.root);
  if (bound == bindings.end()) {
    fail(SimErrorCode::UnboundRoot, "no instance of '" + path.root + "' is bound");
  }
  InstanceKey key{path.root, bound->second};
  Value value = key.id;
  world.at(key);
  for (std::size_t i = 0; i < path.segments.size(); ++i) {
    value = world.get(key, path.segments[i]);
    if (i + 1 == path.segments.size()) break;
    const auto* field = world.schema().at(key.type).find(path.segments[i]);
    const auto* next = std::get_if<std::string>(&value);
    if (!next) fail(SimErrorCode::UnknownInstance, "dangling reference in " + path.str());
    key = InstanceKey{field->kind.target, *next};
    world.at(key);
  }
  return value;
}

Value to_value(const model::Literal& literal) {
  struct Visitor {
    Value operator()(std::int64_t i) const { return i; }
    Value operator()(bool b) const { return b; }
    Value operator()(const std::string& s) const { return s; }
    Value operator()(const model::Symbol& s) const { return s.name; }
    Value operator()(model::TimeOfDay t) const { return std::int64_t{t.minutes}; }
  };
  return std::visit(Visitor{}, literal);
}

bool World::is_exempt(std::string_view order, std::string_view item) const {
  return exemptions_.contains({std::string(order), std::string(item)});
}

bool World::exempt(const std::string& order, const std::string& item, WorldDiff* diff) {
  if (!contains({"Order", order})) fail(SimErrorCode::UnknownInstance, "unknown instance Order " + order);
  if (!contains({"Item", item})) fail(SimErrorCode::UnknownInstance, "unknown instance Item " + item);
  if (!exemptions_.emplace(order, item).second) return false;
  if (diff) diff->push_back({DiffOp::Exempt, {"Order", order}, "items", {}, item});
  return true;
}

std::vector<std::string> validate_world(const World& world) {
  std::vector<std::string> problems;
  for (const auto& [order, item] : world.exemptions()) {
    if (!world.contains({"Order", order}) || !world.contains({"Item", item})) {
      problems.push_back("exemption " + order + "/" + item + " refers to a missing instance");
    }
  }
  for (const auto& [key, inst] : world.instances()) {
    const auto& type = world.schema().at(key.type);
    for (const auto& f : type.fields) {
      const auto& v = inst.fields.at(f.name);
      if (f.kind.tag == KindTag::Reference) {
        const auto* id = std::get_if<std::string>(&v);
        if (id && !world.contains({f.kind.target, *id})) {
          problems.push_back(key_str(key) + "." + f.name + " points to missing " + *id);
        }
      } else if (f.kind.tag == KindTag::SetOf) {
        for (const auto& id : std::get<std::vector<std::string>>(v)) {
          if (!world.contains({f.kind.target, id})) {
            problems.push_back(key_str(key) + "." + f.name + " contains missing " + id);
          }
        }
      }
    }
    if (key.type == "Item" && std::get<std::int64_t>(inst.fields.at("stock")) < 0) {
      problems.push_back(key_str(key) + " has negative stock");
    }
    if (key.type == "Order" && std::holds_alternative<std::monostate>(inst.fields.at("owner"))) {
      problems.push_back(key_str(key) + " has no owner");
    }
  }
  return problems;
}

}  // namespace fairadapt::sim

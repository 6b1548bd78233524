#pragma once

// Supermarket world state: typed instances of the resource schema plus the
// clock. Shoppers, items and orders follow a fixed minimal schema that the
// model's resource declarations must provide (see World::create).

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fairadapt/model/types.hpp"

namespace fairadapt::sim {

enum class Day { Mon, Tue, Wed, Thu, Fri, Sat, Sun };

std::string_view to_string(Day day);
std::optional<Day> parse_day(std::string_view text);

struct DayTime {
  Day day = Day::Mon;
  int minutes = 0;

  auto operator<=>(const DayTime&) const = default;
};

std::string to_string(DayTime t);

/// Field value. Integers and times are int64 (times in minutes), enum
/// values, references and text are strings, sets are id lists in insertion
/// order (newest last).
using Value = std::variant<std::monostate, std::int64_t, bool, std::string, std::vector<std::string>>;

std::string to_string(const Value& v);

struct InstanceKey {
  std::string type;
  std::string id;

  auto operator<=>(const InstanceKey&) const = default;
};

struct Instance {
  std::map<std::string, Value, std::less<>> fields;

  bool operator==(const Instance&) const = default;
};

enum class DiffOp { Set, Insert, Erase, Create, Delete, Exempt };

std::string_view to_string(DiffOp op);

/// One world mutation. Insert/Erase carry the element in `new_value` /
/// `old_value`; Create/Delete leave both empty.
struct DiffEntry {
  DiffOp op = DiffOp::Set;
  InstanceKey instance;
  std::string field;
  Value old_value;
  Value new_value;

  bool operator==(const DiffEntry&) const = default;
};

using WorldDiff = std::vector<DiffEntry>;

enum class SimErrorCode { UnknownInstance, NegativeStock, SchemaMismatch, InvalidInstance, UnboundRoot };

std::string_view to_string(SimErrorCode code);

class SimError : public std::runtime_error {
 public:
  SimError(SimErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  SimErrorCode code() const noexcept { return code_; }

 private:
  SimErrorCode code_;
};

/// Instance bindings of one event: resource type -> instance id.
using Bindings = std::map<std::string, std::string, std::less<>>;

inline constexpr std::string_view kClockId = "clock";

class World {
 public:
  /// Checks that `schema` declares Clock{day, time}, Shopper{age, status},
  /// Item{category, stock} and Order{owner, items, state} with the expected
  /// kinds, then creates the clock at mon 00:00. Throws SchemaMismatch.
  static World create(std::shared_ptr<const model::ResourceModel> schema);

  const model::ResourceModel& schema() const { return *schema_; }
  const std::map<InstanceKey, Instance>& instances() const { return instances_; }

  DayTime clock() const;
  void set_clock(DayTime t, WorldDiff* diff);

  bool contains(const InstanceKey& key) const { return instances_.contains(key); }
  /// Throws UnknownInstance.
  const Instance& at(const InstanceKey& key) const;
  const Value& get(const InstanceKey& key, std::string_view field) const;
  void set(const InstanceKey& key, std::string_view field, Value value, WorldDiff* diff);
  void insert_element(const InstanceKey& key, std::string_view field, std::string element,
                      WorldDiff* diff);
  /// Removes the element at `index` of a set field.
  void erase_element(const InstanceKey& key, std::string_view field, std::size_t index,
                     WorldDiff* diff);

  /// Creates an instance with schema defaults overridden by `fields`.
  /// Throws InvalidInstance for unknown fields or duplicate ids.
  void create(const InstanceKey& key, std::map<std::string, Value, std::less<>> fields,
              WorldDiff* diff);

  /// Open (or checking-out) order of a shopper, if any.
  std::optional<std::string> current_order(std::string_view shopper) const;
  /// Opens a fresh order `<shopper>_o<n>`.
  std::string open_order(std::string_view shopper, WorldDiff* diff);

  /// Order lines that capping and removal must leave alone. Kept for the
  /// lifetime of the order.
  using Exemptions = std::set<std::pair<std::string, std::string>>;
  const Exemptions& exemptions() const { return exemptions_; }
  bool is_exempt(std::string_view order, std::string_view item) const;
  /// Records the exemption; false when it already existed.
  bool exempt(const std::string& order, const std::string& item, WorldDiff* diff);

  bool operator==(const World& other) const {
    return instances_ == other.instances_ && exemptions_ == other.exemptions_;
  }

 private:
  explicit World(std::shared_ptr<const model::ResourceModel> schema) : schema_(std::move(schema)) {}
  Instance& mutable_at(const InstanceKey& key);

  std::shared_ptr<const model::ResourceModel> schema_;
  std::map<InstanceKey, Instance> instances_;
  Exemptions exemptions_;
};

/// Value of a path under the given bindings. A path without segments yields
/// the bound instance id. Throws UnboundRoot or UnknownInstance.
Value evaluate_path(const World& world, const Bindings& bindings, const model::FieldPath& path);

/// Converts a literal to the world's value representation.
Value to_value(const model::Literal& literal);

/// Referential integrity and stock checks; empty when the world is sound.
std::vector<std::string> validate_world(const World& world);

}  // namespace fairadapt::sim

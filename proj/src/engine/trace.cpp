#include "fairadapt/engine/trace.hpp"

#include "fairadapt/dsl/parser.hpp"
#include "fairadapt/dsl/serializer.hpp"
#include "fairadapt/model/invariants.hpp"

namespace fairadapt::engine {
namespace {

template <typename Range>
Json array(const Range& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(x);
  return out;
}

Json bindings_json(const sim::Bindings& b) {
  Json out = Json::object();
  for (const auto& [type, id] : b) out[type] = id;
  return out;
}

Json diff_json(const sim::WorldDiff& diff) {
  Json out = Json::array();
  for (const auto& d : diff) out.push_back(to_json(d));
  return out;
}

Json outcome_json(const sim::ActionOutcome& o) {
  Json j;
  j["operation"] = o.operation;
  j["verb"] = model::to_string(o.verb);
  j["status"] = o.applied ? "applied" : "failed";
  if (!o.applied) j["reason"] = o.reason;
  j["diff"] = diff_json(o.diff);
  return j;
}

}  // namespace

Json to_json(const sim::Value& v) {
  struct Visitor {
    Json operator()(std::monostate) const { return nullptr; }
    Json operator()(std::int64_t i) const { return i; }
    Json operator()(bool b) const { return b; }
    Json operator()(const std::string& s) const { return s; }
    Json operator()(const std::vector<std::string>& xs) const { return array(xs); }
  };
  return std::visit(Visitor{}, v);
}

Json to_json(const sim::DiffEntry& d) {
  Json j;
  j["op"] = sim::to_string(d.op);
  j["type"] = d.instance.type;
  j["id"] = d.instance.id;
  switch (d.op) {
    case sim::DiffOp::Set:
      j["field"] = d.field;
      j["old"] = to_json(d.old_value);
      j["new"] = to_json(d.new_value);
      break;
    case sim::DiffOp::Insert:
    case sim::DiffOp::Exempt:
      j["field"] = d.field;
      j["element"] = to_json(d.new_value);
      break;
    case sim::DiffOp::Erase:
      j["field"] = d.field;
      j["element"] = to_json(d.old_value);
      break;
    default:
      break;
  }
  return j;
}

Json to_json(const sim::Event& e) {
  Json j;
  j["kind"] = sim::to_string(e.kind);
  switch (e.kind) {
    case sim::EventKind::EnterSystem:
    case sim::EventKind::Checkout:
      j["shopper"] = e.shopper;
      break;
    case sim::EventKind::AddItem:
    case sim::EventKind::RemoveItem:
      j["shopper"] = e.shopper;
      j["item"] = e.item;
      break;
    case sim::EventKind::StockChange:
      j["item"] = e.item;
      j["value"] = e.amount;
      break;
    case sim::EventKind::RetireRequirement:
      j["id"] = e.requirement;
      break;
    case sim::EventKind::InjectRequirement:
      if (e.injection) {
        j["parent"] = e.injection->parent;
        j["requirements"] = array(model::Forest(e.injection->fragment).roots());
        j["model"] = dsl::serialize(e.injection->fragment);
      }
      break;
    case sim::EventKind::Tick:
      break;
  }
  return j;
}

Json to_json(const ConflictEdge& e) {
  Json j;
  j["a"] = e.a;
  j["b"] = e.b;
  j["shared"] = array(e.shared);
  j["overlap"] = array(e.overlap);
  j["severity"] = to_string(e.severity);
  j["relation"] = model::to_string(e.relation);
  return j;
}

Json to_json(const Plan& p) {
  Json j;
  j["target"] = p.target;
  j["chosen"] = array(p.chosen);
  Json rejected = Json::array();
  for (const auto& r : p.rejected) {
    rejected.push_back(Json{{"operation", r.operation}, {"score", r.score}, {"reason", r.reason}});
  }
  j["rejected"] = std::move(rejected);
  Json scores = Json::object();
  for (const auto& [op, s] : p.scores) scores[op] = s;
  j["scores"] = std::move(scores);
  Json choices = Json::array();
  for (const auto& c : p.choices) {
    choices.push_back(Json{{"node", c.node}, {"options", array(c.options)}, {"chosen", c.chosen}});
  }
  j["choices"] = std::move(choices);
  return j;
}

Json to_json(const TraceRecord& r) {
  Json j;
  j["iteration"] = r.iteration;
  j["time"] = Json{{"day", sim::to_string(r.event.time.day)}, {"minute", r.event.time.minutes}};
  j["event"] = to_json(r.event);
  j["event_status"] = sim::to_string(r.event_status);
  if (!r.event_reason.empty()) j["event_reason"] = r.event_reason;
  j["model_version"] = r.model_version;

  Json evals = Json::array();
  for (const auto& e : r.evaluations) {
    Json ej{{"operation", e.operation}, {"result", e.result}, {"bindings", bindings_json(e.bindings)}};
    if (!e.error.empty()) ej["error"] = e.error;
    evals.push_back(std::move(ej));
  }
  j["evaluations"] = std::move(evals);
  j["unbound"] = array(r.unbound);

  Json reqs = Json::object();
  for (const auto& [id, s] : r.requirements) {
    reqs[id] = Json{{"status", model::to_string(s.status)},
                    {"pre_status", model::to_string(s.pre_status)},
                    {"priority", s.priority},
                    {"operations", array(s.operations)}};
  }
  j["requirements"] = std::move(reqs);

  Json conflicts = Json::array();
  for (const auto& c : r.conflicts) conflicts.push_back(to_json(c));
  j["conflicts"] = std::move(conflicts);

  Json explained = Json::object();
  for (const auto& [f, why] : r.explained) {
    Json list = Json::array();
    for (const auto& w : why) {
      list.push_back(Json{{"by", w.by}, {"priority", w.priority}, {"shared", array(w.shared)}});
    }
    explained[f] = std::move(list);
  }
  j["explained"] = std::move(explained);
  j["targets"] = array(r.targets);

  Json plans = Json::array();
  for (const auto& p : r.plans) plans.push_back(to_json(p));
  j["plans"] = std::move(plans);

  Json suppressed = Json::array();
  for (const auto& s : r.suppressed) {
    suppressed.push_back(Json{{"operation", s.operation}, {"kept", s.kept}, {"reason", s.reason}});
  }
  j["suppressed"] = std::move(suppressed);

  Json executed = Json::array();
  for (const auto& o : r.executed) executed.push_back(outcome_json(o));
  j["executed"] = std::move(executed);
  j["unresolved"] = array(r.unresolved);
  j["world_diff"] = diff_json(r.world_diff);
  j["errors"] = array(r.errors);
  return j;
}

std::string to_ndjson(const AdaptationTrace& trace) {
  std::string out;
  for (const auto& r : trace) out += to_json(r).dump() + "\n";
  return out;
}

std::string world_to_ndjson(const sim::World& world) {
  std::string out;
  for (const auto& [key, inst] : world.instances()) {
    Json fields = Json::object();
    for (const auto& [name, v] : inst.fields) fields[name] = to_json(v);
    out += Json{{"type", key.type}, {"id", key.id}, {"fields", std::move(fields)}}.dump() + "\n";
  }
  for (const auto& [order, item] : world.exemptions()) {
    out += Json{{"type", "Exemption"}, {"order", order}, {"item", item}}.dump() + "\n";
  }
  return out;
}

dsl::ParseResult<std::vector<sim::Event>> events_from_trace(const std::vector<Json>& records,
                                                            const model::ModelBundle& base) {
  dsl::ParseResult<std::vector<sim::Event>> out;
  std::vector<sim::Event> events;
  model::ModelBundle current = base;
  for (const auto& r : records) {
    sim::Event e;
    auto day = sim::parse_day(r.at("time").at("day").get<std::string>());
    e.time = {day.value_or(sim::Day::Mon), r.at("time").at("minute").get<int>()};
    const auto& ev = r.at("event");
    auto kind = sim::parse_event_kind(ev.at("kind").get<std::string>());
    if (!kind) {
      out.diagnostics.push_back({dsl::Severity::Error, "E013", "unknown event in trace", {}});
      return out;
    }
    e.kind = *kind;
    e.shopper = ev.value("shopper", "");
    e.item = ev.value("item", "");
    e.amount = ev.value("value", std::int64_t{0});
    e.requirement = ev.value("id", "");
    if (e.kind == sim::EventKind::InjectRequirement && ev.contains("model")) {
      auto parent = ev.value("parent", "");
      auto fragment = dsl::parse_injection(ev.at("model").get<std::string>(), current, parent,
                                           "<trace:" + std::to_string(events.size()) + ">");
      if (!fragment.ok()) {
        out.diagnostics = std::move(fragment.diagnostics);
        return out;
      }
      current = model::inject(current, *fragment.value, parent);
      e.injection = std::make_shared<sim::Injection>(sim::Injection{parent, std::move(*fragment.value)});
    } else if (e.kind == sim::EventKind::RetireRequirement && current.requirements.contains(e.requirement)) {
      current = model::retire(current, e.requirement);
    }
    events.push_back(std::move(e));
  }
  out.value = std::move(events);
  return out;
}

}  // namespace fairadapt::engine

#include "fairadapt/cli/commands.hpp"

#include <fstream>
#include <sstream>

#include "fairadapt/dsl/parser.hpp"
#include "fairadapt/engine/conflicts.hpp"
#include "fairadapt/engine/loop.hpp"
#include "fairadapt/engine/trace.hpp"
#include "fairadapt/sim/events.hpp"

namespace fairadapt::cli {
namespace {

using engine::Json;

std::optional<std::string> read_file(const std::string& path, const Output& o) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    o.err << "fairadapt: cannot read '" << path << "'\n";
    return std::nullopt;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    o.err << "fairadapt: error while reading '" << path << "'\n";
    return std::nullopt;
  }
  return ss.str();
}

bool write_file(const std::string& path, const std::string& text, const Output& o) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (out) out << text;
  if (!out) {
    o.err << "fairadapt: cannot write '" << path << "'\n";
    return false;
  }
  return true;
}

std::string paint(const Output& o, const char* code, const std::string& text) {
  if (!o.color) return text;
  return std::string("\x1b[") + code + "m" + text + "\x1b[0m";
}

void print_diagnostics(const std::vector<dsl::Diagnostic>& diags, const Output& o) {
  for (const auto& d : diags) {
    if (o.format == Format::Ndjson) {
      Json j{{"severity", d.severity == dsl::Severity::Error ? "error" : "warning"},
             {"code", d.code},
             {"message", d.message},
             {"file", d.span.file},
             {"line", d.span.line},
             {"column", d.span.column},
             {"length", d.span.length}};
      o.out << j.dump() << "\n";
    } else {
      auto line = dsl::format(d);
      o.out << (d.severity == dsl::Severity::Error ? paint(o, "31", line) : paint(o, "33", line)) << "\n";
    }
  }
}

/// Reads and parses a model; returns the exit code on failure.
std::variant<model::ModelBundle, int> load_model(const std::string& path, const Output& o) {
  auto text = read_file(path, o);
  if (!text) return 2;
  auto parsed = dsl::parse_model(*text, path);
  print_diagnostics(parsed.diagnostics, o);
  if (!parsed.ok()) return 1;
  return std::move(*parsed.value);
}

std::string braces(const model::IdSet& ids) {
  std::string out = "{";
  for (const auto& id : ids) out += (out.size() > 1 ? ", " : "") + id;
  return out + "}";
}

std::string list(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) out += (out.empty() ? "" : ", ") + id;
  return out;
}

std::string event_line(const Json& ev) {
  std::string out = ev.at("kind").get<std::string>();
  for (const auto& [k, v] : ev.items()) {
    if (k == "kind" || k == "model" || k == "requirements") continue;
    if (k == "parent" && v.get<std::string>().empty()) continue;
    out += " " + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
  }
  if (ev.contains("requirements")) {
    out += " [";
    for (std::size_t i = 0; i < ev["requirements"].size(); ++i) {
      out += (i ? ", " : "") + ev["requirements"][i].get<std::string>();
    }
    out += "]";
  }
  return out;
}

std::string when(const Json& r) {
  return r.at("time").at("day").get<std::string>() + " " +
         model::format_time(model::TimeOfDay{r.at("time").at("minute").get<int>()});
}

void summarize(const Json& r, const Output& o) {
  o.out << "#" << r["iteration"].get<std::size_t>() << " " << when(r) << " " << event_line(r["event"]);
  if (r["event_status"] != "applied") {
    o.out << " (" << r["event_status"].get<std::string>();
    if (r.contains("event_reason")) o.out << ": " << r["event_reason"].get<std::string>();
    o.out << ")";
  }
  o.out << "\n";

  std::vector<std::string> triggered, violated, explained;
  for (const auto& [id, s] : r["requirements"].items()) {
    if (s["pre_status"] == "VIOLATED") triggered.push_back(id);
    if (s["status"] == "VIOLATED") violated.push_back(id);
    if (s["status"] == "CONFLICT_EXPLAINED") explained.push_back(id);
  }
  if (!triggered.empty()) o.out << "  triggered: " << list(triggered) << "\n";
  for (const auto& p : r["plans"]) {
    o.out << "  plan " << p["target"].get<std::string>() << ": "
          << list(p["chosen"].get<std::vector<std::string>>());
    std::vector<std::string> rejected;
    for (const auto& x : p["rejected"]) {
      rejected.push_back(x["operation"].get<std::string>() + " score " + std::to_string(x["score"].get<int>()));
    }
    if (!rejected.empty()) o.out << " (rejected " << list(rejected) << ")";
    o.out << "\n";
  }
  for (const auto& s : r["suppressed"]) {
    o.out << "  suppressed " << s["operation"].get<std::string>() << " in favour of "
          << s["kept"].get<std::string>() << "\n";
  }
  if (!r["executed"].empty()) {
    std::vector<std::string> done;
    for (const auto& x : r["executed"]) {
      std::string s = x["operation"].get<std::string>() + " " + x["status"].get<std::string>();
      if (x.contains("reason")) s += " (" + x["reason"].get<std::string>() + ")";
      done.push_back(s);
    }
    o.out << "  executed: " << list(done) << "\n";
  }
  if (!violated.empty()) o.out << "  violated: " << paint(o, "31", list(violated)) << "\n";
  if (!explained.empty()) o.out << "  conflict-explained: " << paint(o, "33", list(explained)) << "\n";
  if (!r["unresolved"].empty()) {
    o.out << "  unresolved: " << list(r["unresolved"].get<std::vector<std::string>>()) << "\n";
  }
  for (const auto& e : r["errors"]) o.out << "  error: " << e.get<std::string>() << "\n";
}

}  // namespace

int cmd_validate(const std::string& model_path, const Output& o) {
  auto loaded = load_model(model_path, o);
  if (const int* code = std::get_if<int>(&loaded)) return *code;
  return 0;
}

int cmd_analyze(const std::string& model_path, const Output& o) {
  auto loaded = load_model(model_path, o);
  if (const int* code = std::get_if<int>(&loaded)) return *code;
  const auto& bundle = std::get<model::ModelBundle>(loaded);
  auto edges = engine::detect_conflicts(bundle);
  for (const auto& e : edges) {
    if (o.format == Format::Ndjson) {
      auto j = engine::to_json(e);
      Json evidence = Json::array();
      for (const auto& ev : e.evidence) evidence.push_back(Json::array({ev.op_a, ev.op_b, ev.resource}));
      j["evidence"] = std::move(evidence);
      o.out << j.dump() << "\n";
    } else {
      std::string sev(engine::to_string(e.severity));
      o.out << e.a << " -- " << e.b << "  "
            << paint(o, e.severity == engine::Severity::Likely ? "31" : "2", sev)
            << "  shared=" << braces(e.shared) << "  overlap=" << braces(e.overlap) << "  ("
            << model::to_string(e.relation) << ")\n";
    }
  }
  if (o.format == Format::Human) o.out << edges.size() << " conflict edge(s)\n";
  return 0;
}

int cmd_run(const RunOptions& options, const Output& o) {
  auto loaded = load_model(options.model_path, o);
  if (const int* code = std::get_if<int>(&loaded)) return *code;
  auto bundle = std::move(std::get<model::ModelBundle>(loaded));

  auto text = read_file(options.scenario_path, o);
  if (!text) return 2;
  auto timeline = dsl::parse_scenario(*text, bundle, options.scenario_path);
  print_diagnostics(timeline.diagnostics, o);
  if (!timeline.ok()) return 1;

  std::optional<engine::RunResult> result;
  try {
    auto schema = std::make_shared<const model::ResourceModel>(bundle.resources);
    auto world = sim::initial_world(schema, timeline.value->instances);
    result = engine::run(*timeline.value, std::move(bundle), std::move(world));
  } catch (const sim::SimError& e) {
    o.err << "fairadapt: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    o.err << "fairadapt: " << e.what() << "\n";
    return 1;
  }

  auto ndjson = engine::to_ndjson(result->trace);
  if (options.trace_out && !write_file(*options.trace_out, ndjson, o)) return 2;
  if (options.world_out && !write_file(*options.world_out, engine::world_to_ndjson(result->world), o)) return 2;

  if (o.format == Format::Ndjson) {
    o.out << ndjson;
    return 0;
  }
  for (const auto& r : result->trace) summarize(engine::to_json(r), o);
  o.out << result->trace.size() << " iterations\n";
  return 0;
}

int cmd_explain(const std::string& trace_path, const std::string& requirement, std::size_t iteration,
                const Output& o) {
  auto text = read_file(trace_path, o);
  if (!text) return 2;
  std::optional<Json> record;
  std::size_t count = 0;
  std::istringstream lines(*text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    Json r = Json::parse(line, nullptr, false);
    if (r.is_discarded() || !r.contains("iteration")) {
      o.err << "fairadapt: '" << trace_path << "' is not an adaptation trace\n";
      return 1;
    }
    ++count;
    if (r["iteration"].get<std::size_t>() == iteration) record = std::move(r);
  }
  if (!record) {
    o.err << "fairadapt: iteration " << iteration << " is not in the trace (" << count
          << " iterations)\n";
    return 1;
  }
  const auto& r = *record;
  if (!r["requirements"].contains(requirement)) {
    std::vector<std::string> ids;
    for (const auto& [id, s] : r["requirements"].items()) ids.push_back(id);
    o.err << "fairadapt: no requirement '" << requirement << "' at iteration " << iteration
          << "; available: " << list(ids) << "\n";
    return 1;
  }
  const auto& state = r["requirements"][requirement];
  auto ops = state["operations"].get<std::vector<std::string>>();
  auto mine = [&](const Json& x) {
    return std::find(ops.begin(), ops.end(), x["operation"].get<std::string>()) != ops.end();
  };
  Json evaluations = Json::array(), actions = Json::array(), because = Json::array();
  for (const auto& e : r["evaluations"]) {
    if (mine(e)) evaluations.push_back(e);
  }
  for (const auto& a : r["executed"]) {
    if (mine(a)) actions.push_back(a);
  }
  if (r["explained"].contains(requirement)) {
    for (const auto& w : r["explained"][requirement]) {
      Json edge;
      for (const auto& c : r["conflicts"]) {
        auto a = c["a"].get<std::string>(), b = c["b"].get<std::string>();
        if ((a == requirement && b == w["by"]) || (b == requirement && a == w["by"])) edge = c;
      }
      because.push_back(Json{{"by", w["by"]}, {"priority", w["priority"]}, {"edge", edge}});
    }
  }

  if (o.format == Format::Ndjson) {
    Json j{{"requirement", requirement},  {"iteration", iteration},
           {"status", state["status"]},    {"pre_status", state["pre_status"]},
           {"priority", state["priority"]}, {"evaluations", evaluations},
           {"actions", actions},           {"explained_by", because}};
    o.out << j.dump() << "\n";
    return 0;
  }

  o.out << requirement << " at iteration " << iteration << " (" << when(r) << ", "
        << event_line(r["event"]) << "): " << state["status"].get<std::string>();
  if (state["pre_status"] != state["status"]) {
    o.out << " (before actions: " << state["pre_status"].get<std::string>() << ")";
  }
  o.out << "\n  priority " << state["priority"].get<int>() << ", operations: " << list(ops) << "\n";
  bool fired = false;
  for (const auto& e : evaluations) fired = fired || e["result"].get<bool>();
  if (state["status"] == "IDLE") {
    o.out << "  no rule bound this iteration";
    if (!evaluations.empty()) o.out << " (evaluated rules were false)";
    o.out << "\n";
  }
  for (const auto& e : evaluations) {
    o.out << "  rule " << e["operation"].get<std::string>() << ": "
          << (e["result"].get<bool>() ? "true" : "false");
    std::vector<std::string> b;
    for (const auto& [type, id] : e["bindings"].items()) b.push_back(type + "=" + id.get<std::string>());
    o.out << " with " << list(b) << "\n";
  }
  for (const auto& a : actions) {
    o.out << "  action " << a["operation"].get<std::string>() << " " << a["verb"].get<std::string>()
          << ": " << a["status"].get<std::string>();
    if (a.contains("reason")) o.out << " (" << a["reason"].get<std::string>() << ")";
    o.out << "\n";
  }
  if (fired && actions.empty() && state["pre_status"] == "VIOLATED") {
    o.out << "  no action of this requirement was executed\n";
  }
  for (const auto& w : because) {
    o.out << "  explained by " << w["by"].get<std::string>() << " (priority "
          << w["priority"].get<int>() << ")";
    if (!w["edge"].is_null()) {
      o.out << " via " << w["edge"]["severity"].get<std::string>() << " conflict edge over "
            << braces(w["edge"]["shared"].get<model::IdSet>());
    }
    o.out << "\n";
  }
  return 0;
}

}  // namespace fairadapt::cli

#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fairadapt/dsl/parser.hpp"
#include "fairadapt/engine/loop.hpp"
#include "fairadapt/sim/events.hpp"

#ifndef FAIRADAPT_DATA_DIR
#error "FAIRADAPT_DATA_DIR must be defined"
#endif

namespace fairadapt::testing {

inline std::string data_path(const std::string& name) { return std::string(FAIRADAPT_DATA_DIR) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline model::ModelBundle load_model(const std::string& name) {
  auto r = dsl::parse_model(read_text(data_path(name)), name);
  if (!r.ok()) {
    std::string msg = "model " + name + " failed to parse:";
    for (const auto& d : r.diagnostics) msg += "\n" + dsl::format(d);
    throw std::runtime_error(msg);
  }
  return *r.value;
}

inline model::ModelBundle full_model() { return load_model("supermarket.frm"); }
inline model::ModelBundle base_model() { return load_model("supermarket_base.frm"); }

inline sim::World empty_world(const model::ModelBundle& bundle) {
  return sim::World::create(std::make_shared<const model::ResourceModel>(bundle.resources));
}

inline sim::EventTimeline week_timeline(const model::ModelBundle& base) {
  auto r = dsl::parse_scenario(read_text(data_path("supermarket_week.scn")), base, "supermarket_week.scn");
  if (!r.ok()) {
    std::string msg = "scenario failed to parse:";
    for (const auto& d : r.diagnostics) msg += "\n" + dsl::format(d);
    throw std::runtime_error(msg);
  }
  return *r.value;
}

inline engine::RunResult run_week_scenario() {
  auto base = base_model();
  auto timeline = week_timeline(base);
  auto schema = std::make_shared<const model::ResourceModel>(base.resources);
  auto world = sim::initial_world(schema, timeline.instances);
  return engine::run(timeline, std::move(base), std::move(world));
}

/// Event at `day hh:mm` with minutes given directly.
inline sim::Event event_at(sim::Day day, int minutes, sim::EventKind kind, std::string shopper = {},
                           std::string item = {}) {
  sim::Event e;
  e.time = {day, minutes};
  e.kind = kind;
  e.shopper = std::move(shopper);
  e.item = std::move(item);
  return e;
}

}  // namespace fairadapt::testing

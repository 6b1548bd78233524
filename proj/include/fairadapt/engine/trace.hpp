#pragma once

// Line-delimited JSON form of the adaptation trace. Field names are part
// of the CLI's output contract (see README).

#include <string>
#include <vector>

#include "json.hpp"

#include "fairadapt/dsl/diagnostic.hpp"
#include "fairadapt/engine/loop.hpp"

namespace fairadapt::engine {

using Json = nlohmann::ordered_json;

Json to_json(const sim::Value& v);
Json to_json(const sim::DiffEntry& d);
Json to_json(const sim::Event& e);
Json to_json(const ConflictEdge& e);
Json to_json(const Plan& p);
Json to_json(const TraceRecord& r);

/// One compact JSON object per record, each followed by '\n'.
std::string to_ndjson(const AdaptationTrace& trace);

/// World instances as line-delimited JSON, one instance per line.
std::string world_to_ndjson(const sim::World& world);

/// Rebuilds the event timeline recorded in a trace so it can be replayed
/// against `base`. Injected requirements are parsed back from their
/// recorded text.
dsl::ParseResult<std::vector<sim::Event>> events_from_trace(const std::vector<Json>& records,
                                                            const model::ModelBundle& base);

}  // namespace fairadapt::engine

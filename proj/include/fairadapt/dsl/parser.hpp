#pragma once

#include <string>
#include <string_view>

#include "fairadapt/dsl/diagnostic.hpp"
#include "fairadapt/model/types.hpp"
#include "fairadapt/sim/events.hpp"

namespace fairadapt::dsl {

/// Parses a `.frm` model. On success the bundle passes every load
/// invariant; an input without declarations yields an empty bundle and
/// warning W001.
ParseResult<model::ModelBundle> parse_model(std::string_view text, const std::string& file = "<input>");

/// Parses requirement declarations meant to be injected into `base` under
/// `parent` (empty for new roots). Returns only the new declarations.
ParseResult<model::ModelBundle> parse_injection(std::string_view text, const model::ModelBundle& base,
                                                const std::string& parent,
                                                const std::string& file = "<input>");

/// Parses a `.scn` scenario against `bundle`. Injected payloads are checked
/// against the bundle as it stands after the earlier injections and
/// retirements of the same scenario.
ParseResult<sim::EventTimeline> parse_scenario(std::string_view text, const model::ModelBundle& bundle,
                                               const std::string& file = "<input>");

}  // namespace fairadapt::dsl

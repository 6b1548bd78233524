#pragma once

#include <string>

#include "fairadapt/model/types.hpp"

namespace fairadapt::dsl {

/// Canonical text of a bundle: a header comment, then stakeholders,
/// resources, requirements and operations, each sorted by id. Field,
/// enum value and child order are kept. parse_model reads it back to an
/// equal bundle.
std::string serialize(const model::ModelBundle& bundle);

std::string quote(const std::string& text);
std::string to_source(const model::Literal& literal);
std::string to_source(const model::Operand& operand);

}  // namespace fairadapt::dsl

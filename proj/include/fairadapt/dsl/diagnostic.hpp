#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairadapt/source_span.hpp"

namespace fairadapt::dsl {

enum class Severity { Error, Warning };

/// Codes are stable: E001-E019 syntax, E020-E039 resolution, E040-E059
/// consistency, E060-E069 scenario, W0xx warnings.
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  SourceSpan span;

  bool operator==(const Diagnostic&) const = default;
};

/// `file:line:col: error E021: message`
std::string format(const Diagnostic& d);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Either a value (possibly with warnings) or at least one error.
template <typename T>
struct ParseResult {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return value.has_value(); }
};

}  // namespace fairadapt::dsl

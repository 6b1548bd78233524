#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fairadapt::model {

enum class ErrorCode {
  UnknownType,
  UnknownField,
  NonScalarTerminal,
  DanglingLeaf,
  UnknownNode,
  NoOperationalisation,
  InvalidModel,
};

std::string_view to_string(ErrorCode code);

/// Raised by model queries. `subject` names the failing identifier (a path
/// segment, node id, ...).
class ModelError : public std::runtime_error {
 public:
  ModelError(ErrorCode code, std::string subject, const std::string& message)
      : std::runtime_error(message), code_(code), subject_(std::move(subject)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorCode code_;
  std::string subject_;
};

}  // namespace fairadapt::model

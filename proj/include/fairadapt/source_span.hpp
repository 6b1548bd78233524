#pragma once

#include <cstddef>
#include <string>

namespace fairadapt {

/// Location of a token or declaration in a model or scenario file.
/// Line and column are 1-based; column and length count bytes.
struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
  int length = 0;
  std::size_t offset = 0;

  bool operator==(const SourceSpan&) const = default;
};

}  // namespace fairadapt

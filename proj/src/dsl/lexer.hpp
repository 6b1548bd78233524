#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fairadapt/dsl/diagnostic.hpp"

namespace fairadapt::dsl {

enum class TokenKind { Ident, Int, String, Time, Punct, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;      // identifier, punctuation, or unescaped string
  std::int64_t value = 0;  // Int value, or minutes for Time
  SourceSpan span;

  bool is(std::string_view punct_or_word) const {
    return (kind == TokenKind::Punct || kind == TokenKind::Ident) && text == punct_or_word;
  }
};

/// Tokenizes the whole input; the result always ends with an End token.
/// Lexical problems are appended to `diagnostics` and the offending bytes
/// skipped. Invalid UTF-8 stops lexing with E010.
std::vector<Token> lex(std::string_view text, const std::string& file,
                       std::vector<Diagnostic>& diagnostics);

}  // namespace fairadapt::dsl

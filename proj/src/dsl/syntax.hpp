#pragma once

// Declaration syntax trees. Every name keeps its token so later stages can
// point diagnostics at it.

#include <optional>
#include <string>
#include <vector>

#include "lexer.hpp"

namespace fairadapt::dsl {

struct RawPath {
  std::vector<Token> parts;  // root first
};

struct RawOperand {
  enum class Kind { Literal, Path, Count } kind = Kind::Literal;
  Token literal;  // Int, String, Time, or Ident (true/false/enum symbol/type)
  RawPath path;
  SourceSpan span;
};

struct RawCondition {
  RawOperand lhs;
  Token op;
  RawOperand rhs;
};

struct RawArg {
  Token name;
  RawOperand value;
};

struct RawStakeholder {
  Token id;
  std::optional<Token> name;
  Token kind;
};

struct RawField {
  Token name;
  Token kind;  // integer, boolean, text, time, enum, ref, set
  std::vector<Token> enum_values;
  Token target;
};

struct RawResource {
  Token id;
  std::vector<RawField> fields;
};

struct RawRequirement {
  Token id;
  Token description;
  Token specified_by;
  std::vector<Token> affects;
  std::optional<Token> priority;
  Token decomposition;  // AND, OR or leaf
  std::vector<Token> children;
  Token ofr;
  std::optional<std::vector<Token>> resources;
};

struct RawOperation {
  Token id;
  Token ofr;
  std::vector<RawCondition> conditions;
  Token verb;
  std::vector<RawArg> args;
  std::vector<Token> writes;
};

struct RawModel {
  std::vector<RawStakeholder> stakeholders;
  std::vector<RawResource> resources;
  std::vector<RawRequirement> requirements;
  std::vector<RawOperation> operations;

  bool empty() const {
    return stakeholders.empty() && resources.empty() && requirements.empty() && operations.empty();
  }
};

/// Recursive-descent reader over a token vector. After an error it skips to
/// the next top-level keyword.
class SyntaxParser {
 public:
  SyntaxParser(const std::vector<Token>& tokens, std::vector<Diagnostic>& diagnostics,
               std::size_t pos = 0)
      : t_(tokens), diags_(diagnostics), pos_(pos) {}

  /// Declarations until End, or until a `}` when `stop_at_brace`.
  RawModel declarations(bool stop_at_brace);

  std::size_t position() const { return pos_; }

  // Shared with the scenario reader.
  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool accept(std::string_view text);
  const Token& expect(std::string_view text, const char* what);
  const Token& expect_kind(TokenKind kind, const char* what);
  RawOperand operand();

  struct Failure {};
  [[noreturn]] void fail(const char* code, std::string message, const SourceSpan& span);

 private:
  RawStakeholder stakeholder();
  RawResource resource();
  RawRequirement requirement();
  RawOperation operation();
  RawPath path();
  std::vector<Token> id_list(std::string_view open, std::string_view close, bool allow_empty);
  void recover(bool stop_at_brace);

  const std::vector<Token>& t_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_;
};

bool is_top_keyword(const Token& t);

}  // namespace fairadapt::dsl

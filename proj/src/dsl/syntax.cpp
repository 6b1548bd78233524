#include "syntax.hpp"

namespace fairadapt::dsl {
namespace {

constexpr std::string_view kStakeholderKinds[] = {"individual", "group", "organization", "authority"};
constexpr std::string_view kKinds[] = {"integer", "boolean", "text", "time", "enum", "ref", "set"};
constexpr std::string_view kCmp[] = {"<", "<=", ">", ">=", "==", "!="};

template <std::size_t N>
bool one_of(const std::string_view (&set)[N], std::string_view s) {
  for (auto x : set) {
    if (x == s) return true;
  }
  return false;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::End: return "end of input";
    case TokenKind::String: return "string";
    default: return "'" + t.text + "'";
  }
}

SourceSpan cover(const SourceSpan& a, const SourceSpan& b) {
  SourceSpan s = a;
  s.length = static_cast<int>(b.offset + b.length - a.offset);
  return s;
}

}  // namespace

bool is_top_keyword(const Token& t) {
  return t.kind == TokenKind::Ident && (t.text == "stakeholder" || t.text == "resource" ||
                                        t.text == "requirement" || t.text == "operation");
}

const Token& SyntaxParser::peek(std::size_t ahead) const {
  return t_[std::min(pos_ + ahead, t_.size() - 1)];
}

const Token& SyntaxParser::next() {
  const Token& t = peek();
  if (pos_ + 1 < t_.size()) ++pos_;
  return t;
}

bool SyntaxParser::accept(std::string_view text) {
  if (!peek().is(text)) return false;
  next();
  return true;
}

void SyntaxParser::fail(const char* code, std::string message, const SourceSpan& span) {
  diags_.push_back({Severity::Error, code, std::move(message), span});
  throw Failure{};
}

const Token& SyntaxParser::expect(std::string_view text, const char* what) {
  if (!peek().is(text)) {
    fail("E003", std::string("expected ") + what + ", found " + describe(peek()), peek().span);
  }
  return next();
}

const Token& SyntaxParser::expect_kind(TokenKind kind, const char* what) {
  if (peek().kind != kind) {
    fail("E003", std::string("expected ") + what + ", found " + describe(peek()), peek().span);
  }
  return next();
}

void SyntaxParser::recover(bool stop_at_brace) {
  // the failing token may itself be a keyword that started nothing useful
  if (!is_top_keyword(peek()) || peek().kind == TokenKind::End) next();
  int depth = 0;
  while (peek().kind != TokenKind::End && !is_top_keyword(peek())) {
    if (peek().is("{")) ++depth;
    if (peek().is("}")) {
      if (depth == 0 && stop_at_brace) return;
      --depth;
    }
    next();
  }
}

RawModel SyntaxParser::declarations(bool stop_at_brace) {
  RawModel m;
  while (peek().kind != TokenKind::End && !(stop_at_brace && peek().is("}"))) {
    try {
      const Token& t = peek();
      if (t.is("stakeholder")) {
        m.stakeholders.push_back(stakeholder());
      } else if (t.is("resource")) {
        m.resources.push_back(resource());
      } else if (t.is("requirement")) {
        m.requirements.push_back(requirement());
      } else if (t.is("operation")) {
        m.operations.push_back(operation());
      } else {
        fail("E006", "expected a declaration, found " + describe(t), t.span);
      }
    } catch (const Failure&) {
      recover(stop_at_brace);
    }
  }
  return m;
}

std::vector<Token> SyntaxParser::id_list(std::string_view open, std::string_view close,
                                         bool allow_empty) {
  std::vector<Token> ids;
  expect(open, open == "[" ? "'['" : "'{'");
  if (allow_empty && accept(close)) return ids;
  ids.push_back(expect_kind(TokenKind::Ident, "an identifier"));
  while (accept(",")) ids.push_back(expect_kind(TokenKind::Ident, "an identifier"));
  expect(close, close == "]" ? "']'" : "'}'");
  return ids;
}

RawStakeholder SyntaxParser::stakeholder() {
  next();
  RawStakeholder s;
  s.id = expect_kind(TokenKind::Ident, "a stakeholder id");
  if (peek().kind == TokenKind::String) s.name = next();
  expect("kind", "'kind'");
  expect("=", "'='");
  s.kind = expect_kind(TokenKind::Ident, "a stakeholder kind");
  if (!one_of(kStakeholderKinds, s.kind.text)) {
    fail("E011", "stakeholder kind must be individual, group, organization or authority",
         s.kind.span);
  }
  return s;
}

RawResource SyntaxParser::resource() {
  next();
  RawResource r;
  r.id = expect_kind(TokenKind::Ident, "a resource type name");
  expect("{", "'{'");
  while (!peek().is("}")) {
    RawField f;
    f.name = expect_kind(TokenKind::Ident, "a field name or '}'");
    expect(":", "':'");
    f.kind = expect_kind(TokenKind::Ident, "a field kind");
    if (!one_of(kKinds, f.kind.text)) fail("E007", "unknown field kind '" + f.kind.text + "'", f.kind.span);
    if (f.kind.text == "enum") {
      f.enum_values = id_list("(", ")", false);
    } else if (f.kind.text == "ref" || f.kind.text == "set") {
      f.target = expect_kind(TokenKind::Ident, "a resource type name");
    }
    expect(";", "';'");
    r.fields.push_back(std::move(f));
  }
  next();
  return r;
}

RawRequirement SyntaxParser::requirement() {
  next();
  RawRequirement r;
  r.id = expect_kind(TokenKind::Ident, "a requirement id");
  r.description = expect_kind(TokenKind::String, "a quoted description");
  expect("specified_by", "'specified_by'");
  expect("=", "'='");
  r.specified_by = expect_kind(TokenKind::Ident, "a stakeholder id");
  expect("affects", "'affects'");
  expect("=", "'='");
  r.affects = id_list("[", "]", true);
  if (accept("priority")) {
    expect("=", "'='");
    r.priority = expect_kind(TokenKind::Int, "an integer priority");
    if (r.priority->value < 0 || r.priority->value > 1'000'000) {
      fail("E005", "priority must be between 0 and 1000000", r.priority->span);
    }
  }
  if (accept("decompose")) {
    r.decomposition = next();
    if (!r.decomposition.is("AND") && !r.decomposition.is("OR")) {
      fail("E012", "decomposition must be AND or OR", r.decomposition.span);
    }
    r.children = id_list("{", "}", true);
  } else if (peek().is("leaf")) {
    r.decomposition = next();
    r.ofr = expect_kind(TokenKind::Ident, "an operational requirement id");
    if (accept("resources")) {
      expect("=", "'='");
      r.resources = id_list("[", "]", true);
    }
  } else {
    fail("E012", "expected 'decompose' or 'leaf', found " + describe(peek()), peek().span);
  }
  return r;
}

RawPath SyntaxParser::path() {
  RawPath p;
  p.parts.push_back(expect_kind(TokenKind::Ident, "a path"));
  while (accept(".")) p.parts.push_back(expect_kind(TokenKind::Ident, "a field name"));
  return p;
}

RawOperand SyntaxParser::operand() {
  RawOperand o;
  const Token& t = peek();
  if (t.is("count") && peek(1).is("(")) {
    const Token& first = next();
    next();
    o.kind = RawOperand::Kind::Count;
    o.path = path();
    o.span = cover(first.span, expect(")", "')'").span);
    return o;
  }
  if (t.kind == TokenKind::Ident && !t.is("true") && !t.is("false")) {
    o.kind = RawOperand::Kind::Path;
    o.path = path();
    o.span = cover(o.path.parts.front().span, o.path.parts.back().span);
    return o;
  }
  if (t.kind == TokenKind::Int || t.kind == TokenKind::String || t.kind == TokenKind::Time ||
      t.is("true") || t.is("false")) {
    o.literal = next();
    o.span = o.literal.span;
    return o;
  }
  fail("E003", "expected a value, found " + describe(t), t.span);
}

RawOperation SyntaxParser::operation() {
  next();
  RawOperation op;
  op.id = expect_kind(TokenKind::Ident, "an operation id");
  expect("for", "'for'");
  op.ofr = expect_kind(TokenKind::Ident, "an operational requirement id");
  expect("{", "'{'");
  const Token& rule = expect("rule", "'rule'");
  expect(":", "':'");
  if (peek().is(";")) fail("E015", "rule has no conditions", rule.span);
  do {
    RawCondition c;
    c.lhs = operand();
    if (c.lhs.kind == RawOperand::Kind::Literal) {
      fail("E003", "a condition must start with a path", c.lhs.span);
    }
    c.op = next();
    if (c.op.kind != TokenKind::Punct || !one_of(kCmp, c.op.text)) {
      fail("E003", "expected a comparison operator, found " + describe(c.op), c.op.span);
    }
    c.rhs = operand();
    op.conditions.push_back(std::move(c));
  } while (accept("and"));
  expect(";", "';'");
  expect("action", "'action'");
  expect(":", "':'");
  op.verb = expect_kind(TokenKind::Ident, "a verb");
  expect("(", "'('");
  if (!peek().is(")")) {
    do {
      RawArg a;
      a.name = expect_kind(TokenKind::Ident, "an argument name");
      expect("=", "'='");
      a.value = operand();
      op.args.push_back(std::move(a));
    } while (accept(","));
  }
  expect(")", "')'");
  expect("writes", "'writes'");
  op.writes = id_list("[", "]", false);
  expect(";", "';'");
  expect("}", "'}'");
  return op;
}

}  // namespace fairadapt::dsl

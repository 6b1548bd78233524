#include "fairadapt/dsl/parser.hpp"

#include <algorithm>

#include "fairadapt/model/invariants.hpp"
#include "lexer.hpp"
#include "resolver.hpp"
#include "syntax.hpp"

namespace fairadapt::dsl {
namespace {

void sort_diagnostics(std::vector<Diagnostic>& d) {
  std::stable_sort(d.begin(), d.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.span.file, a.span.offset) < std::tie(b.span.file, b.span.offset);
  });
}

template <typename T>
ParseResult<T> failed(std::vector<Diagnostic> diags) {
  sort_diagnostics(diags);
  return {std::nullopt, std::move(diags)};
}

SourceSpan cover(const SourceSpan& a, const SourceSpan& b) {
  SourceSpan s = a;
  s.length = static_cast<int>(b.offset + b.length - a.offset);
  return s;
}

/// Resolves and validates an injection payload against `base`. Returns the
/// fragment, or nullopt after reporting errors.
std::optional<model::ModelBundle> injection(const RawModel& raw, const model::ModelBundle& base,
                                            const std::string& parent, const SourceSpan& where,
                                            std::vector<Diagnostic>& diags) {
  std::size_t before = diags.size();
  if (!parent.empty()) {
    auto it = base.requirements.find(parent);
    if (it == base.requirements.end()) {
      diags.push_back({Severity::Error, "E029", "unknown parent requirement '" + parent + "'", where});
      return std::nullopt;
    }
    if (it->second.decomposition == model::Decomposition::Leaf) {
      diags.push_back({Severity::Error, "E050", "cannot attach requirements under leaf '" + parent + "'", where});
      return std::nullopt;
    }
  }
  if (raw.requirements.empty()) {
    diags.push_back({Severity::Error, "E013", "injection declares no requirements", where});
    return std::nullopt;
  }
  auto fragment = resolve(raw, base, true, diags);
  if (diags.size() != before) return std::nullopt;
  check_consistency(model::inject(base, fragment, parent), where, diags);
  if (diags.size() != before) return std::nullopt;
  return fragment;
}

class ScenarioReader {
 public:
  ScenarioReader(const std::vector<Token>& tokens, const model::ModelBundle& bundle,
                 std::vector<Diagnostic>& diags)
      : p_(tokens, diags), bundle_(bundle), diags_(diags) {}

  sim::EventTimeline run() {
    while (p_.peek().kind != TokenKind::End) {
      try {
        if (p_.peek().is("instance")) {
          instance();
        } else if (p_.peek().is("at")) {
          event();
        } else {
          p_.fail("E013", "expected 'instance' or 'at'", p_.peek().span);
        }
      } catch (const SyntaxParser::Failure&) {
        p_.next();
        while (p_.peek().kind != TokenKind::End && !p_.peek().is("at") && !p_.peek().is("instance")) {
          p_.next();
        }
      }
    }
    return std::move(out_);
  }

 private:
  void error(const char* code, std::string message, const SourceSpan& span) {
    diags_.push_back({Severity::Error, code, std::move(message), span});
  }

  /// `key = value` pairs up to the next line-level keyword or `{`.
  std::vector<std::pair<Token, RawOperand>> pairs() {
    std::vector<std::pair<Token, RawOperand>> out;
    while (p_.peek().kind == TokenKind::Ident && p_.peek(1).is("=")) {
      Token key = p_.next();
      p_.next();
      out.emplace_back(std::move(key), p_.operand());
    }
    return out;
  }

  std::optional<sim::Value> instance_value(const model::Field& f, const RawOperand& v) {
    const Token& t = v.kind == RawOperand::Kind::Literal ? v.literal : v.path.parts.front();
    bool lone = v.kind == RawOperand::Kind::Literal ||
                (v.kind == RawOperand::Kind::Path && v.path.parts.size() == 1);
    if (!lone) return std::nullopt;
    switch (f.kind.tag) {
      case model::KindTag::Integer:
        if (t.kind == TokenKind::Int) return sim::Value{t.value};
        break;
      case model::KindTag::Time:
        if (t.kind == TokenKind::Time) return sim::Value{t.value};
        break;
      case model::KindTag::Text:
        if (t.kind == TokenKind::String) return sim::Value{t.text};
        break;
      case model::KindTag::Boolean:
        if (t.is("true") || t.is("false")) return sim::Value{t.text == "true"};
        break;
      case model::KindTag::Enum:
        if (t.kind == TokenKind::Ident &&
            std::find(f.kind.enum_values.begin(), f.kind.enum_values.end(), t.text) != f.kind.enum_values.end()) {
          return sim::Value{t.text};
        }
        break;
      default:
        break;
    }
    return std::nullopt;
  }

  void instance() {
    const Token& kw = p_.next();
    const Token& type = p_.expect_kind(TokenKind::Ident, "a resource type");
    const Token& id = p_.expect_kind(TokenKind::Ident, "an instance id");
    auto fields = pairs();
    if (!out_.events.empty()) {
      error("E065", "instances must be declared before the first event", kw.span);
      return;
    }
    auto schema = bundle_.resources.find(type.text);
    if (schema == bundle_.resources.end() || type.text == "Order" || type.text == "Clock") {
      error("E062", "cannot declare instances of '" + type.text + "'", type.span);
      return;
    }
    sim::InstanceKey key{type.text, id.text};
    if (declared_.contains(key)) {
      error("E064", "duplicate instance '" + id.text + "'", id.span);
      return;
    }
    sim::InstanceDecl decl{key, {}, cover(kw.span, id.span)};
    for (const auto& [name, value] : fields) {
      const auto* f = schema->second.find(name.text);
      if (!f) {
        error("E062", type.text + " has no field '" + name.text + "'", name.span);
        continue;
      }
      auto v = instance_value(*f, value);
      if (!v) {
        error("E062", "value does not fit " + type.text + "." + name.text + " (" + model::to_string(f->kind) + ")",
              value.span);
        continue;
      }
      decl.fields[name.text] = std::move(*v);
    }
    declared_.insert(key);
    out_.instances.push_back(std::move(decl));
  }

  void event() {
    const Token& at = p_.next();
    const Token& day_tok = p_.expect_kind(TokenKind::Ident, "a day (mon..sun)");
    auto day = sim::parse_day(day_tok.text);
    if (!day) p_.fail("E014", "unknown day '" + day_tok.text + "'", day_tok.span);
    const Token& time = p_.expect_kind(TokenKind::Time, "a time HH:MM");
    const Token& kind_tok = p_.expect_kind(TokenKind::Ident, "an event");
    auto kind = sim::parse_event_kind(kind_tok.text);
    if (!kind) p_.fail("E013", "unknown event '" + kind_tok.text + "'", kind_tok.span);

    sim::Event e;
    e.time = {*day, static_cast<int>(time.value)};
    e.kind = *kind;
    auto args = pairs();
    SourceSpan last = args.empty() ? kind_tok.span : args.back().second.span;

    std::map<std::string, const RawOperand*> given;
    for (const auto& [k, v] : args) {
      if (!given.emplace(k.text, &v).second) p_.fail("E013", "key '" + k.text + "' given twice", k.span);
    }
    auto allowed = keys(*kind);
    for (const auto& [k, v] : args) {
      if (std::find(allowed.begin(), allowed.end(), k.text) == allowed.end()) {
        p_.fail("E013", kind_tok.text + " does not take '" + k.text + "'", k.span);
      }
    }
    for (const auto& k : allowed) {
      if (!given.contains(k) && !(k == "parent")) {
        p_.fail("E013", kind_tok.text + " needs '" + k + "'", kind_tok.span);
      }
    }
    auto ident = [&](const char* key) -> std::string {
      const RawOperand* v = given.at(key);
      if (v->kind != RawOperand::Kind::Path || v->path.parts.size() != 1) {
        p_.fail("E013", std::string("'") + key + "' needs an identifier", v->span);
      }
      return v->path.parts.front().text;
    };
    auto instance_ref = [&](const char* key, const char* type) {
      std::string id = ident(key);
      if (!declared_.contains({type, id})) {
        error("E061", std::string("unknown ") + type + " '" + id + "'", given.at(key)->span);
      }
      return id;
    };

    switch (e.kind) {
      case sim::EventKind::EnterSystem:
      case sim::EventKind::Checkout:
        e.shopper = instance_ref("shopper", "Shopper");
        break;
      case sim::EventKind::AddItem:
      case sim::EventKind::RemoveItem:
        e.shopper = instance_ref("shopper", "Shopper");
        e.item = instance_ref("item", "Item");
        break;
      case sim::EventKind::StockChange: {
        e.item = instance_ref("item", "Item");
        const RawOperand* v = given.at("value");
        if (v->kind != RawOperand::Kind::Literal || v->literal.kind != TokenKind::Int) {
          p_.fail("E013", "'value' needs an integer", v->span);
        }
        e.amount = v->literal.value;
        break;
      }
      case sim::EventKind::RetireRequirement: {
        e.requirement = ident("id");
        if (!evolving_.requirements.contains(e.requirement)) {
          error("E063", "unknown requirement '" + e.requirement + "'", given.at("id")->span);
        } else {
          evolving_ = model::retire(evolving_, e.requirement);
        }
        break;
      }
      case sim::EventKind::InjectRequirement: {
        std::string parent = given.contains("parent") ? ident("parent") : std::string{};
        p_.expect("{", "'{' opening the injected requirements");
        std::size_t errors_before = diags_.size();
        SyntaxParser payload = p_;
        RawModel raw = payload.declarations(true);
        while (p_.position() < payload.position()) p_.next();
        const Token& close = p_.expect("}", "'}'");
        last = close.span;
        if (diags_.size() != errors_before) break;
        auto where = given.contains("parent") ? given.at("parent")->span : kind_tok.span;
        if (auto fragment = injection(raw, evolving_, parent, where, diags_)) {
          evolving_ = model::inject(evolving_, *fragment, parent);
          e.injection = std::make_shared<sim::Injection>(sim::Injection{parent, std::move(*fragment)});
        }
        break;
      }
      case sim::EventKind::Tick:
        break;
    }
    e.span = cover(at.span, last);
    if (!out_.events.empty() && e.time < out_.events.back().time) {
      error("E060", "event at " + sim::to_string(e.time) + " comes before the previous event at " +
                        sim::to_string(out_.events.back().time),
            cover(at.span, time.span));
    }
    out_.events.push_back(std::move(e));
  }

  static std::vector<std::string> keys(sim::EventKind k) {
    switch (k) {
      case sim::EventKind::EnterSystem:
      case sim::EventKind::Checkout: return {"shopper"};
      case sim::EventKind::AddItem:
      case sim::EventKind::RemoveItem: return {"shopper", "item"};
      case sim::EventKind::StockChange: return {"item", "value"};
      case sim::EventKind::InjectRequirement: return {"parent"};
      case sim::EventKind::RetireRequirement: return {"id"};
      case sim::EventKind::Tick: return {};
    }
    return {};
  }

  SyntaxParser p_;
  const model::ModelBundle& bundle_;
  model::ModelBundle evolving_ = bundle_;
  std::vector<Diagnostic>& diags_;
  std::set<sim::InstanceKey> declared_;
  sim::EventTimeline out_;
};

}  // namespace

std::string format(const Diagnostic& d) {
  return d.span.file + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": " +
         (d.severity == Severity::Error ? "error " : "warning ") + d.code + ": " + d.message;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

ParseResult<model::ModelBundle> parse_model(std::string_view text, const std::string& file) {
  std::vector<Diagnostic> diags;
  auto tokens = lex(text, file, diags);
  SyntaxParser parser(tokens, diags);
  auto raw = parser.declarations(false);
  if (has_errors(diags)) return failed<model::ModelBundle>(std::move(diags));
  if (raw.empty()) {
    diags.push_back({Severity::Warning, "W001", "no declarations", tokens.front().span});
    return {model::ModelBundle{}, std::move(diags)};
  }
  auto bundle = resolve(raw, model::ModelBundle{}, false, diags);
  if (has_errors(diags)) return failed<model::ModelBundle>(std::move(diags));
  check_consistency(bundle, tokens.front().span, diags);
  if (has_errors(diags)) return failed<model::ModelBundle>(std::move(diags));
  return {std::move(bundle), std::move(diags)};
}

ParseResult<model::ModelBundle> parse_injection(std::string_view text, const model::ModelBundle& base,
                                                const std::string& parent, const std::string& file) {
  std::vector<Diagnostic> diags;
  auto tokens = lex(text, file, diags);
  SyntaxParser parser(tokens, diags);
  auto raw = parser.declarations(false);
  if (has_errors(diags)) return failed<model::ModelBundle>(std::move(diags));
  auto fragment = injection(raw, base, parent, tokens.front().span, diags);
  if (!fragment) return failed<model::ModelBundle>(std::move(diags));
  return {std::move(*fragment), std::move(diags)};
}

ParseResult<sim::EventTimeline> parse_scenario(std::string_view text, const model::ModelBundle& bundle,
                                               const std::string& file) {
  std::vector<Diagnostic> diags;
  auto tokens = lex(text, file, diags);
  if (has_errors(diags)) return failed<sim::EventTimeline>(std::move(diags));
  auto timeline = ScenarioReader(tokens, bundle, diags).run();
  if (has_errors(diags)) return failed<sim::EventTimeline>(std::move(diags));
  return {std::move(timeline), std::move(diags)};
}

}  // namespace fairadapt::dsl

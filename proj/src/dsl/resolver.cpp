#include "resolver.hpp"

#include <algorithm>

#include "fairadapt/model/invariants.hpp"
#include "fairadapt/model/queries.hpp"
#include "fairadapt/model/verbs.hpp"

namespace fairadapt::dsl {
namespace {

using model::FieldKind;
using model::KindTag;

SourceSpan cover(const SourceSpan& a, const SourceSpan& b) {
  SourceSpan s = a;
  s.length = static_cast<int>(b.offset + b.length - a.offset);
  return s;
}

bool ordering_op(const std::string& op) { return op == "<" || op == "<=" || op == ">" || op == ">="; }

model::CmpOp cmp_op(const std::string& op) {
  if (op == "<") return model::CmpOp::Lt;
  if (op == "<=") return model::CmpOp::Le;
  if (op == ">") return model::CmpOp::Gt;
  if (op == ">=") return model::CmpOp::Ge;
  if (op == "==") return model::CmpOp::Eq;
  return model::CmpOp::Ne;
}

model::StakeholderKind stakeholder_kind(const std::string& s) {
  if (s == "group") return model::StakeholderKind::Group;
  if (s == "organization") return model::StakeholderKind::Organization;
  if (s == "authority") return model::StakeholderKind::Authority;
  return model::StakeholderKind::Individual;
}

struct Value {
  model::Operand operand;
  FieldKind kind;
  bool literal = false;
};

class Resolver {
 public:
  Resolver(const model::ModelBundle& base, bool payload, std::vector<Diagnostic>& diags)
      : base_(base), payload_(payload), diags_(diags) {}

  model::ModelBundle run(const RawModel& raw) {
    types_ = base_.resources;
    for (const auto& r : raw.resources) types_.emplace(r.id.text, model::ResourceType{r.id.text, {}});
    for (const auto& s : raw.stakeholders) stakeholder(s);
    for (const auto& r : raw.resources) resource(r);
    for (const auto& r : raw.resources) {
      if (auto it = out_.resources.find(r.id.text); it != out_.resources.end()) types_[r.id.text] = it->second;
    }
    for (const auto& r : raw.requirements) known_requirements_.insert(r.id.text);
    for (const auto& r : raw.requirements) requirement(r);
    for (const auto& o : raw.operations) operation(o);
    derive_ofr_resources(raw);
    return std::move(out_);
  }

 private:
  void error(const char* code, std::string message, const SourceSpan& span) {
    diags_.push_back({Severity::Error, code, std::move(message), span});
  }

  bool claim(const Token& id, bool taken, const char* kind) {
    if (!taken) return true;
    error("E044", std::string("duplicate ") + kind + " '" + id.text + "'", id.span);
    return false;
  }

  bool has_stakeholder(const std::string& id) const {
    return base_.stakeholders.contains(id) || out_.stakeholders.contains(id);
  }
  bool has_type(const std::string& id) const { return types_.contains(id); }

  void stakeholder(const RawStakeholder& s) {
    if (!claim(s.id, has_stakeholder(s.id.text), "stakeholder")) return;
    out_.stakeholders.emplace(
        s.id.text, model::Stakeholder{s.id.text, s.name ? s.name->text : s.id.text,
                                      stakeholder_kind(s.kind.text)});
    out_.spans.emplace("stakeholder:" + s.id.text, s.id.span);
  }

  void resource(const RawResource& r) {
    if (payload_) {
      error("E050", "injected requirements cannot declare resource types", r.id.span);
      return;
    }
    if (!claim(r.id, out_.resources.contains(r.id.text) || base_.resources.contains(r.id.text),
               "resource type")) {
      return;
    }
    model::ResourceType type{r.id.text, {}};
    for (const auto& f : r.fields) {
      if (type.find(f.name.text)) {
        error("E045", "duplicate field '" + f.name.text + "' in " + r.id.text, f.name.span);
        continue;
      }
      if (has_type(f.name.text)) {
        error("E046", "field '" + f.name.text + "' is named like a resource type", f.name.span);
        continue;
      }
      FieldKind kind;
      const auto& k = f.kind.text;
      if (k == "integer") kind = FieldKind::integer();
      else if (k == "boolean") kind = FieldKind::boolean();
      else if (k == "text") kind = FieldKind::text();
      else if (k == "time") kind = FieldKind::time();
      else if (k == "enum") {
        std::vector<std::string> values;
        for (const auto& v : f.enum_values) {
          if (std::find(values.begin(), values.end(), v.text) != values.end()) {
            error("E045", "duplicate enum value '" + v.text + "'", v.span);
          } else if (has_type(v.text)) {
            error("E046", "enum value '" + v.text + "' is named like a resource type", v.span);
          }
          values.push_back(v.text);
        }
        kind = FieldKind::enumeration(std::move(values));
      } else {
        if (!has_type(f.target.text)) {
          error("E032", "unknown resource type '" + f.target.text + "'", f.target.span);
          continue;
        }
        kind = k == "ref" ? FieldKind::reference(f.target.text) : FieldKind::set_of(f.target.text);
      }
      type.fields.push_back({f.name.text, std::move(kind)});
    }
    out_.resources.emplace(r.id.text, std::move(type));
    out_.spans.emplace("resource:" + r.id.text, r.id.span);
  }

  void requirement(const RawRequirement& r) {
    if (!claim(r.id, out_.requirements.contains(r.id.text) || base_.requirements.contains(r.id.text),
               "requirement")) {
      return;
    }
    bool ok = true;
    auto party = [&](const Token& t) {
      if (has_stakeholder(t.text)) return;
      error("E020", "unknown stakeholder '" + t.text + "'", t.span);
      ok = false;
    };
    party(r.specified_by);
    model::IdSet affects;
    for (const auto& a : r.affects) {
      party(a);
      affects.insert(a.text);
    }

    model::FairnessRequirement fr;
    fr.id = r.id.text;
    fr.description = r.description.text;
    fr.specified_by = r.specified_by.text;
    fr.affects = affects;
    if (r.priority) fr.priority = static_cast<int>(r.priority->value);

    if (r.decomposition.is("leaf")) {
      fr.decomposition = model::Decomposition::Leaf;
      fr.ofr = r.ofr.text;
      if (out_.ofrs.contains(r.ofr.text) || base_.ofrs.contains(r.ofr.text)) {
        error("E049", "operational requirement '" + r.ofr.text + "' is already used by another leaf",
              r.ofr.span);
        ok = false;
      } else if (ok) {
        model::OperationalRequirement ofr{r.ofr.text, fr.specified_by, affects, {}};
        if (r.resources) {
          for (const auto& t : *r.resources) {
            if (!has_type(t.text)) {
              error("E021", "unknown resource type '" + t.text + "'", t.span);
              ok = false;
            }
            ofr.resources.insert(t.text);
          }
        } else {
          derived_.insert(r.ofr.text);
        }
        out_.ofrs.emplace(r.ofr.text, std::move(ofr));
        out_.spans.emplace("ofr:" + r.ofr.text, r.ofr.span);
      }
    } else {
      fr.decomposition = r.decomposition.is("AND") ? model::Decomposition::And : model::Decomposition::Or;
      for (const auto& c : r.children) {
        if (!known_requirements_.contains(c.text) && !base_.requirements.contains(c.text)) {
          error("E024", "unknown child requirement '" + c.text + "'", c.span);
          ok = false;
        }
        fr.children.push_back(c.text);
      }
    }
    if (!ok) return;
    out_.requirements.emplace(fr.id, std::move(fr));
    out_.spans.emplace("requirement:" + r.id.text, r.id.span);
  }

  /// Kind of the path's terminal, reporting the failing token.
  std::optional<FieldKind> path_kind(const RawPath& p, bool allow_set) {
    const Token& root = p.parts.front();
    auto type = types_.find(root.text);
    if (type == types_.end()) {
      error("E021", "unknown resource type '" + root.text + "'", root.span);
      return std::nullopt;
    }
    if (p.parts.size() == 1) return FieldKind::reference(root.text);
    const model::ResourceType* current = &type->second;
    for (std::size_t i = 1; i < p.parts.size(); ++i) {
      const Token& seg = p.parts[i];
      const model::Field* f = current->find(seg.text);
      if (!f) {
        error("E022", "type '" + current->name + "' has no field '" + seg.text + "'", seg.span);
        return std::nullopt;
      }
      bool last = i + 1 == p.parts.size();
      if (f->kind.tag == KindTag::SetOf && !(last && allow_set)) {
        error("E023", "'" + seg.text + "' is a set; only count(...) can use it", seg.span);
        return std::nullopt;
      }
      if (last) return f->kind;
      if (f->kind.tag != KindTag::Reference) {
        error("E022", "field '" + seg.text + "' of kind " + model::to_string(f->kind) +
                          " has no field '" + p.parts[i + 1].text + "'",
              p.parts[i + 1].span);
        return std::nullopt;
      }
      current = &types_.at(f->kind.target);
    }
    return std::nullopt;
  }

  model::FieldPath field_path(const RawPath& p) const {
    model::FieldPath out{p.parts.front().text, {}};
    for (std::size_t i = 1; i < p.parts.size(); ++i) out.segments.push_back(p.parts[i].text);
    return out;
  }

  /// A lone identifier that names no type is an enum symbol.
  bool is_symbol(const RawOperand& o) const {
    return o.kind == RawOperand::Kind::Path && o.path.parts.size() == 1 &&
           !has_type(o.path.parts.front().text);
  }

  std::optional<Value> value(const RawOperand& o, bool allow_symbol) {
    if (o.kind == RawOperand::Kind::Count) {
      auto kind = path_kind(o.path, true);
      if (!kind) return std::nullopt;
      if (kind->tag != KindTag::SetOf) {
        error("E026", "count(...) needs a set-valued path", o.span);
        return std::nullopt;
      }
      return Value{model::PathOperand{field_path(o.path), true}, FieldKind::integer(), false};
    }
    if (o.kind == RawOperand::Kind::Path) {
      if (allow_symbol && is_symbol(o)) {
        const auto& t = o.path.parts.front();
        return Value{model::Literal{model::Symbol{t.text}}, FieldKind::enumeration({t.text}), true};
      }
      auto kind = path_kind(o.path, false);
      if (!kind) return std::nullopt;
      return Value{model::PathOperand{field_path(o.path), false}, *kind, false};
    }
    const Token& t = o.literal;
    switch (t.kind) {
      case TokenKind::Int: return Value{model::Literal{t.value}, FieldKind::integer(), true};
      case TokenKind::String: return Value{model::Literal{t.text}, FieldKind::text(), true};
      case TokenKind::Time:
        return Value{model::Literal{model::TimeOfDay{static_cast<int>(t.value)}}, FieldKind::time(), true};
      default:
        return Value{model::Literal{t.text == "true"}, FieldKind::boolean(), true};
    }
  }

  /// Checks that a value fits a field kind; E027 for an unknown enum value.
  bool fits(const FieldKind& target, const Value& v, const SourceSpan& span, const char* code) {
    if (v.literal && v.kind.tag == KindTag::Enum) {
      if (target.tag != KindTag::Enum) {
        error(code, "'" + v.kind.enum_values.front() + "' is not a value of kind " + model::to_string(target), span);
        return false;
      }
      const auto& name = v.kind.enum_values.front();
      if (std::find(target.enum_values.begin(), target.enum_values.end(), name) == target.enum_values.end()) {
        error("E027", "'" + name + "' is not one of " + model::to_string(target), span);
        return false;
      }
      return true;
    }
    if (target == v.kind) return true;
    error(code, "cannot compare " + model::to_string(target) + " with " + model::to_string(v.kind), span);
    return false;
  }

  std::optional<model::Condition> condition(const RawCondition& c) {
    auto lhs = value(c.lhs, false);
    auto rhs = value(c.rhs, true);
    if (!lhs || !rhs) return std::nullopt;
    if (!fits(lhs->kind, *rhs, c.rhs.span, "E026")) return std::nullopt;
    if (ordering_op(c.op.text) &&
        (lhs->kind.tag == KindTag::Boolean || lhs->kind.tag == KindTag::Reference)) {
      error("E026", "'" + c.op.text + "' needs an ordered kind, not " + model::to_string(lhs->kind), c.op.span);
      return std::nullopt;
    }
    return model::Condition{std::get<model::PathOperand>(lhs->operand), cmp_op(c.op.text), rhs->operand};
  }

  std::optional<model::ActionSpec> action(const RawOperation& o) {
    auto verb = model::parse_verb(o.verb.text);
    if (!verb) {
      error("E008", "unknown verb '" + o.verb.text + "'", o.verb.span);
      return std::nullopt;
    }
    const auto& sig = model::signature(*verb);
    model::ActionSpec spec;
    spec.verb = *verb;
    bool ok = true;
    auto bad = [&](const std::string& message, const SourceSpan& span) {
      error("E028", message, span);
      ok = false;
    };

    std::optional<FieldKind> target_kind;
    model::IdSet seen;
    for (const auto& a : o.args) {
      auto spec_it = std::find_if(sig.params.begin(), sig.params.end(),
                                  [&](const model::ParamSpec& p) { return p.name == a.name.text; });
      if (spec_it == sig.params.end()) {
        bad(std::string(sig.spelling) + " takes no argument '" + a.name.text + "'", a.name.span);
        continue;
      }
      if (!seen.insert(a.name.text).second) {
        bad("argument '" + a.name.text + "' given twice", a.name.span);
        continue;
      }
      const auto& ps = *spec_it;
      auto v = value(a.value, ps.shape == model::ParamShape::TargetLiteral);
      if (!v) {
        ok = false;
        continue;
      }
      switch (ps.shape) {
        case model::ParamShape::InstanceOf:
          if (v->literal || v->kind.tag != KindTag::Reference || v->kind.target != ps.type ||
              std::get<model::PathOperand>(v->operand).count) {
            bad("argument '" + a.name.text + "' must name a " + std::string(ps.type), a.value.span);
          }
          break;
        case model::ParamShape::IntLiteral: {
          const auto* lit = std::get_if<model::Literal>(&v->operand);
          const auto* n = lit ? std::get_if<std::int64_t>(lit) : nullptr;
          if (!n || *n < 0) bad("argument '" + a.name.text + "' must be a non-negative integer", a.value.span);
          break;
        }
        case model::ParamShape::FieldTarget: {
          const auto* p = std::get_if<model::PathOperand>(&v->operand);
          if (!p || p->count || p->path.segments.empty() || v->kind.tag == KindTag::Reference) {
            bad("argument '" + a.name.text + "' must be a path to a scalar field", a.value.span);
          } else {
            target_kind = v->kind;
          }
          break;
        }
        case model::ParamShape::TargetLiteral:
          if (!v->literal) bad("argument '" + a.name.text + "' must be a literal", a.value.span);
          break;
      }
      spec.params.push_back({a.name.text, v->operand});
    }
    for (const auto& p : sig.params) {
      if (!seen.contains(p.name)) bad(std::string(sig.spelling) + " needs argument '" + std::string(p.name) + "'", o.verb.span);
    }
    if (!ok) return std::nullopt;
    if (*verb == model::Verb::SetField) {
      auto value_arg = std::find_if(o.args.begin(), o.args.end(), [](const RawArg& a) { return a.name.text == "value"; });
      auto v = value(value_arg->value, true);
      if (!fits(*target_kind, *v, value_arg->value.span, "E028")) return std::nullopt;
    }

    for (const auto& w : o.writes) {
      if (!has_type(w.text)) {
        error("E031", "unknown resource type '" + w.text + "'", w.span);
        ok = false;
      }
      spec.writes.insert(w.text);
    }
    if (!ok) return std::nullopt;
    spec.reads = model::derive_action_reads(types_, spec.params);
    for (const auto& need : model::required_writes(types_, spec)) {
      if (!spec.writes.contains(need)) {
        error("E047", std::string(sig.spelling) + " modifies " + need + " but writes does not list it",
              cover(o.writes.front().span, o.writes.back().span));
        return std::nullopt;
      }
    }
    return spec;
  }

  void operation(const RawOperation& o) {
    if (!claim(o.id, out_.operations.contains(o.id.text) || base_.operations.contains(o.id.text),
               "operation")) {
      return;
    }
    bool ok = true;
    if (!out_.ofrs.contains(o.ofr.text)) {
      if (payload_ && base_.ofrs.contains(o.ofr.text)) {
        error("E050", "injected operations must belong to injected requirements", o.ofr.span);
      } else {
        error("E025", "unknown operational requirement '" + o.ofr.text + "'", o.ofr.span);
      }
      ok = false;
    }
    model::Rule rule;
    for (const auto& c : o.conditions) {
      if (auto cond = condition(c)) {
        rule.conditions.push_back(std::move(*cond));
      } else {
        ok = false;
      }
    }
    auto spec = action(o);
    if (!ok || !spec) return;
    model::Operation op{o.id.text, o.ofr.text, std::move(rule), std::move(*spec), {}};
    op.links = model::derive_links(types_, op.rule, op.action);
    out_.operations.emplace(op.id, std::move(op));
    out_.spans.emplace("operation:" + o.id.text, o.id.span);
  }

  void derive_ofr_resources(const RawModel&) {
    for (const auto& id : derived_) {
      auto& ofr = out_.ofrs.at(id);
      for (const auto& [op_id, op] : out_.operations) {
        if (op.ofr != id) continue;
        for (const auto& [type, access] : op.links) ofr.resources.insert(type);
      }
    }
  }

  const model::ModelBundle& base_;
  bool payload_;
  std::vector<Diagnostic>& diags_;
  model::ModelBundle out_;
  model::ResourceModel types_;
  model::IdSet known_requirements_;
  model::IdSet derived_;
};

}  // namespace

model::ModelBundle resolve(const RawModel& raw, const model::ModelBundle& base, bool payload,
                           std::vector<Diagnostic>& diagnostics) {
  return Resolver(base, payload, diagnostics).run(raw);
}

void check_consistency(const model::ModelBundle& bundle, const SourceSpan& fallback,
                       std::vector<Diagnostic>& diagnostics) {
  for (const auto& issue : model::check_invariants(bundle)) {
    auto it = bundle.spans.find(issue.subject);
    diagnostics.push_back(
        {Severity::Error, issue.code, issue.message, it == bundle.spans.end() ? fallback : it->second});
  }
}

}  // namespace fairadapt::dsl

#include "fairadapt/dsl/serializer.hpp"

#include <sstream>

#include "fairadapt/model/verbs.hpp"

namespace fairadapt::dsl {
namespace {

template <typename Range>
std::string join(const Range& ids, const char* sep = ", ") {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += sep;
    out += id;
  }
  return out;
}

std::string kind_source(const model::FieldKind& k) {
  switch (k.tag) {
    case model::KindTag::Integer: return "integer";
    case model::KindTag::Boolean: return "boolean";
    case model::KindTag::Text: return "text";
    case model::KindTag::Time: return "time";
    case model::KindTag::Enum: return "enum(" + join(k.enum_values) + ")";
    case model::KindTag::Reference: return "ref " + k.target;
    case model::KindTag::SetOf: return "set " + k.target;
  }
  return "?";
}

}  // namespace

std::string quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string to_source(const model::Literal& literal) {
  struct Visitor {
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return quote(s); }
    std::string operator()(const model::Symbol& s) const { return s.name; }
    std::string operator()(model::TimeOfDay t) const { return model::format_time(t); }
  };
  return std::visit(Visitor{}, literal);
}

std::string to_source(const model::Operand& operand) {
  if (const auto* lit = std::get_if<model::Literal>(&operand)) return to_source(*lit);
  const auto& p = std::get<model::PathOperand>(operand);
  return p.count ? "count(" + p.path.str() + ")" : p.path.str();
}

std::string serialize(const model::ModelBundle& b) {
  std::ostringstream out;
  out << "# fairadapt model\n";
  if (!b.stakeholders.empty()) out << "\n";
  for (const auto& [id, s] : b.stakeholders) {
    out << "stakeholder " << id << " " << quote(s.name) << " kind = " << model::to_string(s.kind) << "\n";
  }
  for (const auto& [id, r] : b.resources) {
    out << "\nresource " << id << " {\n";
    for (const auto& f : r.fields) out << "  " << f.name << ": " << kind_source(f.kind) << ";\n";
    out << "}\n";
  }
  if (!b.requirements.empty()) out << "\n";
  for (const auto& [id, fr] : b.requirements) {
    out << "requirement " << id << " " << quote(fr.description) << "\n  specified_by = "
        << fr.specified_by << " affects = [" << join(fr.affects) << "] priority = " << fr.priority
        << "\n";
    if (fr.decomposition == model::Decomposition::Leaf) {
      out << "  leaf " << fr.ofr;
      if (auto ofr = b.ofrs.find(fr.ofr); ofr != b.ofrs.end()) {
        out << " resources = [" << join(ofr->second.resources) << "]";
      }
      out << "\n";
    } else {
      out << "  decompose " << model::to_string(fr.decomposition) << " { " << join(fr.children)
          << " }\n";
    }
  }
  for (const auto& [id, op] : b.operations) {
    out << "\noperation " << id << " for " << op.ofr << " {\n  rule: ";
    for (std::size_t i = 0; i < op.rule.conditions.size(); ++i) {
      const auto& c = op.rule.conditions[i];
      if (i) out << " and ";
      out << to_source(model::Operand{c.lhs}) << " " << model::to_string(c.op) << " "
          << to_source(c.rhs);
    }
    out << ";\n  action: " << model::signature(op.action.verb).spelling << "(";
    for (std::size_t i = 0; i < op.action.params.size(); ++i) {
      if (i) out << ", ";
      out << op.action.params[i].name << " = " << to_source(op.action.params[i].value);
    }
    out << ") writes [" << join(op.action.writes) << "];\n}\n";
  }
  return out.str();
}

}  // namespace fairadapt::dsl

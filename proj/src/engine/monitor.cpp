#include "fairadapt/engine/monitor.hpp"

#include <algorithm>

#include "fairadapt/model/queries.hpp"

namespace fairadapt::engine {
namespace {

using model::CmpOp;

sim::Value operand_value(const model::PathOperand& operand, const sim::World& world,
                         const sim::Bindings& bindings) {
  auto v = sim::evaluate_path(world, bindings, operand.path);
  if (!operand.count) return v;
  const auto* list = std::get_if<std::vector<std::string>>(&v);
  return static_cast<std::int64_t>(list ? list->size() : 0);
}

template <typename T>
bool ordered(const T& l, CmpOp op, const T& r) {
  switch (op) {
    case CmpOp::Lt: return l < r;
    case CmpOp::Le: return l <= r;
    case CmpOp::Gt: return l > r;
    case CmpOp::Ge: return l >= r;
    case CmpOp::Eq: return l == r;
    case CmpOp::Ne: return l != r;
  }
  return false;
}

bool compare(const sim::Value& l, CmpOp op, const sim::Value& r, const model::FieldKind& kind) {
  if (l.index() != r.index()) return op == CmpOp::Ne;
  if (const auto* a = std::get_if<std::int64_t>(&l)) return ordered(*a, op, std::get<std::int64_t>(r));
  if (const auto* a = std::get_if<bool>(&l)) return ordered(*a, op, std::get<bool>(r));
  if (const auto* a = std::get_if<std::string>(&l)) {
    const auto& b = std::get<std::string>(r);
    if (kind.tag == model::KindTag::Enum) {
      auto index = [&](const std::string& s) {
        return std::find(kind.enum_values.begin(), kind.enum_values.end(), s) -
               kind.enum_values.begin();
      };
      return ordered(index(*a), op, index(b));
    }
    return ordered(*a, op, b);
  }
  // unset references, or sets compared as a whole
  if (op == CmpOp::Eq) return l == r;
  if (op == CmpOp::Ne) return l != r;
  return false;
}

void collect_roots(const model::Operand& operand, model::IdSet& out) {
  if (const auto* p = std::get_if<model::PathOperand>(&operand)) out.insert(p->path.root);
}

}  // namespace

model::IdSet required_roots(const model::Operation& op) {
  model::IdSet roots;
  for (const auto& c : op.rule.conditions) {
    roots.insert(c.lhs.path.root);
    collect_roots(c.rhs, roots);
  }
  for (const auto& p : op.action.params) collect_roots(p.value, roots);
  return roots;
}

bool evaluate_rule(const model::Rule& rule, const sim::World& world, const sim::Bindings& bindings) {
  for (const auto& c : rule.conditions) {
    auto lhs = operand_value(c.lhs, world, bindings);
    auto kind = c.lhs.count ? model::FieldKind::integer()
                            : model::resolve_path(world.schema(), c.lhs.path);
    sim::Value rhs;
    if (const auto* p = std::get_if<model::PathOperand>(&c.rhs)) {
      rhs = operand_value(*p, world, bindings);
    } else {
      rhs = sim::to_value(std::get<model::Literal>(c.rhs));
    }
    if (!compare(lhs, c.op, rhs, kind)) return false;
  }
  return true;
}

MonitorResult monitor(std::size_t event, const sim::Bindings& bindings, const sim::World& world,
                      const model::ModelBundle& bundle) {
  MonitorResult out;
  for (const auto& [id, op] : bundle.operations) {
    auto roots = required_roots(op);
    bool bound = std::all_of(roots.begin(), roots.end(),
                             [&](const std::string& r) { return bindings.contains(r); });
    if (!bound) {
      out.unbound.push_back(id);
      continue;
    }
    RuleEvaluation e{id, event, world.clock(), false, {}, {}};
    for (const auto& r : roots) e.bindings.emplace(r, bindings.find(r)->second);
    try {
      e.result = evaluate_rule(op.rule, world, bindings);
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
    out.evaluations.push_back(std::move(e));
  }
  return out;
}

}  // namespace fairadapt::engine

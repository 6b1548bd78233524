#include "fairadapt/model/invariants.hpp"

#include <algorithm>

#include "fairadapt/model/errors.hpp"
#include "fairadapt/model/queries.hpp"

namespace fairadapt::model {
namespace {

std::string join(const IdSet& ids) {
  std::string out = "{";
  for (const auto& id : ids) {
    if (out.size() > 1) out += ", ";
    out += id;
  }
  return out + "}";
}

class Checker {
 public:
  explicit Checker(const ModelBundle& b) : b_(b) {}

  std::vector<Issue> run() {
    stakeholders();
    forest_shape();
    leaves();
    operations();
    std::stable_sort(issues_.begin(), issues_.end(), [](const Issue& x, const Issue& y) {
      return std::tie(x.subject, x.code) < std::tie(y.subject, y.code);
    });
    return std::move(issues_);
  }

 private:
  void add(std::string code, std::string subject, std::string message) {
    issues_.push_back({std::move(code), std::move(message), std::move(subject)});
  }

  void check_party(const std::string& subject, const std::string& specified_by,
                   const IdSet& affects) {
    if (!b_.stakeholders.contains(specified_by)) {
      add("E020", subject, "unknown stakeholder '" + specified_by + "'");
    }
    for (const auto& s : affects) {
      if (!b_.stakeholders.contains(s)) add("E020", subject, "unknown stakeholder '" + s + "'");
    }
  }

  void stakeholders() {
    for (const auto& [id, s] : b_.stakeholders) {
      if (s.name.empty()) add("E053", "stakeholder:" + id, "stakeholder name is empty");
    }
  }

  void forest_shape() {
    std::map<std::string, int, std::less<>> parents;
    for (const auto& [id, fr] : b_.requirements) {
      const std::string subject = "requirement:" + id;
      check_party(subject, fr.specified_by, fr.affects);
      if (fr.decomposition == Decomposition::Leaf) continue;
      if (fr.children.empty()) add("E048", subject, "decomposition of '" + id + "' has no children");
      for (const auto& c : fr.children) {
        if (!b_.requirements.contains(c)) {
          add("E024", subject, "unknown child requirement '" + c + "'");
          continue;
        }
        if (++parents[c] == 2) {
          add("E042", "requirement:" + c, "requirement '" + c + "' has more than one parent");
        }
      }
    }
    Forest forest(b_);
    for (const auto& [id, fr] : b_.requirements) {
      auto chain = forest.ancestry(id);
      auto top = forest.parent(chain.back());
      if (top && *top == id) {
        add("E041", "requirement:" + id, "requirement '" + id + "' is part of a cycle");
      }
    }
  }

  void leaves() {
    std::map<std::string, int, std::less<>> uses;
    for (const auto& [id, fr] : b_.requirements) {
      if (fr.decomposition != Decomposition::Leaf) continue;
      const std::string subject = "requirement:" + id;
      auto ofr = b_.ofrs.find(fr.ofr);
      if (ofr == b_.ofrs.end()) {
        add("E025", subject, "unknown operational requirement '" + fr.ofr + "'");
        continue;
      }
      if (++uses[fr.ofr] == 2) {
        add("E049", subject, "operational requirement '" + fr.ofr + "' is used by several leaves");
      }
      if (ofr->second.specified_by != fr.specified_by || ofr->second.affects != fr.affects) {
        add("E054", subject, "leaf and operational requirement disagree on stakeholders");
      }
      bool has_op = std::any_of(b_.operations.begin(), b_.operations.end(),
                                [&](const auto& kv) { return kv.second.ofr == fr.ofr; });
      if (!has_op) add("E043", subject, "leaf '" + id + "' has no operation");
    }
    for (const auto& [id, ofr] : b_.ofrs) {
      const std::string subject = "ofr:" + id;
      check_party(subject, ofr.specified_by, ofr.affects);
      if (!uses.contains(id)) {
        add("E052", subject, "operational requirement '" + id + "' is not attached to a leaf");
      }
      IdSet derived;
      for (const auto& [op_id, op] : b_.operations) {
        if (op.ofr != id) continue;
        for (const auto& [type, access] : op.links) derived.insert(type);
      }
      if (derived != ofr.resources) {
        add("E040", subject,
            "declared resources " + join(ofr.resources) + " differ from operation links " +
                join(derived));
      }
    }
  }

  void operations() {
    for (const auto& [id, op] : b_.operations) {
      const std::string subject = "operation:" + id;
      if (!b_.ofrs.contains(op.ofr)) {
        add("E025", subject, "unknown operational requirement '" + op.ofr + "'");
      }
      if (op.rule.conditions.empty()) add("E015", subject, "rule has no conditions");
      try {
        if (derive_links(b_.resources, op.rule, op.action) != op.links) {
          add("E055", subject, "operation links do not match its rule and action");
        }
      } catch (const ModelError& e) {
        add("E021", subject, e.what());
      }
    }
  }

  const ModelBundle& b_;
  std::vector<Issue> issues_;
};

}  // namespace

std::vector<Issue> check_invariants(const ModelBundle& bundle) { return Checker(bundle).run(); }

ModelBundle inject(const ModelBundle& base, const ModelBundle& fragment, std::string_view parent) {
  ModelBundle out = base;
  out.stakeholders.insert(fragment.stakeholders.begin(), fragment.stakeholders.end());
  out.resources.insert(fragment.resources.begin(), fragment.resources.end());
  out.requirements.insert(fragment.requirements.begin(), fragment.requirements.end());
  out.ofrs.insert(fragment.ofrs.begin(), fragment.ofrs.end());
  out.operations.insert(fragment.operations.begin(), fragment.operations.end());
  out.spans.insert(fragment.spans.begin(), fragment.spans.end());
  if (parent.empty()) return out;

  auto target = out.requirements.find(parent);
  if (target == out.requirements.end() || target->second.decomposition == Decomposition::Leaf) {
    throw ModelError(ErrorCode::InvalidModel, std::string(parent),
                     "cannot attach requirements under '" + std::string(parent) + "'");
  }
  Forest inner(fragment);
  for (const auto& root : inner.roots()) target->second.children.push_back(root);
  return out;
}

ModelBundle retire(const ModelBundle& base, std::string_view requirement) {
  ModelBundle out = base;
  Forest forest(base);
  const std::string node = forest.node(requirement);
  auto parent = forest.parent(node);
  IdSet dropped_ofrs;
  for (const auto& n : forest.subtree(node)) {
    auto it = out.requirements.find(n);
    if (it == out.requirements.end()) continue;
    if (it->second.decomposition == Decomposition::Leaf) dropped_ofrs.insert(it->second.ofr);
    out.spans.erase("requirement:" + n);
    out.requirements.erase(it);
  }
  for (const auto& ofr : dropped_ofrs) {
    out.ofrs.erase(ofr);
    out.spans.erase("ofr:" + ofr);
  }
  std::erase_if(out.operations, [&](const auto& kv) {
    if (!dropped_ofrs.contains(kv.second.ofr)) return false;
    out.spans.erase("operation:" + kv.first);
    return true;
  });
  if (parent) {
    auto& children = out.requirements.at(*parent).children;
    std::erase(children, node);
  }
  return out;
}

}  // namespace fairadapt::model

#pragma once

// Brute-force reference implementations used to cross-check the engine.
// They walk the raw bundle maps and share no code with the library.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fairadapt/model/types.hpp"

namespace fairadapt::oracle {

using model::Access;
using model::Decomposition;
using model::ModelBundle;
using model::NodeStatus;

inline std::map<std::string, std::string> parents(const ModelBundle& b) {
  std::map<std::string, std::string> out;
  for (const auto& [id, fr] : b.requirements) {
    for (const auto& c : fr.children) out[c] = id;
  }
  return out;
}

inline void collect_ops(const ModelBundle& b, const std::string& node, std::set<std::string>& out) {
  const auto& fr = b.requirements.at(node);
  if (fr.decomposition == Decomposition::Leaf) {
    for (const auto& [id, op] : b.operations) {
      if (op.ofr == fr.ofr) out.insert(id);
    }
    return;
  }
  for (const auto& c : fr.children) collect_ops(b, c, out);
}

inline std::vector<std::string> chain(const ModelBundle& b, std::string node) {
  auto p = parents(b);
  std::vector<std::string> out{node};
  while (p.contains(node)) {
    node = p.at(node);
    out.push_back(node);
  }
  return out;
}

/// "same" / "and" / "or" / "none"
inline std::string relation(const ModelBundle& b, const std::string& x, const std::string& y) {
  auto cx = chain(b, x), cy = chain(b, y);
  if (std::find(cx.begin(), cx.end(), y) != cx.end() || std::find(cy.begin(), cy.end(), x) != cy.end()) return "same";
  for (const auto& n : cx) {
    if (std::find(cy.begin(), cy.end(), n) != cy.end()) {
      return b.requirements.at(n).decomposition == Decomposition::And ? "and" : "or";
    }
  }
  return "none";
}

struct Edge {
  std::string a, b;
  std::set<std::string> shared, overlap;
  bool likely = false;
  std::set<std::tuple<std::string, std::string, std::string>> evidence;

  bool operator==(const Edge&) const = default;
};

inline bool touches_conflicting(const ModelBundle& b, const std::string& x, const std::string& y, const std::string& r) {
  const auto& lx = b.operations.at(x).links;
  const auto& ly = b.operations.at(y).links;
  if (!lx.contains(r) || !ly.contains(r)) return false;
  return lx.at(r) == Access::Write || ly.at(r) == Access::Write;
}

inline std::vector<Edge> conflicts(const ModelBundle& b) {
  std::vector<Edge> out;
  for (const auto& [fa, ra] : b.requirements) {
    for (const auto& [fb, rb] : b.requirements) {
      if (!(fa < fb)) continue;
      std::set<std::string> oa, ob;
      collect_ops(b, fa, oa);
      collect_ops(b, fb, ob);
      Edge e{fa, fb, {}, {}, false, {}};
      for (const auto& x : oa) {
        for (const auto& y : ob) {
          for (const auto& [r, access] : b.operations.at(x).links) {
            if (touches_conflicting(b, x, y, r)) e.evidence.insert({x, y, r});
          }
        }
      }
      // shared resources are computed on the union of links, where a write
      // anywhere in the subtree dominates
      std::map<std::string, bool> wa, wb;
      for (const auto& x : oa) {
        for (const auto& [r, acc] : b.operations.at(x).links) wa[r] = wa[r] || acc == Access::Write;
      }
      for (const auto& y : ob) {
        for (const auto& [r, acc] : b.operations.at(y).links) wb[r] = wb[r] || acc == Access::Write;
      }
      for (const auto& [r, w] : wa) {
        if (wb.contains(r) && (w || wb.at(r))) e.shared.insert(r);
      }
      if (e.shared.empty()) continue;
      std::set_intersection(ra.affects.begin(), ra.affects.end(), rb.affects.begin(), rb.affects.end(),
                            std::inserter(e.overlap, e.overlap.begin()));
      auto rel = relation(b, fa, fb);
      e.likely = rel == "or" || rel == "none";
      out.push_back(std::move(e));
    }
  }
  return out;
}

inline NodeStatus propagate(const ModelBundle& b, const std::string& node, const std::map<std::string, NodeStatus>& leaves) {
  const auto& fr = b.requirements.at(node);
  if (fr.decomposition == Decomposition::Leaf) {
    auto it = leaves.find(fr.ofr);
    return it == leaves.end() ? NodeStatus::Idle : it->second;
  }
  std::vector<NodeStatus> kids;
  for (const auto& c : fr.children) kids.push_back(propagate(b, c, leaves));
  auto count = [&](NodeStatus s) { return std::count(kids.begin(), kids.end(), s); };
  auto n = static_cast<long>(kids.size());
  if (fr.decomposition == Decomposition::And ? count(NodeStatus::Violated) > 0 : count(NodeStatus::Violated) == n) {
    return NodeStatus::Violated;
  }
  return count(NodeStatus::Fulfilled) > 0 ? NodeStatus::Fulfilled : NodeStatus::Idle;
}

/// Distinct fulfilled requirements g that count against `op` when repairing `target`.
inline int score(const ModelBundle& b, const std::string& target, const std::string& op,
                 const std::map<std::string, NodeStatus, std::less<>>& statuses) {
  std::set<std::string> hit;
  for (const auto& [g, fr] : b.requirements) {
    auto st = statuses.find(g);
    if (st == statuses.end() || st->second != NodeStatus::Fulfilled) continue;
    auto rel = relation(b, target, g);
    if (rel != "or" && rel != "none") continue;
    std::set<std::string> ops;
    collect_ops(b, g, ops);
    for (const auto& [r, acc] : b.operations.at(op).links) {
      if (acc != Access::Write) continue;
      for (const auto& y : ops) {
        if (b.operations.at(y).links.contains(r)) hit.insert(g);
      }
    }
  }
  return static_cast<int>(hit.size());
}

}  // namespace fairadapt::oracle

#include <gtest/gtest.h>

#include "fairadapt/engine/analysis.hpp"
#include "fairadapt/engine/conflicts.hpp"
#include "fairadapt/engine/executor.hpp"
#include "fairadapt/engine/monitor.hpp"
#include "fairadapt/engine/planner.hpp"
#include "fixtures.hpp"

using namespace fairadapt;
using namespace fairadapt::engine;
using model::NodeStatus;
using fairadapt::testing::event_at;
using fairadapt::testing::full_model;

namespace {

struct EngineFixture : ::testing::Test {
  model::ModelBundle bundle = full_model();
  sim::World world = fairadapt::testing::empty_world(bundle);

  void SetUp() override {
    world.create({"Shopper", "ann"}, {{"age", std::int64_t{40}}}, nullptr);
    world.create({"Item", "bread"}, {{"stock", std::int64_t{100}}}, nullptr);
    world.create({"Item", "mask"}, {{"category", std::string("health")}, {"stock", std::int64_t{100}}}, nullptr);
  }

  sim::EventResult stage(sim::Day day, int minutes, sim::EventKind kind, std::string item = "bread") {
    return sim::stage_event(world, event_at(day, minutes, kind, "ann", item));
  }

  std::map<std::string, bool> results(const MonitorResult& m) {
    std::map<std::string, bool> out;
    for (const auto& e : m.evaluations) out[e.operation] = e.result;
    return out;
  }

  const ConflictEdge* edge(const std::vector<ConflictEdge>& edges, const std::string& a, const std::string& b) {
    for (const auto& e : edges) {
      if (e.a == a && e.b == b) return &e;
    }
    return nullptr;
  }
};

}  // namespace

TEST_F(EngineFixture, MonitorAfternoonIsFalse) {
  auto staged = stage(sim::Day::Mon, 15 * 60, sim::EventKind::AddItem);
  auto r = results(monitor(0, staged.bindings, world, bundle));
  EXPECT_FALSE(r.at("OR1_1"));
  EXPECT_FALSE(r.at("OR1_2"));
}

TEST_F(EngineFixture, MonitorMorningIsTrue) {
  auto staged = stage(sim::Day::Mon, 11 * 60, sim::EventKind::AddItem);
  auto m = monitor(0, staged.bindings, world, bundle);
  auto r = results(m);
  EXPECT_TRUE(r.at("OR1_1"));
  EXPECT_TRUE(r.at("OR1_2"));
  EXPECT_FALSE(r.at("OR2_1"));
  EXPECT_FALSE(r.at("OR3_1"));
  for (const auto& e : m.evaluations) {
    if (e.operation == "OR1_2") EXPECT_EQ(e.bindings, (sim::Bindings{{"Clock", "clock"}, {"Shopper", "ann"}}));
  }
}

TEST_F(EngineFixture, MonitorBoundaryAndWeekend) {
  auto at_ten = stage(sim::Day::Tue, 10 * 60, sim::EventKind::AddItem);
  EXPECT_FALSE(results(monitor(0, at_ten.bindings, world, bundle)).at("OR1_1"));
  auto saturday = stage(sim::Day::Sat, 11 * 60, sim::EventKind::AddItem);
  EXPECT_FALSE(results(monitor(0, saturday.bindings, world, bundle)).at("OR1_1"));
}

TEST_F(EngineFixture, Monitor21ItemBasketAtCheckout) {
  for (int i = 0; i < 21; ++i) stage(sim::Day::Mon, 16 * 60, sim::EventKind::AddItem);
  auto staged = stage(sim::Day::Mon, 17 * 60, sim::EventKind::Checkout);
  auto m = monitor(0, staged.bindings, world, bundle);
  auto r = results(m);
  EXPECT_TRUE(r.at("OR2_1"));
  EXPECT_FALSE(r.contains("OR3_1"));  // checkout binds no Item
  EXPECT_NE(std::find(m.unbound.begin(), m.unbound.end(), "OR3_1"), m.unbound.end());
}

TEST_F(EngineFixture, TickBindsNothingButClock) {
  auto staged = stage(sim::Day::Mon, 60, sim::EventKind::Tick);
  auto m = monitor(0, staged.bindings, world, bundle);
  EXPECT_TRUE(m.evaluations.empty());
  EXPECT_EQ(m.unbound.size(), bundle.operations.size());
}

TEST_F(EngineFixture, RequiredRoots) {
  EXPECT_EQ(required_roots(bundle.operations.at("OR1_1")), (model::IdSet{"Clock", "Order", "Shopper"}));
  EXPECT_EQ(required_roots(bundle.operations.at("OR3_1")), (model::IdSet{"Item", "Order"}));
}

TEST_F(EngineFixture, ConflictsOnBundledModel) {
  auto edges = detect_conflicts(bundle);
  auto* e13 = edge(edges, "FR1", "FR3");
  ASSERT_TRUE(e13);
  EXPECT_TRUE(e13->shared.contains("Order"));
  EXPECT_EQ(e13->overlap, (model::IdSet{"Shoppers"}));
  EXPECT_EQ(e13->severity, Severity::Likely);
  auto* e23 = edge(edges, "FR2", "FR3");
  ASSERT_TRUE(e23);
  EXPECT_EQ(e23->severity, Severity::Likely);
  auto* or_pair = edge(edges, "OFR1_1", "OFR1_2");
  ASSERT_TRUE(or_pair);
  EXPECT_EQ(or_pair->severity, Severity::Likely);
  EXPECT_EQ(edge(edges, "FR0", "FR1")->severity, Severity::Discounted);
  EXPECT_FALSE(edge(edges, "FR0", "FR3"));  // Shopper vs Item/Order
  for (const auto& e : edges) EXPECT_LT(e.a, e.b);
}

TEST_F(EngineFixture, RuntimeConflictsFilterByStatus) {
  auto edges = detect_conflicts(bundle);
  model::IdMap<NodeStatus> statuses;
  for (const auto& [id, fr] : bundle.requirements) statuses[id] = NodeStatus::Fulfilled;
  EXPECT_TRUE(runtime_conflicts(edges, statuses).empty());
  statuses["FR2"] = NodeStatus::ConflictExplained;
  for (const auto& e : runtime_conflicts(edges, statuses)) {
    EXPECT_TRUE(e.a == "FR2" || e.b == "FR2");
    EXPECT_EQ(e.severity, Severity::Likely);
  }
}

TEST_F(EngineFixture, AnalyseRulesTrueNothingApplied) {
  std::vector<RuleEvaluation> evals;
  for (const char* op : {"OR1_1", "OR1_2", "OR3_1"}) evals.push_back({op, 0, {}, true, {}, {}});
  auto a = analyse(evals, {}, bundle, detect_conflicts(bundle));
  EXPECT_EQ(a.statuses.at("FR1"), NodeStatus::Violated);
  EXPECT_EQ(a.statuses.at("FR3"), NodeStatus::Violated);
  EXPECT_EQ(a.statuses.at("FR2"), NodeStatus::Idle);
  EXPECT_EQ(a.targets, (std::vector<std::string>{"FR3", "FairService"}));
}

TEST_F(EngineFixture, AnalyseConflictExplained) {
  std::vector<RuleEvaluation> evals{{"OR2_1", 0, {}, true, {}, {}}, {"OR3_1", 0, {}, true, {}, {}}};
  std::vector<sim::ActionOutcome> executed{{"OR3_1", model::Verb::ExemptItem, true, {}, {}},
                                           {"OR2_1", model::Verb::CapBasket, false, "exempt", {}}};
  auto a = analyse(evals, executed, bundle, detect_conflicts(bundle));
  EXPECT_EQ(a.statuses.at("FR3"), NodeStatus::Fulfilled);
  EXPECT_EQ(a.statuses.at("FR2"), NodeStatus::ConflictExplained);
  ASSERT_FALSE(a.explained.at("FR2").empty());
  EXPECT_EQ(a.explained.at("FR2").front().by, "FR3");
  EXPECT_EQ(a.explained.at("FR2").front().priority, 0);
  EXPECT_TRUE(a.targets.empty());
}

TEST_F(EngineFixture, AnalyseAllFalseIsIdle) {
  std::vector<RuleEvaluation> evals;
  for (const auto& [id, op] : bundle.operations) evals.push_back({id, 0, {}, false, {}, {}});
  auto a = analyse(evals, {}, bundle, detect_conflicts(bundle));
  for (const auto& [id, s] : a.statuses) EXPECT_EQ(s, NodeStatus::Idle) << id;
  EXPECT_TRUE(a.targets.empty());
}

TEST_F(EngineFixture, PlanPrefersRedirect) {
  model::IdMap<NodeStatus> statuses{{"FR3", NodeStatus::Fulfilled}, {"FR1", NodeStatus::Violated},
                                    {"OFR1_1", NodeStatus::Violated}, {"OFR1_2", NodeStatus::Violated}};
  EXPECT_EQ(score(bundle, "FR1", "OR1_1", statuses), 1);
  EXPECT_EQ(score(bundle, "FR1", "OR1_2", statuses), 0);
  auto p = plan(bundle, "FR1", statuses);
  EXPECT_EQ(p.chosen, (std::vector<std::string>{"OR1_2"}));
  EXPECT_EQ(p.scores.at("OR1_1"), 1);
  EXPECT_EQ(p.scores.at("OR1_2"), 0);
  ASSERT_EQ(p.rejected.size(), 1u);
  EXPECT_EQ(p.rejected[0].operation, "OR1_1");
  EXPECT_EQ(p.rejected[0].reason, "alternative_branch");  // decided at the OR node
  ASSERT_FALSE(p.choices.empty());
  EXPECT_EQ(p.choices[0].node, "FR1");
  EXPECT_EQ(p.choices[0].chosen, "OFR1_2");
}

TEST_F(EngineFixture, PlanWithoutFulfilledNeighboursBreaksTieByWrites) {
  model::IdMap<NodeStatus> statuses{{"FR1", NodeStatus::Violated}};
  auto p = plan(bundle, "FR1", statuses);
  EXPECT_EQ(p.scores.at("OR1_1"), 0);
  EXPECT_EQ(p.chosen, (std::vector<std::string>{"OR1_1"}));  // both write one type; id decides
  EXPECT_EQ(p.rejected.at(0).reason, "alternative_branch");
}

TEST_F(EngineFixture, LeafRejectionReasons) {
  // two alternatives on one leaf: the reason names the deciding key
  auto second = bundle.operations.at("OR2_1");
  second.id = "OR2_2";
  second.action.writes.insert("Item");
  second.links["Item"] = model::Access::Write;
  bundle.operations.emplace("OR2_2", second);
  auto p = plan(bundle, "FR2", {{"FR2", NodeStatus::Violated}});
  EXPECT_EQ(p.chosen, (std::vector<std::string>{"OR2_1"}));
  EXPECT_EQ(p.rejected.at(0).reason, "more_writes");
  p = plan(bundle, "FR2", {{"FR2", NodeStatus::Violated}, {"FR3", NodeStatus::Fulfilled}});
  EXPECT_EQ(p.rejected.at(0).reason, "more_writes");  // both score 1
  bundle.operations.at("OR2_2").action.writes = {"Order"};
  bundle.operations.at("OR2_2").links.erase("Item");
  p = plan(bundle, "FR2", {{"FR2", NodeStatus::Violated}});
  EXPECT_EQ(p.rejected.at(0).reason, "tie_id");
}

TEST_F(EngineFixture, PlanSingleCandidateRegardlessOfScore) {
  model::IdMap<NodeStatus> statuses{{"FR3", NodeStatus::Fulfilled}, {"FR2", NodeStatus::Violated}};
  auto p = plan(bundle, "FR2", statuses);
  EXPECT_EQ(p.chosen, (std::vector<std::string>{"OR2_1"}));
  EXPECT_EQ(p.scores.at("OR2_1"), 1);
  EXPECT_TRUE(p.rejected.empty());
}

TEST_F(EngineFixture, PlanWithoutOperationThrows) {
  bundle.operations.erase("OR2_1");
  EXPECT_THROW(plan(bundle, "FR2", {{"FR2", NodeStatus::Violated}}), model::ModelError);
}

TEST_F(EngineFixture, ExecuteOrSiblingsRunsOne) {
  auto staged = stage(sim::Day::Thu, 11 * 60, sim::EventKind::AddItem);
  sim::IterationScratch scratch;
  auto x = execute({{"OR1_1", 1}, {"OR1_2", 0}}, world, bundle, staged.bindings, scratch);
  ASSERT_EQ(x.log.size(), 1u);
  EXPECT_EQ(x.log[0].operation, "OR1_2");
  ASSERT_EQ(x.suppressed.size(), 1u);
  EXPECT_EQ(x.suppressed[0].operation, "OR1_1");
  EXPECT_EQ(x.suppressed[0].kept, "OR1_2");
}

TEST_F(EngineFixture, ExecuteRemoveBeforeRedirect) {
  bundle.requirements.at("FR1").decomposition = model::Decomposition::And;
  auto staged = stage(sim::Day::Thu, 11 * 60, sim::EventKind::AddItem);
  sim::IterationScratch scratch;
  auto x = execute({{"OR1_2", 0}, {"OR1_1", 1}}, world, bundle, staged.bindings, scratch);
  ASSERT_EQ(x.log.size(), 2u);
  EXPECT_EQ(x.log[0].operation, "OR1_1");
  EXPECT_EQ(x.log[1].operation, "OR1_2");
  EXPECT_TRUE(x.log[0].applied) << x.log[0].reason;
  EXPECT_TRUE(x.log[1].applied) << x.log[1].reason;
}

TEST_F(EngineFixture, ExecuteNothing) {
  auto staged = stage(sim::Day::Thu, 11 * 60, sim::EventKind::AddItem);
  auto before = world;
  sim::IterationScratch scratch;
  auto x = execute({}, world, bundle, staged.bindings, scratch);
  EXPECT_TRUE(x.log.empty());
  EXPECT_EQ(world, before);
}

TEST_F(EngineFixture, ExecuteFailureIsRecorded) {
  auto staged = stage(sim::Day::Thu, 11 * 60, sim::EventKind::AddItem);
  world.set({"Shopper", "ann"}, "status", std::string("redirected"), nullptr);
  sim::IterationScratch scratch;
  auto x = execute({{"OR1_2", 0}}, world, bundle, staged.bindings, scratch);
  ASSERT_EQ(x.log.size(), 1u);
  EXPECT_FALSE(x.log[0].applied);
  EXPECT_EQ(x.log[0].reason, "already_redirected");
}

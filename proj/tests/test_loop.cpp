#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "fairadapt/engine/trace.hpp"
#include "fixtures.hpp"

using namespace fairadapt;
using namespace fairadapt::engine;
using model::NodeStatus;
using fairadapt::testing::event_at;

namespace {

const TraceRecord* find_record(const AdaptationTrace& trace, sim::Day day, int minutes, sim::EventKind kind) {
  for (const auto& r : trace) {
    if (r.event.time == sim::DayTime{day, minutes} && r.event.kind == kind) return &r;
  }
  return nullptr;
}

const RuleEvaluation* evaluation(const TraceRecord& r, const std::string& op) {
  for (const auto& e : r.evaluations) {
    if (e.operation == op) return &e;
  }
  return nullptr;
}

struct Scenario : ::testing::Test {
  static const RunResult& result() {
    static const RunResult r = fairadapt::testing::run_week_scenario();
    return r;
  }
};

}  // namespace

TEST_F(Scenario, GoldenTrace) {
  auto ndjson = to_ndjson(result().trace);
  std::string golden_path = std::string(FAIRADAPT_GOLDEN_DIR) + "/supermarket_week.ndjson";
  if (const char* update = std::getenv("FAIRADAPT_UPDATE_GOLDEN"); update && std::string(update) == "1") {
    std::ofstream(golden_path, std::ios::binary) << ndjson;
  }
  EXPECT_EQ(ndjson, fairadapt::testing::read_text(golden_path));
}

TEST_F(Scenario, Deterministic) {
  auto again = fairadapt::testing::run_week_scenario();
  EXPECT_EQ(to_ndjson(again.trace), to_ndjson(result().trace));
  EXPECT_EQ(again.world, result().world);
}

TEST_F(Scenario, ReplayFromTrace) {
  std::vector<Json> records;
  for (const auto& r : result().trace) records.push_back(Json::parse(to_json(r).dump()));
  auto base = fairadapt::testing::base_model();
  auto events = events_from_trace(records, base);
  ASSERT_TRUE(events.ok());
  auto original = fairadapt::testing::week_timeline(base);
  sim::EventTimeline replay{original.instances, *events.value};
  auto world = sim::initial_world(std::make_shared<const model::ResourceModel>(base.resources), replay.instances);
  auto again = run(replay, base, std::move(world));
  EXPECT_EQ(to_ndjson(again.trace), to_ndjson(result().trace));
}

TEST_F(Scenario, FinalModelIsTheFullModel) {
  EXPECT_EQ(result().bundle, fairadapt::testing::full_model());
  EXPECT_EQ(result().model_version, 4);
}

TEST_F(Scenario, WorldStaysValidAndRecordsApply) {
  EXPECT_TRUE(sim::validate_world(result().world).empty());
  for (std::size_t i = 0; i < result().trace.size(); ++i) {
    EXPECT_EQ(result().trace[i].iteration, i);
    EXPECT_TRUE(result().trace[i].errors.empty()) << i;
  }
}

TEST_F(Scenario, ElderlyWindowProbes) {
  const auto& trace = result().trace;
  auto* afternoon = find_record(trace, sim::Day::Mon, 15 * 60, sim::EventKind::AddItem);
  ASSERT_TRUE(afternoon);
  EXPECT_FALSE(evaluation(*afternoon, "OR1_1")->result);
  EXPECT_FALSE(evaluation(*afternoon, "OR1_2")->result);
  auto* elder = find_record(trace, sim::Day::Mon, 11 * 60, sim::EventKind::AddItem);
  EXPECT_FALSE(evaluation(*elder, "OR1_2")->result);  // bob is 70

  auto* young = find_record(trace, sim::Day::Thu, 11 * 60, sim::EventKind::AddItem);
  ASSERT_TRUE(young);
  EXPECT_TRUE(evaluation(*young, "OR1_1")->result);
  EXPECT_TRUE(evaluation(*young, "OR1_2")->result);
  bool redirected = false, removed = false;
  for (const auto& a : young->executed) {
    redirected = redirected || (a.operation == "OR1_2" && a.applied);
    removed = removed || a.operation == "OR1_1";
  }
  EXPECT_TRUE(redirected);
  EXPECT_FALSE(removed);
  EXPECT_EQ(young->requirements.at("FR1").status, NodeStatus::Fulfilled);

  auto* after = find_record(trace, sim::Day::Thu, 11 * 60 + 5, sim::EventKind::AddItem);
  ASSERT_TRUE(after);
  EXPECT_EQ(after->event_status, sim::EventStatus::Rejected);
  EXPECT_EQ(after->event_reason, "shopper_redirected");
}

TEST_F(Scenario, BasketCap) {
  auto* r = find_record(result().trace, sim::Day::Tue, 16 * 60 + 20, sim::EventKind::AddItem);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->requirements.at("FR2").status, NodeStatus::Fulfilled);
  int erased = 0;
  for (const auto& d : r->world_diff) erased += d.op == sim::DiffOp::Erase;
  EXPECT_EQ(erased, 1);
}

TEST_F(Scenario, HealthBasketIsConflictExplained) {
  auto* r = find_record(result().trace, sim::Day::Wed, 16 * 60 + 20, sim::EventKind::AddItem);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->requirements.at("FR3").status, NodeStatus::Fulfilled);
  EXPECT_EQ(r->requirements.at("FR2").pre_status, NodeStatus::Violated);
  EXPECT_EQ(r->requirements.at("FR2").status, NodeStatus::ConflictExplained);
  EXPECT_EQ(r->explained.at("FR2").front().by, "FR3");
  EXPECT_TRUE(std::find(r->unresolved.begin(), r->unresolved.end(), "FR2") == r->unresolved.end());
  // the mask is still in dee's basket after checkout
  const auto& items = std::get<std::vector<std::string>>(result().world.get({"Order", "dee_o1"}, "items"));
  EXPECT_EQ(items.size(), 20u);
  EXPECT_EQ(items.back(), "mask");
}

TEST_F(Scenario, InjectionTakesEffectNextIteration) {
  const auto& trace = result().trace;
  std::size_t injected = 0;
  for (const auto& r : trace) {
    if (r.event.kind == sim::EventKind::InjectRequirement && r.event.injection->fragment.operations.contains("OR2_1")) {
      injected = r.iteration;
    }
  }
  ASSERT_GT(injected, 0u);
  for (const auto& r : trace) {
    bool seen = evaluation(r, "OR2_1") ||
                std::find(r.unbound.begin(), r.unbound.end(), "OR2_1") != r.unbound.end();
    EXPECT_EQ(seen, r.iteration > injected) << r.iteration;
  }
  EXPECT_EQ(trace[injected + 1].model_version, trace[injected].model_version + 1);
}

TEST(Loop, EmptyTimeline) {
  auto base = fairadapt::testing::base_model();
  auto world = fairadapt::testing::empty_world(base);
  auto r = run({}, base, world);
  EXPECT_TRUE(r.trace.empty());
  EXPECT_EQ(r.world, world);
}

TEST(Loop, OnlyTicksStayIdle) {
  auto base = fairadapt::testing::base_model();
  sim::EventTimeline t;
  for (int m = 0; m < 5; ++m) t.events.push_back(event_at(sim::Day::Mon, 60 * m, sim::EventKind::Tick));
  auto r = run(t, base, fairadapt::testing::empty_world(base));
  ASSERT_EQ(r.trace.size(), 5u);
  for (const auto& rec : r.trace) {
    EXPECT_TRUE(rec.evaluations.empty());
    EXPECT_TRUE(rec.executed.empty());
    for (const auto& [id, s] : rec.requirements) EXPECT_EQ(s.status, NodeStatus::Idle) << id;
  }
}

TEST(Loop, RetireStopsEvaluation) {
  auto full = fairadapt::testing::full_model();
  auto world = fairadapt::testing::empty_world(full);
  world.create({"Shopper", "x"}, {{"age", std::int64_t{30}}}, nullptr);
  world.create({"Item", "i"}, {{"stock", std::int64_t{9}}}, nullptr);
  sim::EventTimeline t;
  t.events.push_back(event_at(sim::Day::Mon, 600, sim::EventKind::AddItem, "x", "i"));
  auto retire = event_at(sim::Day::Mon, 601, sim::EventKind::RetireRequirement);
  retire.requirement = "FR1";
  t.events.push_back(retire);
  t.events.push_back(event_at(sim::Day::Mon, 602, sim::EventKind::AddItem, "x", "i"));
  auto r = run(t, full, world);
  EXPECT_TRUE(evaluation(r.trace[0], "OR1_1"));
  EXPECT_FALSE(evaluation(r.trace[2], "OR1_1"));
  EXPECT_FALSE(r.bundle.requirements.contains("FR1"));
}

TEST(Trace, NdjsonShape) {
  auto r = fairadapt::testing::run_week_scenario();
  auto text = to_ndjson(r.trace);
  std::istringstream lines(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    auto j = Json::parse(line);
    for (const char* key : {"iteration", "time", "event", "event_status", "model_version", "evaluations", "unbound",
                            "requirements", "conflicts", "targets", "plans", "executed", "world_diff"}) {
      EXPECT_TRUE(j.contains(key)) << key;
    }
    ++n;
  }
  EXPECT_EQ(n, r.trace.size());
  EXPECT_EQ(text.back(), '\n');
}

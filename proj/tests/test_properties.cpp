#include <gtest/gtest.h>

#include <random>

#include "fairadapt/dsl/parser.hpp"
#include "fairadapt/dsl/serializer.hpp"
#include "fairadapt/engine/trace.hpp"
#include "fixtures.hpp"
#include "generator.hpp"
#include "span_check.hpp"

using namespace fairadapt;


TEST(RoundTrip, RandomBundles) {
  std::mt19937_64 rng(424242);
  for (int i = 0; i < 500; ++i) {
    auto b = fairadapt::testing::random_bundle(rng);
    auto text = dsl::serialize(b);
    auto r = dsl::parse_model(text, "gen.frm");
    ASSERT_TRUE(r.ok()) << text << "\n" << (r.diagnostics.empty() ? "" : dsl::format(r.diagnostics[0]));
    ASSERT_EQ(*r.value, b) << text;
    ASSERT_EQ(dsl::serialize(*r.value), text);
  }
}

TEST(SpanLocality, MutatedModels) {
  std::mt19937_64 rng(1337);
  std::vector<std::string> seeds{fairadapt::testing::read_text(fairadapt::testing::data_path("supermarket.frm"))};
  for (int i = 0; i < 20; ++i) seeds.push_back(dsl::serialize(fairadapt::testing::random_bundle(rng)));
  int with_errors = 0;
  for (int i = 0; i < 1500; ++i) {
    auto text = fairadapt::testing::mutate(rng, seeds[static_cast<std::size_t>(i) % seeds.size()]);
    auto r = dsl::parse_model(text, "fuzz.frm");
    with_errors += !r.ok();
    EXPECT_EQ(r.ok(), !dsl::has_errors(r.diagnostics));
    for (const auto& d : r.diagnostics) {
      auto problem = fairadapt::testing::span_problem(d, text, "fuzz.frm");
      ASSERT_TRUE(problem.empty()) << problem << "\n" << dsl::format(d) << "\n" << text;
    }
  }
  EXPECT_GT(with_errors, 500);
}

TEST(SpanLocality, MutatedScenarios) {
  std::mt19937_64 rng(4711);
  auto base = fairadapt::testing::base_model();
  auto seed = fairadapt::testing::read_text(fairadapt::testing::data_path("supermarket_week.scn"));
  for (int i = 0; i < 400; ++i) {
    auto text = fairadapt::testing::mutate(rng, seed);
    auto r = dsl::parse_scenario(text, base, "fuzz.scn");
    for (const auto& d : r.diagnostics) {
      auto problem = fairadapt::testing::span_problem(d, text, "fuzz.scn");
      ASSERT_TRUE(problem.empty()) << problem << "\n" << dsl::format(d);
    }
  }
}

TEST(Loop, RandomShoppingDaysKeepWorldValidAndAreDeterministic) {
  auto full = fairadapt::testing::full_model();
  std::mt19937_64 rng(5);
  const std::vector<std::string> shoppers{"a", "b", "c"};
  const std::vector<std::string> items{"bread", "mask", "milk"};
  for (int round = 0; round < 20; ++round) {
    sim::EventTimeline t;
    for (std::size_t i = 0; i < shoppers.size(); ++i) {
      t.instances.push_back({{"Shopper", shoppers[i]}, {{"age", std::int64_t{20 + 30 * static_cast<int>(i)}}}, {}});
    }
    t.instances.push_back({{"Item", "bread"}, {{"stock", std::int64_t{1000}}}, {}});
    t.instances.push_back({{"Item", "milk"}, {{"stock", std::int64_t{3}}}, {}});
    t.instances.push_back({{"Item", "mask"}, {{"category", std::string("health")}, {"stock", std::int64_t{1000}}}, {}});
    int minute = 8 * 60;
    for (int e = 0; e < 80; ++e) {
      minute += std::uniform_int_distribution<int>(0, 6)(rng);
      auto kind = std::uniform_int_distribution<int>(0, 9)(rng);
      auto who = shoppers[std::uniform_int_distribution<std::size_t>(0, 2)(rng)];
      auto what = items[std::uniform_int_distribution<std::size_t>(0, 2)(rng)];
      auto ev = fairadapt::testing::event_at(sim::Day::Tue, minute, sim::EventKind::AddItem, who, what);
      if (kind == 0) ev.kind = sim::EventKind::Checkout;
      if (kind == 1) ev.kind = sim::EventKind::RemoveItem;
      if (kind == 2) ev.kind = sim::EventKind::Tick;
      t.events.push_back(ev);
    }
    auto schema = std::make_shared<const model::ResourceModel>(full.resources);
    auto first = engine::run(t, full, sim::initial_world(schema, t.instances));
    auto second = engine::run(t, full, sim::initial_world(schema, t.instances));
    EXPECT_TRUE(sim::validate_world(first.world).empty());
    EXPECT_EQ(engine::to_ndjson(first.trace), engine::to_ndjson(second.trace));
    for (const auto& r : first.trace) EXPECT_TRUE(r.errors.empty());
  }
}

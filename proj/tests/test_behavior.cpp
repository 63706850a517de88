#include <gtest/gtest.h>

#include <set>

#include "lumsim/behavior.hpp"
#include "lumsim/errors.hpp"

using namespace lumsim;

namespace {

const Scenario kNoRegulation = builtin_scenario("no_regulation");
const Scenario kHardBan = builtin_scenario("hard_ban");
constexpr int kJan2015 = (2015 - 2006) * 12;

LampModel simple(LampType type, double price) {
  LampModel m;
  m.type = type;
  m.base_price = price;
  m.base_efficiency = 0.5;
  m.mean_lifetime = 10;
  m.initially_available = true;
  return m;
}

Agent agent_with(double agreeability, double value = 0.5) {
  Agent a;
  for (std::size_t i = 1; i < kTraitCount; ++i) a.preferences.values[i] = value;
  a.preferences[Trait::LampsNeeded] = 10;
  a.preferences[Trait::SocialAgreeability] = agreeability;
  return a;
}

}  // namespace

TEST(StrategySelectionTest, QuadrantExamples) {
  BehaviorThresholds t;
  t.satisfaction = 0.6;
  t.certainty = 0.5;
  EXPECT_EQ(Strategy::Repetition, select_strategy(0.8, 0.9, t));
  EXPECT_EQ(Strategy::Imitation, select_strategy(0.8, 0.3, t));
  EXPECT_EQ(Strategy::Deliberation, select_strategy(0.3, 0.9, t));
  EXPECT_EQ(Strategy::SocialComparison, select_strategy(0.3, 0.3, t));
  EXPECT_EQ(Strategy::Repetition, select_strategy(0.6, 0.5, t));
  const BehaviorThresholds defaults;
  EXPECT_EQ(Strategy::Repetition,
            select_strategy(defaults.satisfaction, defaults.certainty, defaults));
}

TEST(StrategySelectionTest, ExhaustiveGridScan) {
  const BehaviorThresholds t;
  int violations = 0;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const double s = i / 100.0;
      const double c = j / 100.0;
      const bool satisfied = s >= t.satisfaction;
      const bool certain = c >= t.certainty;
      const Strategy want = satisfied ? (certain ? Strategy::Repetition : Strategy::Imitation)
                                      : (certain ? Strategy::Deliberation
                                                 : Strategy::SocialComparison);
      violations += select_strategy(s, c, t) != want;
    }
  }
  EXPECT_EQ(0, violations);
}

TEST(StrategySelectionTest, RandomizedThresholdsPartitionTheSquare) {
  Rng rng{31};
  int violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    BehaviorThresholds t;
    t.satisfaction = uniform(rng, 0, 1);
    t.certainty = uniform(rng, 0, 1);
    const double s = uniform(rng, 0, 1);
    const double c = uniform(rng, 0, 1);
    const Strategy got = select_strategy(s, c, t);
    const bool high_s = got == Strategy::Repetition || got == Strategy::Imitation;
    const bool high_c = got == Strategy::Repetition || got == Strategy::Deliberation;
    violations += high_s != (s >= t.satisfaction) || high_c != (c >= t.certainty);
  }
  EXPECT_EQ(0, violations);
}

TEST(DeliberationTest, PicksBestAvailableWithTieBreaks) {
  const Catalog catalog({simple(LampType::CFL, 5.0), simple(LampType::CFL, 3.0),
                         simple(LampType::LED, 3.0), simple(LampType::Incandescent, 1.0)});
  const MarketState state(catalog, kNoRegulation, {}, 0);
  const std::vector<double> clear{0.1, 0.2, 0.9, 0.3};
  EXPECT_EQ(2u, deliberation(state, clear).model_id);
  // Equal scores: cheaper wins, then lower id.
  const std::vector<double> tie{0.7, 0.7, 0.7, 0.1};
  EXPECT_EQ(1u, deliberation(state, tie).model_id);
  EXPECT_EQ(Strategy::Deliberation, deliberation(state, tie).executed);
  EXPECT_DOUBLE_EQ(0.7, deliberation(state, tie).expected_satisfaction);
}

TEST(DeliberationTest, SkipsBannedModelsAndFailsOnEmptyMarket) {
  const Catalog catalog({simple(LampType::Incandescent, 1.0), simple(LampType::CFL, 3.0)});
  const MarketState banned(catalog, kHardBan, {}, kJan2015);
  const std::vector<double> scores{0.99, 0.10};
  EXPECT_EQ(1u, deliberation(banned, scores).model_id);

  const Catalog only_inc({simple(LampType::Incandescent, 1.0)});
  const MarketState empty(only_inc, kHardBan, {}, kJan2015);
  const std::vector<double> one{0.5};
  EXPECT_THROW(deliberation(empty, one), SimulationFault);
}

TEST(DeliberationTest, MatchesBruteForceArgmax) {
  const auto catalog = Catalog::standard();
  Rng rng{2};
  for (int trial = 0; trial < 2000; ++trial) {
    const Scenario& s = uniform_index(rng, 2) ? kHardBan : kNoRegulation;
    const MarketState state(catalog, s, RunFactors::draw(rng),
                            static_cast<int>(uniform_index(rng, 240)));
    std::vector<double> scores(catalog.size());
    for (auto& x : scores) x = std::round(uniform(rng, 0, 1) * 10) / 10;  // force ties
    std::size_t want = catalog.size();
    for (std::size_t id = 0; id < catalog.size(); ++id) {
      if (!state.available(id)) continue;
      if (want == catalog.size() || scores[id] > scores[want] ||
          (scores[id] == scores[want] && state.price(id) < state.price(want))) {
        want = id;
      }
    }
    ASSERT_EQ(want, deliberation(state, scores).model_id);
  }
}

TEST(RepetitionTest, RebuysOrFallsBack) {
  const auto catalog = Catalog::standard();
  std::vector<double> scores(catalog.size(), 0.1);
  scores[7] = 0.9;
  const MarketState before(catalog, kHardBan, {}, kJan2015 - 1);
  const auto keep = repetition(18, before, scores);
  EXPECT_EQ(18u, keep.model_id);
  EXPECT_EQ(Strategy::Repetition, keep.executed);
  EXPECT_FALSE(keep.repeat_target_unavailable);

  const MarketState after(catalog, kHardBan, {}, kJan2015);
  const auto fallback = repetition(18, after, scores);
  EXPECT_EQ(7u, fallback.model_id);
  EXPECT_EQ(Strategy::Deliberation, fallback.executed);
  EXPECT_TRUE(fallback.repeat_target_unavailable);
}

TEST(ImitationTest, DrawsFromPeerAvailableModels) {
  const auto catalog = Catalog::standard();
  const MarketState after(catalog, kHardBan, {}, kJan2015);
  const std::vector<double> scores(catalog.size(), 0.5);
  Rng rng{4};
  const std::vector<std::size_t> peer{2, 16, 18};
  std::set<std::size_t> seen;
  for (int i = 0; i < 200; ++i) {
    const auto p = imitation(peer, after, scores, rng);
    EXPECT_EQ(Strategy::Imitation, p.executed);
    seen.insert(p.model_id);
  }
  EXPECT_EQ(std::set<std::size_t>{2}, seen);
}

TEST(ImitationTest, FallsBackToWholeMarketWhenPeerHasOnlyBannedLamps) {
  const auto catalog = Catalog::standard();
  const MarketState after(catalog, kHardBan, {}, kJan2015);
  const std::vector<double> scores(catalog.size(), 0.5);
  Rng rng{4};
  const std::vector<std::size_t> peer{14, 18};
  std::set<std::size_t> seen;
  for (int i = 0; i < 2000; ++i) seen.insert(imitation(peer, after, scores, rng).model_id);
  const auto& all = after.available_models();
  EXPECT_EQ(std::set<std::size_t>(all.begin(), all.end()), seen);
}

TEST(SocialComparisonTest, AdoptsPeerModelOnlyIfBetter) {
  const auto catalog = Catalog::standard();
  const MarketState state(catalog, kNoRegulation, {}, 0);
  std::vector<double> scores(catalog.size(), 0.2);
  scores[18] = 0.6;
  scores[3] = 0.5;
  scores[5] = 0.7;
  const std::vector<std::size_t> peer{3, 5};
  EXPECT_EQ(5u, social_comparison(18, peer, state, scores).model_id);
  scores[5] = 0.4;
  const auto keep = social_comparison(18, peer, state, scores);
  EXPECT_EQ(18u, keep.model_id);
  EXPECT_EQ(Strategy::SocialComparison, keep.executed);
}

TEST(SocialComparisonTest, DeliberatesWhenPeerHasNothingAvailable) {
  const auto catalog = Catalog::standard();
  const MarketState after(catalog, kHardBan, {}, kJan2015);
  std::vector<double> scores(catalog.size(), 0.2);
  scores[9] = 0.8;
  const std::vector<std::size_t> peer{16, 17};
  const auto p = social_comparison(18, peer, after, scores);
  EXPECT_EQ(9u, p.model_id);
  EXPECT_EQ(Strategy::Deliberation, p.executed);
}

TEST(PeerSelectionTest, NoPeerInTinyPopulation) {
  std::vector<Agent> agents{agent_with(0.5)};
  std::vector<std::vector<std::size_t>> owned(1);
  Rng rng{1};
  EXPECT_FALSE(select_similar_peer(0, {agents, owned, 40}, rng, {}).has_value());
}

TEST(PeerSelectionTest, NeverReturnsSelfAndIsDeterministic) {
  std::vector<Agent> agents;
  Rng gen{6};
  for (int i = 0; i < 30; ++i) agents.push_back(agent_with(uniform(gen, 0, 1), uniform(gen, 0, 1)));
  std::vector<std::vector<std::size_t>> owned(agents.size());
  const PeerView view{agents, owned, 40};
  Rng a{9}, b{9};
  for (int i = 0; i < 1000; ++i) {
    const std::size_t self = i % agents.size();
    const auto pa = select_similar_peer(self, view, a, {});
    const auto pb = select_similar_peer(self, view, b, {});
    ASSERT_TRUE(pa.has_value());
    EXPECT_NE(self, *pa);
    EXPECT_EQ(pa, pb);
  }
}

TEST(PeerSelectionTest, LooseningAcceptsDistantPeerWithinAttemptBudget) {
  // Two maximally distant agents: distance 10 over the unit traits plus 0 on lamps.
  std::vector<Agent> agents{agent_with(0.0, 0.0), agent_with(1.0, 1.0)};
  agents[0].preferences[Trait::SocialAgreeability] = 0.0;
  std::vector<std::vector<std::size_t>> owned(2);
  Rng rng{3};
  BehaviorThresholds t;
  t.max_peer_attempts = 1000;
  // Threshold 1.5^k must exceed 10, so k = 6 rejections suffice; the result is still the peer.
  EXPECT_EQ(std::optional<std::size_t>{1}, select_similar_peer(0, {agents, owned, 40}, rng, t));
  t.max_peer_attempts = 0;
  EXPECT_EQ(std::optional<std::size_t>{1}, select_similar_peer(0, {agents, owned, 40}, rng, t));
}

TEST(PeerSelectionTest, PrefersSimilarPeersBeforeLoosening) {
  // Agent 0 has one identical twin among distant agents. The twin passes at once while the others
  // need several loosening steps, so it is picked far more often than its 1/n share.
  std::vector<Agent> agents{agent_with(0.0, 0.1), agent_with(0.0, 0.1)};
  for (int i = 0; i < 18; ++i) agents.push_back(agent_with(0.0, 0.9));
  std::vector<std::vector<std::size_t>> owned(agents.size());
  Rng rng{12};
  int twin = 0;
  for (int i = 0; i < 2000; ++i) twin += *select_similar_peer(0, {agents, owned, 40}, rng, {}) == 1;
  EXPECT_GT(twin, 2000 / 19 * 2);
}

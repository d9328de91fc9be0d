#include <gtest/gtest.h>

#include "ntbea/asteroids.hpp"
#include "ntbea/planet_wars.hpp"
#include "ntbea/rhea.hpp"

using namespace ntbea;
using namespace ntbea::rhea;

namespace {

// Deterministic test game: action 0 earns one point per tick, every other
// action earns a smaller, action-specific amount. Ends after `horizon` ticks.
struct OneArmed {
  using StateType = struct S {
    int tick = 0;
    double value = 0;
  };
  int horizon = 1000;
  int actions = 5;
  int num_actions() const { return actions; }
  bool is_terminal(const S& s) const { return s.tick >= horizon; }
  void advance(S& s, int a) const {
    s.value += a == 0 ? 1.0 : 0.1 * a / actions;
    ++s.tick;
  }
  double value(const S& s) const { return s.value; }
};

static_assert(ForwardModel<OneArmed>);
static_assert(ForwardModel<asteroids::Game>);
static_assert(ForwardModel<planet_wars::Game>);

}  // namespace

TEST(Rhea, ParamsValidation) {
  EXPECT_NO_THROW(default_opponent().validate());
  EXPECT_THROW((Params{0, 1.0, true, true, 1}.validate()), ConfigError);
  EXPECT_THROW((Params{5, -1.0, true, true, 1}.validate()), ConfigError);
  EXPECT_THROW((Params{5, 1.0, true, true, 0}.validate()), ConfigError);
  EXPECT_DOUBLE_EQ((Params{10, 2.0, true, true, 1}.mutation_prob()), 0.2);
}

TEST(Rhea, MutationZeroWithoutFlipIsIdentity) {
  Rng rng(1);
  const Params p{10, 0.0, false, true, 1};
  for (int i = 0; i < 200; ++i) {
    const auto seq = random_sequence(10, 12, rng);
    EXPECT_EQ(mutate(seq, p, 12, rng), seq);
  }
}

TEST(Rhea, MutationZeroWithFlipRedrawsExactlyOneGene) {
  Rng rng(2);
  const Params p{10, 0.0, true, true, 1};
  for (int i = 0; i < 200; ++i) {
    const auto seq = random_sequence(10, 12, rng);
    std::vector<bool> attempted;
    const auto child = mutate(seq, p, 12, rng, &attempted);
    EXPECT_EQ(std::count(attempted.begin(), attempted.end(), true), 1);
    int diff = 0;
    for (int j = 0; j < 10; ++j) diff += child[j] != seq[j];
    EXPECT_LE(diff, 1);
  }
}

TEST(Rhea, MutationAttemptRateBinomial) {
  Rng rng(derive_seed(3, 3));
  const Params p{10, 2.0, false, true, 1};
  const int n = 10000;
  long attempts = 0;
  std::vector<bool> mask;
  const ActionSequence seq(10, 0);
  for (int i = 0; i < n; ++i) {
    mutate(seq, p, 12, rng, &mask);
    attempts += std::count(mask.begin(), mask.end(), true);
  }
  const double trials = n * 10.0;
  EXPECT_NEAR(attempts, trials * 0.2, 3 * std::sqrt(trials * 0.2 * 0.8));
}

TEST(Rhea, ShiftKeepsSuffix) {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const ActionSequence s{3, 1, 2};
    const auto t = shift(s, 5, rng);
    ASSERT_EQ(t.size(), 3u);
    EXPECT_EQ(t[0], 1);
    EXPECT_EQ(t[1], 2);
    EXPECT_GE(t[2], 0);
    EXPECT_LT(t[2], 5);
  }
}

TEST(Rhea, EvaluateSequenceStopsAtTerminal) {
  OneArmed g;
  g.horizon = 3;
  OneArmed::StateType s;
  std::int64_t calls = 0;
  EXPECT_DOUBLE_EQ(evaluate_sequence(g, s, ActionSequence(10, 0), &calls), 3.0);
  EXPECT_EQ(calls, 3);
  s.tick = 3;
  calls = 0;
  EXPECT_DOUBLE_EQ(evaluate_sequence(g, s, ActionSequence(10, 0), &calls), 0.0);
  EXPECT_EQ(calls, 0);
}

TEST(Rhea, PicksDominantAction) {
  const OneArmed g;
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(derive_seed(seed, 9));
    hits += act(Params{5, 1.0, true, true, 1}, g, OneArmed::StateType{}, 2000, nullptr, rng).action == 0;
  }
  EXPECT_GE(hits, 99);
}

TEST(Rhea, ForwardModelBudgetCap) {
  const asteroids::Game ast;
  const auto ast_state = ast.init(5);
  for (int L : {5, 10, 15, 20, 50, 100, 150}) {
    for (int res : {1, 2, 3}) {
      for (bool reuse : {false, true}) {
        Rng rng(L * 10 + res);
        const Params p{L, 1.0, true, true, res};
        const auto r = act(p, ast, ast_state, 2000, nullptr, rng, Options{reuse, false});
        EXPECT_LE(r.fm_calls, 2000);
        EXPECT_GE(r.iterations, 1);
        // No further full iteration would have fitted.
        EXPECT_GT(r.fm_calls + (reuse ? 1 : 2) * res * L, 2000);
      }
    }
  }
  Rng rng(1);
  EXPECT_THROW(act(Params{150, 1.0, true, true, 3}, ast, ast_state, 899, nullptr, rng), ConfigError);
}

TEST(Rhea, ResamplesMultiplyCost) {
  const OneArmed g;
  Rng a(5), b(5);
  const auto r1 = act(Params{10, 1.0, true, false, 1}, g, OneArmed::StateType{}, 2000, nullptr, a);
  const auto r3 = act(Params{10, 1.0, true, false, 3}, g, OneArmed::StateType{}, 2000, nullptr, b);
  EXPECT_EQ(r1.fm_calls, r1.iterations * 2 * 10);
  EXPECT_EQ(r3.fm_calls, r3.iterations * 2 * 3 * 10);
  EXPECT_EQ(r1.iterations, 100);
  EXPECT_EQ(r3.iterations, 33);
}

TEST(Rhea, ElitismTraceMonotone) {
  const OneArmed g;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const Params p{20, 2.0, true, true, 1 + static_cast<int>(seed % 3)};
    const auto r = act(p, g, OneArmed::StateType{}, 2000, nullptr, rng);
    ASSERT_FALSE(r.parent_values.empty());
    for (std::size_t i = 1; i < r.parent_values.size(); ++i) {
      EXPECT_GE(r.parent_values[i], r.parent_values[i - 1]);
    }
  }
}

TEST(Rhea, ShiftBufferUsesCarriedSequence) {
  const OneArmed g;
  // With no mutation and no budget for improvement the parent is the shifted carry.
  const Params p{4, 0.0, false, true, 1};
  const ActionSequence carried{2, 3, 4, 1};
  Rng rng(6);
  const auto r = act(p, g, OneArmed::StateType{}, 8, &carried, rng);
  EXPECT_EQ(r.action, 3);
  EXPECT_EQ(r.sequence[0], 3);
  EXPECT_EQ(r.sequence[1], 4);
  EXPECT_EQ(r.sequence[2], 1);

  const Params off{4, 0.0, false, false, 1};
  int same = 0;
  for (int i = 0; i < 50; ++i) same += act(off, g, OneArmed::StateType{}, 8, &carried, rng).action == 3;
  EXPECT_LT(same, 50);
}

TEST(Rhea, AgentPlaysFullGames) {
  const planet_wars::Config cfg;
  auto s = planet_wars::init(1, cfg);
  const planet_wars::Game me(cfg, planet_wars::kP1);
  Agent agent(default_opponent(), 2000, 3);
  int ticks = 0;
  while (!planet_wars::is_terminal(s)) {
    const int a = agent.act(me, s);
    EXPECT_LE(agent.last_fm_calls(), 2000);
    ASSERT_GE(a, 0);
    ASSERT_LT(a, me.num_actions());
    planet_wars::advance(s, a, planet_wars::kNoop);
    ++ticks;
  }
  EXPECT_LE(ticks, cfg.max_ticks);
}

TEST(Rhea, TerminalStateRejected) {
  OneArmed g;
  g.horizon = 0;
  Rng rng(1);
  EXPECT_THROW(act(default_opponent(), g, OneArmed::StateType{}, 2000, nullptr, rng), InvariantError);
}

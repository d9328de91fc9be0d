#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <thread>

#include "ntbea/experiment.hpp"
#include "four_samples.hpp"

using namespace ntbea;
namespace ex = ntbea::experiment;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Wall-clock allowance for a target stated on four cores.
double scaled_limit(double seconds_on_four_cores) {
  const unsigned cores = std::max(1u, std::min(4u, std::thread::hardware_concurrency()));
  return seconds_on_four_cores * 4.0 / cores;
}

}  // namespace

TEST(Acceptance, Criterion1_FourSampleGolden) {
  const auto t0 = Clock::now();
  const auto rows = four_samples::system().report();
  const auto expect = four_samples::expected();
  ASSERT_EQ(rows.size(), 14u);
  int one = 0, five = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].pattern, expect[i].pattern);
    EXPECT_EQ(rows[i].count, expect[i].count);
    EXPECT_NEAR(rows[i].mean, expect[i].mean, 1e-12);
    one += rows[i].dims.size() == 1;
    five += rows[i].dims.size() == 5;
  }
  EXPECT_EQ(one, 11);
  EXPECT_EQ(five, 3);
  EXPECT_LT(seconds_since(t0), 1.0);
}

TEST(Acceptance, Criterion2_UcbOracle) {
  const auto t0 = Clock::now();
  Rng rng(derive_seed(2024, 2));
  for (int i = 0; i < 50; ++i) {
    const double mean = uniform_real(rng, -100.0, 100.0);
    const std::int64_t count = 1 + static_cast<std::int64_t>(uniform_index(rng, 200));
    const std::int64_t total = count + static_cast<std::int64_t>(uniform_index(rng, 5000));
    const double k = uniform_real(rng, 0.0, 10.0);
    const double eps = uniform_real(rng, 0.01, 2.0);
    StatSummary s;
    s.count = count;
    s.sum = mean * count;
    s.sum_sq = mean * mean * count;
    const double direct = s.sum / count + k * std::sqrt(std::log(double(total)) / (double(count) + eps));
    const double got = ucb_entry(s, total, {k, eps, 0.0});
    EXPECT_LE(std::abs(got - direct), 1e-9 * std::max(1.0, std::abs(direct))) << "case " << i;
  }

  const auto sys = four_samples::system();
  const UcbParams prm{1.0, 0.5, 0.0};
  for (std::uint64_t r = 0; r < sys.space().size(); ++r) {
    const Point p = sys.space().point_at(r);
    double acc = 0.0;
    for (const auto& t : sys.tuples()) {
      StatSummary hit;
      for (const auto& [key, st] : t.entries()) {
        const auto pat = t.pattern(key);
        bool match = true;
        for (std::size_t i = 0; i < pat.size(); ++i) match = match && pat[i] == p[t.dims()[i]];
        if (match) hit = st;
      }
      const double n = double(std::max<std::int64_t>(t.total(), 1));
      acc += hit.mean() + prm.k * std::sqrt(std::log(n) / (hit.count + prm.epsilon));
    }
    EXPECT_NEAR(sys.ucb(p, prm), acc / sys.tuples().size(), 1e-12);
  }
  EXPECT_LT(seconds_since(t0), 1.0);
}

TEST(Acceptance, Criterion3_TupleCombinatorics) {
  const auto t0 = Clock::now();
  for (int d = 2; d <= 8; ++d) {
    const auto tuples = generate_tuples(SearchSpace::from_arities(std::vector<int>(d, 3)), {true, true, true});
    EXPECT_EQ(static_cast<int>(tuples.size()), d + d * (d - 1) / 2 + 1) << "d=" << d;
  }
  EXPECT_LT(seconds_since(t0), 1.0);
}

TEST(Acceptance, Criterion4_SyntheticBenchmark) {
  const auto t0 = Clock::now();
  const ex::OptimizerKind kinds[] = {ex::OptimizerKind::kNtbea, ex::OptimizerKind::kSwcga,
                                     ex::OptimizerKind::kGrid, ex::OptimizerKind::kRandom};
  std::map<ex::OptimizerKind, int> top;
  std::map<ex::OptimizerKind, double> regret;
  const int runs = 100;
  for (int run = 0; run < runs; ++run) {
    auto cfg = ex::defaults_for(ex::GameKind::kSynthetic);
    cfg.synthetic.problem_seed = derive_seed(4, run, 0);
    cfg.master_seed = derive_seed(4, run, 1);
    cfg.trials = 1;
    cfg.validation_games = 1;
    ASSERT_EQ(cfg.space.size(), 336u);
    ASSERT_EQ(cfg.budget, 336);
    ex::SyntheticProblem prob(cfg.space, cfg.synthetic);
    std::vector<double> all;
    for (std::uint64_t r = 0; r < cfg.space.size(); ++r) all.push_back(prob.true_fitness(cfg.space.point_at(r)));
    std::sort(all.rbegin(), all.rend());
    const std::size_t top_n = static_cast<std::size_t>(std::ceil(0.05 * all.size()));
    const double threshold = all[top_n - 1];
    for (auto kind : kinds) {
      cfg.optimizer = kind;
      const auto t = ex::run_trial(cfg, 0);
      ASSERT_EQ(t.evals_used, 336);
      const double f = prob.true_fitness(t.recommended);
      top[kind] += f >= threshold;
      regret[kind] += (all.front() - f) / runs;
    }
  }
  for (auto kind : kinds) {
    std::printf("  synthetic %-6s top5%%=%3d/%d mean_regret=%.4f\n", ex::to_string(kind).c_str(), top[kind], runs,
                regret[kind]);
  }
  EXPECT_GE(top[ex::OptimizerKind::kNtbea], 70);
  EXPECT_GT(top[ex::OptimizerKind::kNtbea], top[ex::OptimizerKind::kRandom]);
  EXPECT_GT(top[ex::OptimizerKind::kNtbea], top[ex::OptimizerKind::kGrid]);
  EXPECT_LT(regret[ex::OptimizerKind::kNtbea], regret[ex::OptimizerKind::kSwcga]);
  EXPECT_LT(regret[ex::OptimizerKind::kSwcga], regret[ex::OptimizerKind::kGrid]);
  EXPECT_LT(seconds_since(t0), 60.0);
}

TEST(Acceptance, Criterion5_PlanetWarsOrdering) {
  const auto t0 = Clock::now();
  auto cfg = ex::defaults_for(ex::GameKind::kPlanetWars);
  cfg.trials = 10;
  cfg.budget = 240;
  cfg.k = 1.0;
  cfg.neighborhood_size = 50;
  cfg.swcga_window = 50;
  cfg.validation_games = 100;
  cfg.master_seed = 5;
  std::map<ex::OptimizerKind, double> mean;
  for (auto kind : {ex::OptimizerKind::kNtbea, ex::OptimizerKind::kSwcga, ex::OptimizerKind::kGrid}) {
    cfg.optimizer = kind;
    const auto r = ex::run_experiment(cfg);
    mean[kind] = r.aggregate.mean;
    std::printf("  %s\n", ex::format_summary(r).c_str());
  }
  const auto random = ex::random_agent_baseline(cfg, 100, derive_seed(5, 99));
  std::printf("  planetwars random %.4f +- %.4f (%lld games)\n", random.mean, random.std_err,
              static_cast<long long>(random.n));
  EXPECT_GT(mean[ex::OptimizerKind::kNtbea], mean[ex::OptimizerKind::kSwcga]);
  EXPECT_GT(mean[ex::OptimizerKind::kSwcga], mean[ex::OptimizerKind::kGrid]);
  EXPECT_GT(mean[ex::OptimizerKind::kNtbea], 0.0);
  EXPECT_LT(random.mean, -0.5);
  const double elapsed = seconds_since(t0);
  std::printf("  elapsed %.1f s (limit %.0f s)\n", elapsed, scaled_limit(1800));
  EXPECT_LT(elapsed, scaled_limit(1800));
}

TEST(Acceptance, Criterion6_AsteroidsRatio) {
  const auto t0 = Clock::now();
  auto cfg = ex::defaults_for(ex::GameKind::kAsteroids);
  cfg.trials = 10;
  cfg.budget = 336;
  cfg.k = 5000.0;
  cfg.validation_games = 100;
  cfg.master_seed = 6;
  cfg.optimizer = ex::OptimizerKind::kNtbea;
  const auto tuned = ex::run_experiment(cfg);
  std::printf("  %s\n", ex::format_summary(tuned).c_str());
  cfg.optimizer = ex::OptimizerKind::kGrid;
  const auto grid = ex::run_experiment(cfg);
  std::printf("  %s\n", ex::format_summary(grid).c_str());
  const auto random = ex::random_agent_baseline(cfg, cfg.trials * cfg.validation_games, derive_seed(6, 99));
  std::printf("  asteroids random %.1f +- %.1f (%lld games)\n", random.mean, random.std_err,
              static_cast<long long>(random.n));
  std::printf("  ratio tuned/random %.2f\n", tuned.aggregate.mean / random.mean);
  EXPECT_GT(random.mean, 0.0);
  EXPECT_GE(tuned.aggregate.mean, 3.0 * random.mean);
  EXPECT_GE(tuned.aggregate.mean, grid.aggregate.mean);
  const double elapsed = seconds_since(t0);
  std::printf("  elapsed %.1f s (limit %.0f s)\n", elapsed, scaled_limit(1800));
  EXPECT_LT(elapsed, scaled_limit(1800));
}

TEST(Acceptance, Criterion7_Throughput) {
  using namespace ntbea::planet_wars;
  const Config pw_cfg;
  Rng rng(7);
  std::vector<int> actions(1 << 16);
  for (int& a : actions) a = uniform_index(rng, num_actions(6));
  long ticks = 0;
  std::uint64_t seed = 0;
  double sink = 0.0;
  const auto t0 = Clock::now();
  while (seconds_since(t0) < 1.0) {
    State s = init(seed++, pw_cfg);
    while (!is_terminal(s)) {
      advance(s, actions[ticks & 0xffff], actions[(ticks + 7) & 0xffff]);
      ++ticks;
    }
    sink += score(s, kP1);
  }
  const double pw_rate = ticks / seconds_since(t0);

  const asteroids::Game game;
  const int games = 200;
  long ast_ticks = 0;
  const auto t1 = Clock::now();
  for (int g = 0; g < games; ++g) {
    auto s = game.init(derive_seed(7, g));
    while (!game.is_terminal(s)) {
      game.advance(s, actions[ast_ticks & 0xffff] % 12);
      ++ast_ticks;
    }
    sink += s.score;
  }
  const double per_game_ms = 1000.0 * seconds_since(t1) / games;
  const double ast_rate = ast_ticks / seconds_since(t1);
  std::printf("  planet wars %.3g ticks/s; asteroids %.3f ms per random playout, %.3g ticks/s (%g)\n", pw_rate,
              per_game_ms, ast_rate, sink > 0 ? 1.0 : 0.0);
  EXPECT_GE(pw_rate, 1e6);
  EXPECT_LE(per_game_ms, 10.0);
  EXPECT_GE(ast_rate, 1e5);
}

// Runs the property tests of the unit suites and requires all to pass.
TEST(Acceptance, Criterion8_PropertySuites) {
  const std::pair<const char*, const char*> suites[] = {
      {NTBEA_SEARCH_SPACE_TEST, "SearchSpace.RandomPointUniformBinomial:SearchSpace.RandomPointAlwaysValid:"
                                "SearchSpace.EnumerationIsLexicographicAndBijective"},
      {NTBEA_NTUPLE_MODEL_TEST, "SampleLog.RoundTripRebuildsIdenticalModel:MeanEstimate.KZeroEquivalence:"
                                "NTupleSystem.TotalsTrackSampleCount:UcbValue.MonotoneInK"},
      {NTBEA_NTBEA_TEST, "Run.BudgetIsHardCap:Run.DeterministicUnderSeed:Run.ModelRebuildsFromHistory:"
                         "Run.SelectionInvariantUnderScaling:Neighbors.AttemptRateBinomial"},
      {NTBEA_BASELINES_TEST, "Baselines.BudgetHardCapAndDeterminism:SWcGA.ProbabilitiesStayNormalisedAboveFloor"},
      {NTBEA_ASTEROIDS_TEST, "Asteroids.PlayoutProperties:Asteroids.RockCountConservation:"
                             "Asteroids.DeterministicUnderSeedAndActions"},
      {NTBEA_PLANET_WARS_TEST, "PlanetWars.SwapPlayersNegatesOutcome:PlanetWars.MirroredPlayDraws:"
                               "PlanetWars.NonNegativeAndDeterministic"},
      {NTBEA_RHEA_TEST, "Rhea.ForwardModelBudgetCap:Rhea.MutationAttemptRateBinomial:Rhea.ElitismTraceMonotone"},
      {NTBEA_EXPERIMENT_TEST, "Experiment.EvaluationAccounting:Experiment.ByteIdenticalReports:"
                              "Experiment.ByteIdenticalPlanetWars:Experiment.SampleLogRebuildsReportedModel:"
                              "Config.RoundTrip"},
  };
  for (const auto& [binary, filter] : suites) {
    const std::string cmd = std::string("\"") + binary + "\" --gtest_brief=1 --gtest_filter='" + filter + "'";
    const int rc = std::system(cmd.c_str());
    EXPECT_EQ(rc, 0) << cmd;
  }
}

namespace {

// Prints one PASS/FAIL line per criterion as each test finishes.
class CriterionPrinter : public testing::EmptyTestEventListener {
  void OnTestEnd(const testing::TestInfo& info) override {
    const std::string name = info.name();
    if (name.rfind("Criterion", 0) != 0) return;
    const auto underscore = name.find('_');
    std::printf("ACCEPTANCE criterion %s: %s (%s)\n", name.substr(9, underscore - 9).c_str(),
                info.result()->Passed() ? "PASS" : "FAIL", name.substr(underscore + 1).c_str());
    std::fflush(stdout);
  }
};

}  // namespace

int main(int argc, char** argv) {
  testing::InitGoogleTest(&argc, argv);
  testing::UnitTest::GetInstance()->listeners().Append(new CriterionPrinter);
  return RUN_ALL_TESTS();
}

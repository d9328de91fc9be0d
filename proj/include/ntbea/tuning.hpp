#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ntbea/asteroids.hpp"
#include "ntbea/errors.hpp"
#include "ntbea/planet_wars.hpp"
#include "ntbea/random.hpp"
#include "ntbea/rhea.hpp"
#include "ntbea/search_space.hpp"

// Glue between the RHEA agent's hyper-parameters and the two games: the
// parameter search spaces, point decoding and full-game playouts.
namespace ntbea::tuning {

inline constexpr std::int64_t kDefaultFmBudget = 2000;

namespace detail {
inline std::vector<Value> ints(std::initializer_list<std::int64_t> xs) {
  return {xs.begin(), xs.end()};
}
inline std::vector<Value> reals(std::initializer_list<double> xs) { return {xs.begin(), xs.end()}; }
inline std::vector<Value> bools() { return {false, true}; }
}  // namespace detail

// RHEA parameter space for Asteroids (7*4*2*2*3 = 336 points).
inline SearchSpace asteroids_space() {
  return SearchSpace({{"sequenceLength", detail::ints({5, 10, 15, 20, 50, 100, 150})},
                      {"nbMutatedPoints", detail::reals({0.0, 1.0, 2.0, 3.0})},
                      {"flipAtLeastOneBit", detail::bools()},
                      {"useShiftBuffer", detail::bools()},
                      {"nbResamples", detail::ints({1, 2, 3})}});
}

// RHEA parameter space for Planet Wars (5*4*2*2*3 = 240 points).
inline SearchSpace planet_wars_space() {
  return SearchSpace({{"sequenceLength", detail::ints({5, 10, 15, 20, 50})},
                      {"nbMutatedPoints", detail::reals({0.0, 1.0, 2.0, 3.0})},
                      {"flipAtLeastOneBit", detail::bools()},
                      {"useShiftBuffer", detail::bools()},
                      {"nbResamples", detail::ints({1, 2, 3})}});
}

// Decodes a point of a space whose dimensions carry the five RHEA parameter
// names. Missing names keep the defaults of rhea::Params.
inline rhea::Params decode(const SearchSpace& space, const Point& point) {
  const auto values = space.value_of(point);
  rhea::Params p;
  bool any = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& n = space.name(i);
    if (n == "sequenceLength") {
      p.sequence_length = static_cast<int>(as_int(values[i]));
    } else if (n == "nbMutatedPoints") {
      p.nb_mutated_points = as_double(values[i]);
    } else if (n == "flipAtLeastOneBit") {
      p.flip_at_least_one = as_bool(values[i]);
    } else if (n == "useShiftBuffer") {
      p.use_shift_buffer = as_bool(values[i]);
    } else if (n == "nbResamples") {
      p.nb_resamples = static_cast<int>(as_int(values[i]));
    } else {
      throw ConfigError("search space dimension '" + n + "' is not an RHEA parameter");
    }
    any = true;
  }
  if (!any) throw ConfigError("search space has no RHEA parameters");
  p.validate();
  return p;
}

// A policy for one side of a game: either an RHEA agent or uniform random.
struct Policy {
  enum class Kind { kRhea, kRandom } kind = Kind::kRandom;
  rhea::Params params;

  static Policy random() { return {}; }
  static Policy rhea(const rhea::Params& p) { return {Kind::kRhea, p}; }
};

// Plays one full single-player Asteroids game and returns the final score.
inline int play_asteroids(const Policy& policy, const asteroids::Config& cfg, std::uint64_t seed,
                          std::int64_t fm_budget = kDefaultFmBudget) {
  const asteroids::Game game(cfg);
  auto state = game.init(derive_seed(seed, 0));
  if (policy.kind == Policy::Kind::kRandom) {
    Rng rng(derive_seed(seed, 1));
    while (!game.is_terminal(state)) game.advance(state, uniform_index(rng, game.num_actions()));
  } else {
    rhea::Agent agent(policy.params, fm_budget, derive_seed(seed, 1));
    while (!game.is_terminal(state)) game.advance(state, agent.act(game, state));
  }
  return state.score;
}

// Plays one Planet Wars game and returns the outcome for player 1.
inline int play_planet_wars(const Policy& p1, const Policy& p2, const planet_wars::Config& cfg,
                            std::uint64_t seed, std::int64_t fm_budget = kDefaultFmBudget) {
  using namespace planet_wars;
  auto state = init(derive_seed(seed, 0), cfg);
  const Game views[2] = {Game(cfg, kP1), Game(cfg, kP2)};
  const Policy* policies[2] = {&p1, &p2};
  std::optional<rhea::Agent> agents[2];
  Rng rng(derive_seed(seed, 3));
  for (int p = 0; p < 2; ++p) {
    if (policies[p]->kind == Policy::Kind::kRhea) {
      agents[p].emplace(policies[p]->params, fm_budget, derive_seed(seed, 1 + p));
    }
  }
  const int n_actions = views[0].num_actions();
  while (!is_terminal(state)) {
    int a[2];
    for (int p = 0; p < 2; ++p) {
      a[p] = agents[p] ? agents[p]->act(views[p], state) : uniform_index(rng, n_actions);
    }
    advance(state, a[0], a[1]);
  }
  return outcome(state);
}

}  // namespace ntbea::tuning

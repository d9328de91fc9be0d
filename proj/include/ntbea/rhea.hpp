#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ntbea/errors.hpp"
#include "ntbea/mutation.hpp"
#include "ntbea/random.hpp"
#include "ntbea/search_space.hpp"

namespace ntbea::rhea {

// Forward model consumed by the agent: a copyable state plus step/terminal
// tests and a heuristic value from the agent's point of view.
template <typename G>
concept ForwardModel = requires(const G& g, typename G::StateType& s, int a) {
  { g.num_actions() } -> std::convertible_to<int>;
  { g.is_terminal(s) } -> std::convertible_to<bool>;
  g.advance(s, a);
  { g.value(s) } -> std::convertible_to<double>;
};

struct Params {
  int sequence_length = 20;
  double nb_mutated_points = 1.0;
  bool flip_at_least_one = true;
  bool use_shift_buffer = true;
  int nb_resamples = 1;

  // Per-gene mutation probability.
  double mutation_prob() const { return nb_mutated_points / sequence_length; }

  void validate() const {
    if (sequence_length < 1) throw ConfigError("sequence length must be >= 1");
    if (!(nb_mutated_points >= 0.0)) throw ConfigError("nbMutatedPoints must be >= 0");
    if (nb_resamples < 1) throw ConfigError("nbResamples must be >= 1");
  }

  bool operator==(const Params&) const = default;
};

// Stand-in for the hand-picked fixed opponent used when tuning Planet Wars.
inline Params default_opponent() { return Params{20, 1.0, true, true, 1}; }

inline std::string to_string(const Params& p) {
  return "sequenceLength=" + std::to_string(p.sequence_length) +
         " nbMutatedPoints=" + ntbea::to_string(Value{p.nb_mutated_points}) +
         " flipAtLeastOneBit=" + (p.flip_at_least_one ? "true" : "false") +
         " useShiftBuffer=" + (p.use_shift_buffer ? "true" : "false") +
         " nbResamples=" + std::to_string(p.nb_resamples);
}

struct Options {
  // Keep the parent's last mean instead of re-rolling it every iteration.
  bool reuse_parent_eval = false;
  bool mutate_to_different = false;
};

using ActionSequence = std::vector<int>;

template <typename Engine>
ActionSequence random_sequence(int length, int n_actions, Engine& rng) {
  ActionSequence s(length);
  for (int& a : s) a = uniform_index(rng, n_actions);
  return s;
}

// Drops the first action and appends a random one.
template <typename Engine>
ActionSequence shift(const ActionSequence& seq, int n_actions, Engine& rng) {
  if (seq.empty()) return seq;
  ActionSequence out(seq.begin() + 1, seq.end());
  out.push_back(uniform_index(rng, n_actions));
  return out;
}

template <typename Engine>
ActionSequence mutate(const ActionSequence& seq, const Params& params, int n_actions, Engine& rng,
                      std::vector<bool>* attempted = nullptr, bool to_different = false) {
  ActionSequence child = seq;
  const MutationParams m{params.mutation_prob(), params.flip_at_least_one, to_different};
  mutate_genome(child, [n_actions](int) { return n_actions; }, m, rng, attempted);
  return child;
}

// Rolls the sequence out on a copy of the state and returns the game's value
// of the reached state. Stops early at terminal states. `fm_calls` is
// incremented by the number of forward-model steps taken.
template <ForwardModel Game>
double evaluate_sequence(const Game& game, const typename Game::StateType& state,
                         const ActionSequence& seq, std::int64_t* fm_calls = nullptr,
                         std::optional<std::uint64_t> reseed = std::nullopt) {
  auto s = state;
  if constexpr (requires(typename Game::StateType& st) { game.reseed(st, std::uint64_t{}); }) {
    if (reseed) game.reseed(s, *reseed);
  }
  for (int a : seq) {
    if (game.is_terminal(s)) break;
    game.advance(s, a);
    if (fm_calls) ++*fm_calls;
  }
  return game.value(s);
}

struct ActResult {
  int action = 0;
  ActionSequence sequence;
  std::int64_t fm_calls = 0;
  int iterations = 0;
  std::vector<double> parent_values;  // parent mean after each iteration
};

// One decision of the rolling-horizon (1+1)-EA. The parent comes from the
// shifted carried sequence when the shift buffer is on, otherwise it is
// random. Each iteration mutates a child, rates parent and child as the mean
// of nb_resamples rollouts and keeps the child on ties. The loop stops before
// an iteration could exceed fm_budget.
template <ForwardModel Game, typename Engine>
ActResult act(const Params& params, const Game& game, const typename Game::StateType& state,
              std::int64_t fm_budget, const ActionSequence* carried, Engine& rng,
              const Options& opts = {}) {
  params.validate();
  if (game.is_terminal(state)) throw InvariantError("agent asked to act in a terminal state");
  const std::int64_t eval_cost = std::int64_t{params.nb_resamples} * params.sequence_length;
  if (fm_budget < 2 * eval_cost) {
    throw ConfigError("forward-model budget " + std::to_string(fm_budget) +
                      " cannot cover one parent and one child evaluation");
  }
  const int n_actions = game.num_actions();
  ActResult r;
  ActionSequence parent;
  if (params.use_shift_buffer && carried &&
      static_cast<int>(carried->size()) == params.sequence_length) {
    parent = shift(*carried, n_actions, rng);
  } else {
    parent = random_sequence(params.sequence_length, n_actions, rng);
  }

  auto rate = [&](const ActionSequence& seq) {
    double acc = 0.0;
    for (int i = 0; i < params.nb_resamples; ++i) {
      acc += evaluate_sequence(game, state, seq, &r.fm_calls, rng());
    }
    return acc / params.nb_resamples;
  };

  std::optional<double> parent_value;
  if (opts.reuse_parent_eval) parent_value = rate(parent);
  while (r.fm_calls + (opts.reuse_parent_eval ? 1 : 2) * eval_cost <= fm_budget) {
    ActionSequence child = mutate(parent, params, n_actions, rng, nullptr, opts.mutate_to_different);
    const double pv = opts.reuse_parent_eval ? *parent_value : rate(parent);
    const double cv = rate(child);
    if (cv >= pv) {
      parent = std::move(child);
      parent_value = cv;
    } else {
      parent_value = pv;
    }
    ++r.iterations;
    r.parent_values.push_back(*parent_value);
  }
  r.action = parent.front();
  r.sequence = std::move(parent);
  return r;
}

// Stateful wrapper that carries the best sequence between ticks.
class Agent {
 public:
  Agent(Params params, std::int64_t fm_budget, std::uint64_t seed, Options opts = {})
      : params_(params), fm_budget_(fm_budget), opts_(opts), rng_(seed) {
    params_.validate();
  }

  template <ForwardModel Game>
  int act(const Game& game, const typename Game::StateType& state) {
    auto r = rhea::act(params_, game, state, fm_budget_, carried_ ? &*carried_ : nullptr, rng_, opts_);
    last_fm_calls_ = r.fm_calls;
    carried_ = std::move(r.sequence);
    return r.action;
  }

  const Params& params() const { return params_; }
  std::int64_t last_fm_calls() const { return last_fm_calls_; }

 private:
  Params params_;
  std::int64_t fm_budget_;
  Options opts_;
  Rng rng_;
  std::optional<ActionSequence> carried_;
  std::int64_t last_fm_calls_ = 0;
};

}  // namespace ntbea::rhea

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <ostream>
#include <vector>

#include "ntbea/errors.hpp"
#include "ntbea/random.hpp"

namespace ntbea::planet_wars {

// Simplified, neutral-free Planet Wars: each player moves ships between a
// personal buffer and its current planet of focus.

enum Player : int { kP1 = 0, kP2 = 1 };

inline constexpr Player opponent(Player p) { return p == kP1 ? kP2 : kP1; }

struct Config {
  int n_planet_pairs = 3;
  int max_ticks = 200;
  double growth_min = 0.02;
  double growth_max = 0.1;
  double ships_min = 5.0;
  double ships_max = 20.0;

  bool operator==(const Config&) const = default;
};

struct Planet {
  Player owner = kP1;
  double ships = 0.0;
  double growth = 0.0;

  bool operator==(const Planet&) const = default;
};

struct State {
  std::vector<Planet> planets;
  std::array<double, 2> buffer{0.0, 0.0};
  std::array<int, 2> focus{0, 0};
  int tick = 0;
  int max_ticks = 0;

  bool operator==(const State&) const = default;
};

enum class ActionKind : std::uint8_t { kNoop, kToBuffer, kFromBuffer, kFocus };

inline constexpr std::array<double, 3> kFractions{0.25, 0.5, 1.0};

// Index layout: 0 NOOP; 1..3 shift {25,50,100}% of the focus planet's ships
// into the buffer; 4..6 deploy {25,50,100}% of the buffer onto the focus
// planet; 7+i sets the focus to planet i.
struct Action {
  ActionKind kind = ActionKind::kNoop;
  double fraction = 0.0;
  int planet = -1;

  static Action from_index(int a) {
    if (a <= 0) return {};
    if (a <= 3) return {ActionKind::kToBuffer, kFractions[a - 1], -1};
    if (a <= 6) return {ActionKind::kFromBuffer, kFractions[a - 4], -1};
    return {ActionKind::kFocus, 0.0, a - 7};
  }
};

inline constexpr int kNoop = 0;

inline int num_actions(int n_planets) { return 7 + n_planets; }
inline int focus_action(int planet) { return 7 + planet; }

// Sum of ships on owned planets plus the player's buffer. Terms are added in
// ascending order, so mirrored positions score exactly equal.
inline double score(const State& s, Player p) {
  std::array<double, 64> small;
  std::vector<double> large;
  double* terms = small.data();
  if (s.planets.size() + 1 > small.size()) {
    large.resize(s.planets.size() + 1);
    terms = large.data();
  }
  std::size_t n = 0;
  terms[n++] = s.buffer[p];
  for (const auto& pl : s.planets) {
    if (pl.owner == p) terms[n++] = pl.ships;
  }
  std::sort(terms, terms + n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += terms[i];
  return total;
}

inline int planets_owned(const State& s, Player p) {
  int n = 0;
  for (const auto& pl : s.planets) n += pl.owner == p;
  return n;
}

inline bool owns_everything(const State& s, Player p) {
  return planets_owned(s, p) == static_cast<int>(s.planets.size()) && s.buffer[opponent(p)] == 0.0;
}

inline bool is_terminal(const State& s) {
  return s.tick >= s.max_ticks || owns_everything(s, kP1) || owns_everything(s, kP2);
}

// Mirrored construction: planet i (owned by P1) and planet i + n (owned by
// P2) share ships and growth rate. Each player focuses on its first planet.
inline State init(std::uint64_t seed, const Config& cfg) {
  if (cfg.n_planet_pairs < 1) throw ConfigError("planet wars needs at least one planet pair");
  if (cfg.max_ticks < 1) throw ConfigError("planet wars max ticks must be >= 1");
  GameRng rng(static_cast<GameRng::result_type>(splitmix64(seed) % 2147483646ULL + 1));
  const int n = cfg.n_planet_pairs;
  State s;
  s.planets.resize(2 * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double ships = uniform_real(rng, cfg.ships_min, cfg.ships_max);
    const double growth = uniform_real(rng, cfg.growth_min, cfg.growth_max);
    s.planets[i] = {kP1, ships, growth};
    s.planets[i + n] = {kP2, ships, growth};
  }
  s.focus = {0, n};
  s.max_ticks = cfg.max_ticks;
  return s;
}

// Simultaneous move. Both players' transfer amounts are computed from the
// pre-move state, then applied: a planet whose ship count goes strictly
// negative flips to the attacker with the residual. Growth comes last.
inline void advance(State& s, int action_p1, int action_p2) {
  if (is_terminal(s)) throw InvariantError("step on a terminal planet wars state");
  const int n = static_cast<int>(s.planets.size());
  const Action acts[2] = {Action::from_index(action_p1), Action::from_index(action_p2)};
  for (int p = 0; p < 2; ++p) {
    if (acts[p].kind == ActionKind::kFocus) {
      if (acts[p].planet < 0 || acts[p].planet >= n) throw InvariantError("focus planet out of range");
      s.focus[p] = acts[p].planet;
    }
  }
  double withdraw[2] = {0.0, 0.0};
  double deploy[2] = {0.0, 0.0};
  for (int p = 0; p < 2; ++p) {
    const Planet& f = s.planets[s.focus[p]];
    if (acts[p].kind == ActionKind::kToBuffer && f.owner == p) withdraw[p] = acts[p].fraction * f.ships;
    if (acts[p].kind == ActionKind::kFromBuffer) deploy[p] = acts[p].fraction * s.buffer[p];
  }
  // Each player changes at most its focus planet. Summing the two signed
  // contributions first keeps the result independent of player order.
  double delta[2] = {0.0, 0.0};
  for (int p = 0; p < 2; ++p) {
    s.buffer[p] += withdraw[p] - deploy[p];
    if (s.buffer[p] < 0.0) s.buffer[p] = 0.0;
    const Planet& f = s.planets[s.focus[p]];
    delta[p] = f.owner == p ? deploy[p] - withdraw[p] : -deploy[p];
  }
  if (s.focus[0] == s.focus[1]) {
    Planet& f = s.planets[s.focus[0]];
    f.ships += delta[0] + delta[1];
  } else {
    for (int p = 0; p < 2; ++p) s.planets[s.focus[p]].ships += delta[p];
  }
  for (int p = 0; p < 2; ++p) {
    Planet& f = s.planets[s.focus[p]];
    if (f.ships < 0.0) {
      f.owner = opponent(f.owner);
      f.ships = -f.ships;
    }
  }
  for (auto& pl : s.planets) pl.ships += pl.growth;
  ++s.tick;
}

inline State step(const State& s, int action_p1, int action_p2) {
  State next = s;
  advance(next, action_p1, action_p2);
  return next;
}

// +1 if P1 wins, -1 if P2 wins, 0 for a draw.
inline int outcome(const State& s) {
  if (!is_terminal(s)) throw InvariantError("outcome requested for a non-terminal state");
  if (owns_everything(s, kP1)) return 1;
  if (owns_everything(s, kP2)) return -1;
  const double a = score(s, kP1), b = score(s, kP2);
  return a > b ? 1 : (a < b ? -1 : 0);
}

// The same position with the player labels exchanged.
inline State swap_players(const State& s) {
  State out = s;
  for (auto& pl : out.planets) pl.owner = opponent(pl.owner);
  out.buffer = {s.buffer[1], s.buffer[0]};
  out.focus = {s.focus[1], s.focus[0]};
  return out;
}

inline void write_trace_header(std::ostream& os) { os << "tick,score_p1,score_p2,planets_p1,planets_p2\n"; }

inline void write_trace_row(std::ostream& os, const State& s) {
  os << s.tick << ',' << score(s, kP1) << ',' << score(s, kP2) << ',' << planets_owned(s, kP1) << ','
     << planets_owned(s, kP2) << '\n';
}

// Forward model seen from one player, with a fixed policy for the other side.
class Game {
 public:
  using StateType = State;

  Game() = default;
  Game(const Config& cfg, Player me, int opponent_action = kNoop)
      : cfg_(cfg), me_(me), opponent_action_(opponent_action) {}

  const Config& config() const { return cfg_; }
  Player me() const { return me_; }
  int num_actions() const { return planet_wars::num_actions(2 * cfg_.n_planet_pairs); }
  bool is_terminal(const State& s) const { return planet_wars::is_terminal(s); }

  void advance(State& s, int action) const {
    if (me_ == kP1) {
      planet_wars::advance(s, action, opponent_action_);
    } else {
      planet_wars::advance(s, opponent_action_, action);
    }
  }

  double value(const State& s) const { return score(s, me_) - score(s, opponent(me_)); }

 private:
  Config cfg_;
  Player me_ = kP1;
  int opponent_action_ = kNoop;
};

}  // namespace ntbea::planet_wars

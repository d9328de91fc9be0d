#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "ntbea/errors.hpp"
#include "ntbea/random.hpp"

namespace ntbea::asteroids {

inline constexpr double kPi = 3.14159265358979323846;

enum class RockSize : std::uint8_t { kLarge = 0, kMedium = 1, kSmall = 2 };

// Physics and scoring constants. None of the kinematics are taken from a
// reference build; they are tuned for play on a 640x480 field in 1000 ticks.
struct Config {
  double width = 640.0;
  double height = 480.0;
  double turn_rate = 0.1;
  double thrust = 0.2;
  double drag = 0.99;
  int max_missiles = 4;
  double missile_speed = 6.0;
  int missile_ttl = 60;
  int fire_cooldown = 5;
  double rock_radius[3] = {40.0, 20.0, 10.0};
  double large_speed_min = 0.5;
  double large_speed_max = 1.5;
  double child_speed_factor = 1.25;
  double split_angle = kPi / 4;
  double split_jitter = 0.2;
  double ship_radius = 12.0;
  int invulnerable_ticks = 50;
  double safe_radius = 120.0;
  int n_large_rocks = 6;
  int max_ticks = 1000;
  int lives = 3;
  int life_every = 10000;

  int fire_penalty = 10;
  int rock_points[3] = {200, 100, 50};
  int death_penalty = 200;

  bool operator==(const Config&) const = default;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Ship {
  Vec2 pos;
  Vec2 vel;
  double heading = -kPi / 2;
  Vec2 dir{0.0, -1.0};  // unit vector along heading
  int invulnerable = 0;
};

struct Rock {
  Vec2 pos;
  Vec2 vel;
  RockSize size = RockSize::kLarge;
};

struct Missile {
  Vec2 pos;
  Vec2 vel;
  int ttl = 0;
};

struct State {
  Ship ship;
  std::vector<Rock> rocks;
  std::vector<Missile> missiles;
  int score = 0;
  int lives = 0;
  int next_life = 0;
  int tick = 0;
  int cooldown = 0;
  GameRng rng;
};

enum class Steer : std::uint8_t { kLeft = 0, kCenter = 1, kRight = 2 };

// 3 steer x thrust x fire = 12 actions. Index = steer + 3*thrust + 6*fire,
// so action 1 is "centre, no thrust, no fire".
struct Action {
  Steer steer = Steer::kCenter;
  bool thrust = false;
  bool fire = false;

  static constexpr int kCount = 12;

  static Action from_index(int a) {
    return {static_cast<Steer>(a % 3), ((a / 3) % 2) != 0, (a / 6) != 0};
  }
  int index() const { return static_cast<int>(steer) + 3 * thrust + 6 * fire; }
};

inline constexpr int kNoop = 1;

// What happened during one tick; the score delta is fully explained by it.
struct StepEvents {
  int missiles_fired = 0;
  int bounty = 0;
  int lives_lost = 0;
  int lives_gained = 0;
  int rocks_split = 0;
};

inline int rock_mass(RockSize s) { return s == RockSize::kLarge ? 4 : s == RockSize::kMedium ? 2 : 1; }

inline int total_rock_mass(const State& s) {
  int m = 0;
  for (const auto& r : s.rocks) m += rock_mass(r.size);
  return m;
}

class Game {
 public:
  using StateType = State;

  Game() : Game(Config{}) {}
  explicit Game(const Config& cfg)
      : cfg_(cfg), turn_cos_(std::cos(cfg.turn_rate)), turn_sin_(std::sin(cfg.turn_rate)) {}

  const Config& config() const { return cfg_; }
  int num_actions() const { return Action::kCount; }

  State init(std::uint64_t seed) const {
    if (cfg_.n_large_rocks < 1) throw ConfigError("asteroids needs at least one large rock");
    State s;
    s.rng.seed(static_cast<GameRng::result_type>(splitmix64(seed) % 2147483646ULL + 1));
    s.ship.pos = {cfg_.width / 2, cfg_.height / 2};
    s.lives = cfg_.lives;
    s.next_life = cfg_.life_every;
    s.rocks.reserve(static_cast<std::size_t>(cfg_.n_large_rocks) * 4);
    s.missiles.reserve(static_cast<std::size_t>(cfg_.max_missiles));
    for (int i = 0; i < cfg_.n_large_rocks; ++i) {
      Rock r;
      do {
        r.pos = {uniform_real(s.rng, 0.0, cfg_.width), uniform_real(s.rng, 0.0, cfg_.height)};
      } while (dist2(r.pos, s.ship.pos) < cfg_.safe_radius * cfg_.safe_radius);
      const double angle = uniform_real(s.rng, 0.0, 2 * kPi);
      const double speed = uniform_real(s.rng, cfg_.large_speed_min, cfg_.large_speed_max);
      r.vel = {speed * std::cos(angle), speed * std::sin(angle)};
      s.rocks.push_back(r);
    }
    return s;
  }

  bool is_terminal(const State& s) const { return s.lives <= 0 || s.tick >= cfg_.max_ticks; }

  StepEvents advance(State& s, Action a) const {
    if (is_terminal(s)) throw InvariantError("step on a terminal asteroids state");
    StepEvents ev;
    auto& ship = s.ship;

    if (a.steer != Steer::kCenter) {
      const double sign = a.steer == Steer::kLeft ? -1.0 : 1.0;
      ship.heading += sign * cfg_.turn_rate;
      const double sn = sign * turn_sin_;
      ship.dir = {ship.dir.x * turn_cos_ - ship.dir.y * sn, ship.dir.x * sn + ship.dir.y * turn_cos_};
    }
    const double hx = ship.dir.x, hy = ship.dir.y;
    if (a.thrust) {
      ship.vel.x += cfg_.thrust * hx;
      ship.vel.y += cfg_.thrust * hy;
    }
    ship.vel.x *= cfg_.drag;
    ship.vel.y *= cfg_.drag;
    move(ship.pos, ship.vel);

    if (a.fire && s.cooldown == 0 && static_cast<int>(s.missiles.size()) < cfg_.max_missiles) {
      s.missiles.push_back({ship.pos, {cfg_.missile_speed * hx, cfg_.missile_speed * hy}, cfg_.missile_ttl});
      s.cooldown = cfg_.fire_cooldown;
      s.score -= cfg_.fire_penalty;
      ++ev.missiles_fired;
    }

    for (std::size_t i = 0; i < s.missiles.size();) {
      auto& m = s.missiles[i];
      move(m.pos, m.vel);
      if (--m.ttl <= 0) {
        s.missiles[i] = s.missiles.back();
        s.missiles.pop_back();
      } else {
        ++i;
      }
    }
    for (auto& r : s.rocks) move(r.pos, r.vel);

    for (std::size_t i = 0; i < s.missiles.size();) {
      const int hit = first_hit(s, s.missiles[i].pos, 0.0);
      if (hit < 0) {
        ++i;
        continue;
      }
      s.missiles.erase(s.missiles.begin() + static_cast<std::ptrdiff_t>(i));
      split(s, static_cast<std::size_t>(hit), ev);
    }

    if (ship.invulnerable > 0) {
      --ship.invulnerable;
    } else if (first_hit(s, ship.pos, cfg_.ship_radius) >= 0) {
      --s.lives;
      s.score -= cfg_.death_penalty;
      ++ev.lives_lost;
      ship = Ship{};
      ship.pos = {cfg_.width / 2, cfg_.height / 2};
      ship.invulnerable = cfg_.invulnerable_ticks;
    }

    while (s.score >= s.next_life) {
      ++s.lives;
      s.next_life += cfg_.life_every;
      ++ev.lives_gained;
    }
    if (s.cooldown > 0) --s.cooldown;
    ++s.tick;
    return ev;
  }

  StepEvents advance(State& s, int action) const { return advance(s, Action::from_index(action)); }

  State step(const State& s, Action a) const {
    State next = s;
    advance(next, a);
    return next;
  }

  // Fresh randomness for rock splits, so repeated rollouts differ.
  void reseed(State& s, std::uint64_t seed) const {
    s.rng.seed(static_cast<GameRng::result_type>(splitmix64(seed) % 2147483646ULL + 1));
  }

  static int game_score(const State& s) { return s.score; }
  double value(const State& s) const { return s.score; }

 private:
  static double dist2(Vec2 a, Vec2 b) { return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y); }

  static double wrap(double v, double size) {
    if (v < 0.0) v += size;
    if (v >= size) v -= size;
    if (v < 0.0 || v >= size) {
      v = std::fmod(v, size);
      if (v < 0.0) v += size;
      if (v >= size) v = 0.0;
    }
    return v;
  }

  void move(Vec2& p, Vec2 v) const {
    p.x = wrap(p.x + v.x, cfg_.width);
    p.y = wrap(p.y + v.y, cfg_.height);
  }

  int first_hit(const State& s, Vec2 p, double extra_radius) const {
    const double half_w = cfg_.width / 2, half_h = cfg_.height / 2;
    for (std::size_t j = 0; j < s.rocks.size(); ++j) {
      const double r = cfg_.rock_radius[static_cast<int>(s.rocks[j].size)] + extra_radius;
      double dx = std::abs(p.x - s.rocks[j].pos.x);
      if (dx > half_w) dx = cfg_.width - dx;
      if (dx >= r) continue;
      double dy = std::abs(p.y - s.rocks[j].pos.y);
      if (dy > half_h) dy = cfg_.height - dy;
      if (dx * dx + dy * dy < r * r) return static_cast<int>(j);
    }
    return -1;
  }

  void split(State& s, std::size_t idx, StepEvents& ev) const {
    const Rock parent = s.rocks[idx];
    const int size = static_cast<int>(parent.size);
    s.score += cfg_.rock_points[size];
    ev.bounty += cfg_.rock_points[size];
    ++ev.rocks_split;
    if (parent.size == RockSize::kSmall) {
      s.rocks.erase(s.rocks.begin() + static_cast<std::ptrdiff_t>(idx));
      return;
    }
    const double speed = cfg_.child_speed_factor * std::hypot(parent.vel.x, parent.vel.y);
    const double heading = std::atan2(parent.vel.y, parent.vel.x);
    Rock children[2];
    for (int c = 0; c < 2; ++c) {
      const double off = cfg_.split_angle + uniform_real(s.rng, -cfg_.split_jitter, cfg_.split_jitter);
      const double ang = heading + (c == 0 ? off : -off);
      children[c] = {parent.pos, {speed * std::cos(ang), speed * std::sin(ang)},
                     static_cast<RockSize>(size + 1)};
    }
    s.rocks[idx] = children[0];
    s.rocks.push_back(children[1]);
  }

  Config cfg_;
  double turn_cos_;
  double turn_sin_;
};

// FNV-style digest of the full state, for determinism checks.
inline std::uint64_t state_hash(const State& s) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) { h = (h ^ v) * 1099511628211ULL; };
  auto mixd = [&mix](double d) { mix(std::bit_cast<std::uint64_t>(d)); };
  mixd(s.ship.pos.x), mixd(s.ship.pos.y), mixd(s.ship.vel.x), mixd(s.ship.vel.y), mixd(s.ship.heading);
  mixd(s.ship.dir.x), mixd(s.ship.dir.y);
  mix(static_cast<std::uint64_t>(s.ship.invulnerable));
  for (const auto& r : s.rocks) {
    mixd(r.pos.x), mixd(r.pos.y), mixd(r.vel.x), mixd(r.vel.y), mix(static_cast<std::uint64_t>(r.size));
  }
  for (const auto& m : s.missiles) mixd(m.pos.x), mixd(m.pos.y), mix(static_cast<std::uint64_t>(m.ttl));
  mix(static_cast<std::uint64_t>(s.score)), mix(static_cast<std::uint64_t>(s.lives));
  mix(static_cast<std::uint64_t>(s.tick)), mix(static_cast<std::uint64_t>(s.cooldown));
  return h;
}

inline void write_trace_header(std::ostream& os) { os << "tick,action,score,lives,rocks\n"; }

inline void write_trace_row(std::ostream& os, const State& s, int action) {
  os << s.tick << ',' << action << ',' << s.score << ',' << s.lives << ',' << s.rocks.size() << '\n';
}

}  // namespace ntbea::asteroids

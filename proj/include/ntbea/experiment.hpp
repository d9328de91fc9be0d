#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "ntbea/asteroids.hpp"
#include "ntbea/baselines.hpp"
#include "ntbea/errors.hpp"
#include "ntbea/ntbea.hpp"
#include "ntbea/ntuple.hpp"
#include "ntbea/planet_wars.hpp"
#include "ntbea/random.hpp"
#include "ntbea/rhea.hpp"
#include "ntbea/search_space.hpp"
#include "ntbea/tuning.hpp"

namespace ntbea::experiment {

using ntbea::to_string;

enum class GameKind { kAsteroids, kPlanetWars, kSynthetic };
enum class OptimizerKind { kNtbea, kGrid, kRandom, kSwcga };

inline std::string to_string(GameKind g) {
  switch (g) {
    case GameKind::kAsteroids: return "asteroids";
    case GameKind::kPlanetWars: return "planetwars";
    case GameKind::kSynthetic: return "synthetic";
  }
  return "?";
}

inline std::string to_string(OptimizerKind o) {
  switch (o) {
    case OptimizerKind::kNtbea: return "ntbea";
    case OptimizerKind::kGrid: return "grid";
    case OptimizerKind::kRandom: return "random";
    case OptimizerKind::kSwcga: return "swcga";
  }
  return "?";
}

inline GameKind parse_game(const std::string& s) {
  if (s == "asteroids") return GameKind::kAsteroids;
  if (s == "planetwars" || s == "planet_wars") return GameKind::kPlanetWars;
  if (s == "synthetic") return GameKind::kSynthetic;
  throw ConfigError("unknown game '" + s + "' (asteroids, planetwars, synthetic)");
}

inline OptimizerKind parse_optimizer(const std::string& s) {
  if (s == "ntbea") return OptimizerKind::kNtbea;
  if (s == "grid") return OptimizerKind::kGrid;
  if (s == "random") return OptimizerKind::kRandom;
  if (s == "swcga") return OptimizerKind::kSwcga;
  throw ConfigError("unknown optimizer '" + s + "' (ntbea, grid, random, swcga)");
}

// Noisy synthetic benchmark: a separable sum of per-dimension value tables
// plus one pairwise interaction table over dimensions 0 and 1. Tables are
// drawn U(0,1) from problem_seed; observations add Gaussian noise with
// sigma = noise_fraction * (max - min) of the true fitness over the space.
struct SyntheticConfig {
  double noise_fraction = 0.3;
  std::uint64_t problem_seed = 1;
  double interaction_weight = 0.5;

  bool operator==(const SyntheticConfig&) const = default;
};

class SyntheticProblem {
 public:
  SyntheticProblem(const SearchSpace& space, const SyntheticConfig& cfg) : space_(space), cfg_(cfg) {
    Rng rng(derive_seed(cfg.problem_seed, 0x5e7));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int a : space.arities()) {
      std::vector<double> t(a);
      for (double& x : t) x = u(rng);
      tables_.push_back(std::move(t));
    }
    if (space.dimensions() >= 2) {
      pair_.assign(static_cast<std::size_t>(space.arity(0)) * space.arity(1), 0.0);
      for (double& x : pair_) x = cfg.interaction_weight * u(rng);
    }
    lo_ = INFINITY;
    hi_ = -INFINITY;
    for (std::uint64_t r = 0; r < space.size(); ++r) {
      const double f = true_fitness(space.point_at(r));
      lo_ = std::min(lo_, f);
      hi_ = std::max(hi_, f);
    }
  }

  double true_fitness(const Point& p) const {
    double f = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) f += tables_[i][p[i]];
    if (!pair_.empty()) f += pair_[static_cast<std::size_t>(p[0]) * space_.arity(1) + p[1]];
    return f;
  }

  double min() const { return lo_; }
  double max() const { return hi_; }
  double noise_sigma() const { return cfg_.noise_fraction * (hi_ - lo_); }

  template <typename Engine>
  double sample(const Point& p, Engine& rng) const {
    const double sigma = noise_sigma();
    const double f = true_fitness(p);
    return sigma > 0.0 ? f + std::normal_distribution<double>(0.0, sigma)(rng) : f;
  }

 private:
  SearchSpace space_;
  SyntheticConfig cfg_;
  std::vector<std::vector<double>> tables_;
  std::vector<double> pair_;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

struct ExperimentConfig {
  GameKind game = GameKind::kAsteroids;
  OptimizerKind optimizer = OptimizerKind::kNtbea;
  std::int64_t budget = 336;
  int trials = 10;
  int validation_games = 100;
  double k = 5000.0;
  double epsilon = 0.5;
  double default_mean = 0.0;
  int neighborhood_size = 50;
  double mutation_prob = 0.2;
  bool flip_once = true;
  bool mutate_to_different = false;
  TupleFlags tuples;
  RecommendMode recommend = RecommendMode::kDimensionWise;
  int swcga_window = 50;
  std::uint64_t master_seed = 1;
  std::int64_t fm_budget = tuning::kDefaultFmBudget;
  int threads = 0;  // 0: hardware concurrency

  asteroids::Config asteroids;
  planet_wars::Config planet_wars;
  rhea::Params opponent = rhea::default_opponent();
  SyntheticConfig synthetic;
  SearchSpace space;

  bool operator==(const ExperimentConfig&) const = default;

  NTBEAConfig ntbea() const {
    NTBEAConfig c;
    c.neighborhood_size = neighborhood_size;
    c.mutation_prob = mutation_prob;
    c.flip_once = flip_once;
    c.mutate_to_different = mutate_to_different;
    c.k = k;
    c.epsilon = epsilon;
    c.default_mean = default_mean;
    c.nb_evals = budget;
    c.tuples = tuples;
    c.recommend = recommend;
    return c;
  }

  void validate() const {
    if (budget < 1) throw ConfigError("budget must be >= 1");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (validation_games < 1) throw ConfigError("validation_games must be >= 1");
    if (fm_budget < 1) throw ConfigError("fm_budget must be >= 1");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    if (space.dimensions() == 0) throw ConfigError("search space is empty");
    if (optimizer == OptimizerKind::kNtbea) ntbea().validate();
    if (optimizer == OptimizerKind::kSwcga) SWcGAConfig{swcga_window, budget}.validate();
    if (game != GameKind::kSynthetic) {
      // Every point must decode into agent parameters the planner can run.
      if (space.size() > 1000000) throw ConfigError("game search space too large to check");
      for (std::uint64_t r = 0; r < space.size(); ++r) {
        const auto params = tuning::decode(space, space.point_at(r));
        if (2 * params.sequence_length * params.nb_resamples > fm_budget) {
          throw ConfigError("fm_budget too small for " + rhea::to_string(params));
        }
      }
      opponent.validate();
      if (game == GameKind::kPlanetWars && 2 * opponent.sequence_length * opponent.nb_resamples > fm_budget) {
        throw ConfigError("fm_budget too small for the opponent");
      }
    }
  }
};

// Per-game defaults: the game's RHEA space, budget equal to the
// space size, k = 5000 for Asteroids and 1.0 for Planet Wars.
inline ExperimentConfig defaults_for(GameKind game) {
  ExperimentConfig c;
  c.game = game;
  switch (game) {
    case GameKind::kAsteroids:
      c.space = tuning::asteroids_space();
      c.k = 5000.0;
      break;
    case GameKind::kPlanetWars:
      c.space = tuning::planet_wars_space();
      c.k = 1.0;
      break;
    case GameKind::kSynthetic:
      c.space = SearchSpace::from_arities({7, 4, 2, 2, 3});
      c.k = 3.0;
      break;
  }
  c.budget = static_cast<std::int64_t>(c.space.size());
  return c;
}

// ---------------------------------------------------------------------------
// Config text format: flat key=value INI, with [asteroids], [planetwars],
// [opponent], [synthetic] and [space] sections.

namespace detail {

using boost::property_tree::ptree;

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("bad value '" + text + "' for " + key);
  }
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("bad boolean '" + text + "' for " + key);
}

inline TupleFlags parse_tuples(const std::string& text) {
  TupleFlags f{false, false, false};
  for (const auto& t : split(text, ',')) {
    if (t == "1") {
      f.one = true;
    } else if (t == "2") {
      f.two = true;
    } else if (t == "d" || t == "D") {
      f.full = true;
    } else {
      throw ConfigError("bad tuple set '" + t + "' (use 1, 2, d)");
    }
  }
  return f;
}

inline std::string tuples_string(TupleFlags f) {
  std::vector<std::string> parts;
  if (f.one) parts.push_back("1");
  if (f.two) parts.push_back("2");
  if (f.full) parts.push_back("d");
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
  return s;
}

template <typename Fn>
void for_keys(const ptree& section, const std::string& prefix, Fn&& fn) {
  for (const auto& [key, node] : section) {
    if (!node.empty()) continue;
    fn(prefix.empty() ? key : prefix + "." + key, key, node.data());
  }
}

}  // namespace detail

// Builds a config from a property tree: start from the game's defaults, then
// apply every key present. Unknown keys are rejected.
inline ExperimentConfig parse_config(const boost::property_tree::ptree& tree) {
  using detail::parse_bool;
  using detail::parse_number;
  const auto game = parse_game(tree.get<std::string>("game", "asteroids"));
  ExperimentConfig c = defaults_for(game);
  bool budget_set = false;

  detail::for_keys(tree, "", [&](const std::string& full, const std::string& key, const std::string& v) {
    if (key == "game") {
    } else if (key == "optimizer") {
      c.optimizer = parse_optimizer(detail::trim(v));
    } else if (key == "budget") {
      c.budget = parse_number<std::int64_t>(full, v);
      budget_set = true;
    } else if (key == "trials") {
      c.trials = parse_number<int>(full, v);
    } else if (key == "validation_games") {
      c.validation_games = parse_number<int>(full, v);
    } else if (key == "k") {
      c.k = parse_number<double>(full, v);
    } else if (key == "epsilon") {
      c.epsilon = parse_number<double>(full, v);
    } else if (key == "default_mean") {
      c.default_mean = parse_number<double>(full, v);
    } else if (key == "neighborhood_size") {
      c.neighborhood_size = parse_number<int>(full, v);
    } else if (key == "mutation_prob") {
      c.mutation_prob = parse_number<double>(full, v);
    } else if (key == "flip_once") {
      c.flip_once = parse_bool(full, v);
    } else if (key == "mutate_to_different") {
      c.mutate_to_different = parse_bool(full, v);
    } else if (key == "tuples") {
      c.tuples = detail::parse_tuples(v);
    } else if (key == "recommend") {
      c.recommend = parse_recommend_mode(detail::trim(v));
    } else if (key == "swcga_window") {
      c.swcga_window = parse_number<int>(full, v);
    } else if (key == "master_seed") {
      c.master_seed = parse_number<std::uint64_t>(full, v);
    } else if (key == "fm_budget") {
      c.fm_budget = parse_number<std::int64_t>(full, v);
    } else if (key == "threads") {
      c.threads = parse_number<int>(full, v);
    } else {
      throw ConfigError("unknown config key '" + full + "'");
    }
  });

  for (const auto& [name, section] : tree) {
    if (section.empty()) continue;
    if (name == "asteroids") {
      detail::for_keys(section, name, [&](const std::string& full, const std::string& key, const std::string& v) {
        if (key == "n_large_rocks") {
          c.asteroids.n_large_rocks = parse_number<int>(full, v);
        } else if (key == "max_ticks") {
          c.asteroids.max_ticks = parse_number<int>(full, v);
        } else if (key == "lives") {
          c.asteroids.lives = parse_number<int>(full, v);
        } else {
          throw ConfigError("unknown config key '" + full + "'");
        }
      });
    } else if (name == "planetwars") {
      detail::for_keys(section, name, [&](const std::string& full, const std::string& key, const std::string& v) {
        if (key == "n_planet_pairs") {
          c.planet_wars.n_planet_pairs = parse_number<int>(full, v);
        } else if (key == "max_ticks") {
          c.planet_wars.max_ticks = parse_number<int>(full, v);
        } else if (key == "growth_min") {
          c.planet_wars.growth_min = parse_number<double>(full, v);
        } else if (key == "growth_max") {
          c.planet_wars.growth_max = parse_number<double>(full, v);
        } else if (key == "ships_min") {
          c.planet_wars.ships_min = parse_number<double>(full, v);
        } else if (key == "ships_max") {
          c.planet_wars.ships_max = parse_number<double>(full, v);
        } else {
          throw ConfigError("unknown config key '" + full + "'");
        }
      });
    } else if (name == "opponent") {
      detail::for_keys(section, name, [&](const std::string& full, const std::string& key, const std::string& v) {
        if (key == "sequenceLength") {
          c.opponent.sequence_length = parse_number<int>(full, v);
        } else if (key == "nbMutatedPoints") {
          c.opponent.nb_mutated_points = parse_number<double>(full, v);
        } else if (key == "flipAtLeastOneBit") {
          c.opponent.flip_at_least_one = parse_bool(full, v);
        } else if (key == "useShiftBuffer") {
          c.opponent.use_shift_buffer = parse_bool(full, v);
        } else if (key == "nbResamples") {
          c.opponent.nb_resamples = parse_number<int>(full, v);
        } else {
          throw ConfigError("unknown config key '" + full + "'");
        }
      });
    } else if (name == "synthetic") {
      detail::for_keys(section, name, [&](const std::string& full, const std::string& key, const std::string& v) {
        if (key == "noise_fraction") {
          c.synthetic.noise_fraction = parse_number<double>(full, v);
        } else if (key == "problem_seed") {
          c.synthetic.problem_seed = parse_number<std::uint64_t>(full, v);
        } else if (key == "interaction_weight") {
          c.synthetic.interaction_weight = parse_number<double>(full, v);
        } else {
          throw ConfigError("unknown config key '" + full + "'");
        }
      });
    } else if (name == "space") {
      std::vector<Dimension> dims;
      for (const auto& [dim, node] : section) {
        Dimension d{dim, {}};
        for (const auto& literal : detail::split(node.data(), ',')) d.values.push_back(parse_value(literal));
        dims.push_back(std::move(d));
      }
      c.space = SearchSpace(std::move(dims));
      if (!budget_set) c.budget = static_cast<std::int64_t>(c.space.size());
    } else {
      throw ConfigError("unknown config section [" + name + "]");
    }
  }
  return c;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream is(text);
  try {
    boost::property_tree::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(tree);
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

inline boost::property_tree::ptree to_ptree(const ExperimentConfig& c) {
  boost::property_tree::ptree t;
  auto num = [](double x) { return format_double(x); };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  t.put("game", to_string(c.game));
  t.put("optimizer", to_string(c.optimizer));
  t.put("budget", std::to_string(c.budget));
  t.put("trials", std::to_string(c.trials));
  t.put("validation_games", std::to_string(c.validation_games));
  t.put("k", num(c.k));
  t.put("epsilon", num(c.epsilon));
  t.put("default_mean", num(c.default_mean));
  t.put("neighborhood_size", std::to_string(c.neighborhood_size));
  t.put("mutation_prob", num(c.mutation_prob));
  t.put("flip_once", flag(c.flip_once));
  t.put("mutate_to_different", flag(c.mutate_to_different));
  t.put("tuples", detail::tuples_string(c.tuples));
  t.put("recommend", to_string(c.recommend));
  t.put("swcga_window", std::to_string(c.swcga_window));
  t.put("master_seed", std::to_string(c.master_seed));
  t.put("fm_budget", std::to_string(c.fm_budget));
  t.put("threads", std::to_string(c.threads));

  boost::property_tree::ptree a;
  a.put("n_large_rocks", std::to_string(c.asteroids.n_large_rocks));
  a.put("max_ticks", std::to_string(c.asteroids.max_ticks));
  a.put("lives", std::to_string(c.asteroids.lives));
  t.add_child("asteroids", a);

  boost::property_tree::ptree pw;
  pw.put("n_planet_pairs", std::to_string(c.planet_wars.n_planet_pairs));
  pw.put("max_ticks", std::to_string(c.planet_wars.max_ticks));
  pw.put("growth_min", num(c.planet_wars.growth_min));
  pw.put("growth_max", num(c.planet_wars.growth_max));
  pw.put("ships_min", num(c.planet_wars.ships_min));
  pw.put("ships_max", num(c.planet_wars.ships_max));
  t.add_child("planetwars", pw);

  boost::property_tree::ptree op;
  op.put("sequenceLength", std::to_string(c.opponent.sequence_length));
  op.put("nbMutatedPoints", num(c.opponent.nb_mutated_points));
  op.put("flipAtLeastOneBit", flag(c.opponent.flip_at_least_one));
  op.put("useShiftBuffer", flag(c.opponent.use_shift_buffer));
  op.put("nbResamples", std::to_string(c.opponent.nb_resamples));
  t.add_child("opponent", op);

  boost::property_tree::ptree sy;
  sy.put("noise_fraction", num(c.synthetic.noise_fraction));
  sy.put("problem_seed", std::to_string(c.synthetic.problem_seed));
  sy.put("interaction_weight", num(c.synthetic.interaction_weight));
  t.add_child("synthetic", sy);

  boost::property_tree::ptree sp;
  for (const auto& d : c.space.dims()) {
    std::string values;
    for (std::size_t i = 0; i < d.values.size(); ++i) values += (i ? "," : "") + to_string(d.values[i]);
    // push_back keeps dimension order and does not treat '.' in names as paths
    sp.push_back({d.name, boost::property_tree::ptree(values)});
  }
  t.add_child("space", sp);
  return t;
}

inline std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  boost::property_tree::write_ini(os, to_ptree(c));
  return os.str();
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  const auto t = to_ptree(c);
  for (const auto& [key, node] : t) {
    if (node.empty()) {
      j[key] = node.data();
    } else if (key == "space") {
      nlohmann::json dims = nlohmann::json::array();
      for (const auto& d : c.space.dims()) {
        nlohmann::json values = nlohmann::json::array();
        for (const auto& v : d.values) {
          std::visit([&](auto x) { values.push_back(x); }, v);
        }
        dims.push_back({{"name", d.name}, {"values", values}});
      }
      j["space"] = dims;
    } else {
      for (const auto& [k, v] : node) j[key][k] = v.data();
    }
  }
  return j;
}

// ---------------------------------------------------------------------------
// Evaluation

// Noisy fitness of a point: one full game (or one synthetic draw) per call,
// each with its own derived seed. Counts its calls.
class Evaluator {
 public:
  Evaluator(const ExperimentConfig& cfg, std::uint64_t stream_seed)
      : cfg_(&cfg), seed_(stream_seed) {
    if (cfg.game == GameKind::kSynthetic) synthetic_.emplace(cfg.space, cfg.synthetic);
  }

  double operator()(const Point& p) {
    const std::uint64_t seed = derive_seed(seed_, calls_++);
    switch (cfg_->game) {
      case GameKind::kAsteroids:
        return tuning::play_asteroids(tuning::Policy::rhea(tuning::decode(cfg_->space, p)), cfg_->asteroids, seed,
                                      cfg_->fm_budget);
      case GameKind::kPlanetWars:
        return tuning::play_planet_wars(tuning::Policy::rhea(tuning::decode(cfg_->space, p)),
                                        tuning::Policy::rhea(cfg_->opponent), cfg_->planet_wars, seed,
                                        cfg_->fm_budget);
      case GameKind::kSynthetic: {
        cfg_->space.check(p);
        Rng rng(seed);
        return synthetic_->sample(p, rng);
      }
    }
    return 0.0;
  }

  std::int64_t calls() const { return calls_; }
  const SyntheticProblem* synthetic() const { return synthetic_ ? &*synthetic_ : nullptr; }

 private:
  const ExperimentConfig* cfg_;
  std::uint64_t seed_;
  std::int64_t calls_ = 0;
  std::optional<SyntheticProblem> synthetic_;
};

inline Evaluator make_evaluator(const ExperimentConfig& cfg, std::uint64_t stream_seed) {
  return Evaluator(cfg, stream_seed);
}

struct Summary {
  double mean = 0.0;
  double std_err = 0.0;
  std::int64_t n = 0;
  bool degenerate = false;  // n == 1: standard error undefined, reported as 0
};

inline Summary summarize(const std::vector<double>& xs) {
  StatSummary s;
  for (double x : xs) s.add(x);
  return {s.mean(), s.count > 1 ? s.std_err() : 0.0, s.count, s.count == 1};
}

// Plays `games` fresh games with the agent decoded from `point`.
inline std::vector<double> validate_point(const ExperimentConfig& cfg, const Point& point, int games,
                                          std::uint64_t seed) {
  Evaluator eval(cfg, seed);
  std::vector<double> out;
  out.reserve(games);
  for (int g = 0; g < games; ++g) out.push_back(eval(point));
  return out;
}

// Uniform-random policy. Planet Wars plays it against the fixed opponent;
// the synthetic game samples uniformly random points.
inline Summary random_agent_baseline(const ExperimentConfig& cfg, int games, std::uint64_t seed) {
  if (games < 1) throw ConfigError("games must be >= 1");
  std::vector<double> xs;
  std::optional<SyntheticProblem> synth;
  if (cfg.game == GameKind::kSynthetic) synth.emplace(cfg.space, cfg.synthetic);
  for (int g = 0; g < games; ++g) {
    const std::uint64_t s = derive_seed(seed, g);
    switch (cfg.game) {
      case GameKind::kAsteroids:
        xs.push_back(tuning::play_asteroids(tuning::Policy::random(), cfg.asteroids, s, cfg.fm_budget));
        break;
      case GameKind::kPlanetWars:
        xs.push_back(tuning::play_planet_wars(tuning::Policy::random(), tuning::Policy::rhea(cfg.opponent),
                                              cfg.planet_wars, s, cfg.fm_budget));
        break;
      case GameKind::kSynthetic: {
        Rng rng(s);
        xs.push_back(synth->sample(cfg.space.random_point(rng), rng));
        break;
      }
    }
  }
  return summarize(xs);
}

struct TrialResult {
  int trial = 0;
  Point recommended;
  std::string params;  // decoded RHEA parameters, or the point for synthetic
  std::vector<double> validation;
  double validation_mean = 0.0;
  double validation_std_err = 0.0;
  std::int64_t evals_used = 0;
  double wall_time = 0.0;
  std::vector<Sample> history;
  std::optional<NTupleSystem> model;
};

// Stream tags for derive_seed(master, trial, tag).
inline constexpr std::uint64_t kOptimizerStream = 0;
inline constexpr std::uint64_t kEvaluatorStream = 1;
inline constexpr std::uint64_t kValidationStream = 2;

inline std::string describe(const ExperimentConfig& cfg, const Point& p) {
  if (cfg.game == GameKind::kSynthetic) return to_string(p);
  return rhea::to_string(tuning::decode(cfg.space, p));
}

inline TrialResult run_trial(const ExperimentConfig& cfg, int trial) {
  const auto t0 = std::chrono::steady_clock::now();
  TrialResult r;
  r.trial = trial;
  Rng rng(derive_seed(cfg.master_seed, trial, kOptimizerStream));
  Evaluator eval(cfg, derive_seed(cfg.master_seed, trial, kEvaluatorStream));
  switch (cfg.optimizer) {
    case OptimizerKind::kNtbea: {
      auto res = run(eval, cfg.space, cfg.ntbea(), rng);
      r.recommended = res.recommended;
      r.history = std::move(res.history);
      r.evals_used = res.evals_used;
      r.model.emplace(std::move(res.model));
      break;
    }
    case OptimizerKind::kGrid:
    case OptimizerKind::kRandom:
    case OptimizerKind::kSwcga: {
      OptimizerResult res;
      if (cfg.optimizer == OptimizerKind::kGrid) {
        res = grid_search(eval, cfg.space, cfg.budget, rng);
      } else if (cfg.optimizer == OptimizerKind::kRandom) {
        res = random_search(eval, cfg.space, cfg.budget, rng);
      } else {
        res = swcga(eval, cfg.space, SWcGAConfig{cfg.swcga_window, cfg.budget}, rng);
      }
      r.recommended = res.recommended;
      r.history = std::move(res.history);
      r.evals_used = res.evals_used;
      break;
    }
  }
  r.params = describe(cfg, r.recommended);
  r.validation = validate_point(cfg, r.recommended, cfg.validation_games,
                                derive_seed(cfg.master_seed, trial, kValidationStream));
  const auto s = summarize(r.validation);
  r.validation_mean = s.mean;
  r.validation_std_err = s.std_err;
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialResult> trials;
  Summary aggregate;  // over the per-trial validation means
};

// Trials run on a small worker pool; results are stored by trial index.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport report{cfg, std::vector<TrialResult>(cfg.trials), {}};
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = std::min(cfg.trials, cfg.threads > 0 ? cfg.threads : static_cast<int>(hw));
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(cfg.trials);
  auto work = [&] {
    for (int i = next++; i < cfg.trials; i = next++) {
      try {
        report.trials[i] = run_trial(cfg, i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<double> means;
  for (const auto& t : report.trials) means.push_back(t.validation_mean);
  report.aggregate = summarize(means);
  return report;
}

inline void write_trials_csv(std::ostream& os, const ExperimentReport& r) {
  os << "trial,recommended,params,validation_mean,validation_std_err,validation_games,evals_used\n";
  for (const auto& t : r.trials) {
    os << t.trial << ",\"" << to_string(t.recommended) << "\",\"" << t.params << "\","
       << format_double(t.validation_mean) << ',' << format_double(t.validation_std_err) << ','
       << t.validation.size() << ',' << t.evals_used << '\n';
  }
}

inline void write_aggregate_csv(std::ostream& os, const ExperimentReport& r) {
  os << "game,optimizer,trials,budget,mean,std_err\n";
  os << to_string(r.config.game) << ',' << to_string(r.config.optimizer) << ',' << r.trials.size() << ','
     << r.config.budget << ',' << format_double(r.aggregate.mean) << ',' << format_double(r.aggregate.std_err)
     << '\n';
}

// Writes trials.csv, aggregate.csv, config.json, ntuple_stats.csv (NTBEA:
// the model of trial 0), samples_<i>.log per trial, and timing.csv. Every
// file except timing.csv is a pure function of the config.
inline void write_report(const std::filesystem::path& dir, const ExperimentReport& r) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw std::runtime_error(std::string("cannot write ") + (dir / name).string());
    return f;
  };
  {
    auto f = open("trials.csv");
    write_trials_csv(f, r);
  }
  {
    auto f = open("aggregate.csv");
    write_aggregate_csv(f, r);
  }
  {
    auto f = open("config.json");
    f << to_json(r.config).dump(2) << '\n';
  }
  {
    auto f = open("timing.csv");
    f << "trial,wall_time_s\n";
    for (const auto& t : r.trials) f << t.trial << ',' << t.wall_time << '\n';
  }
  if (!r.trials.empty() && r.trials.front().model) {
    auto f = open("ntuple_stats.csv");
    write_report_csv(f, r.trials.front().model->report());
  }
  for (const auto& t : r.trials) {
    const auto name = "samples_" + std::to_string(t.trial) + ".log";
    auto f = open(name.c_str());
    write_sample_log(f, t.history);
  }
}

// One-line summary, e.g. "planetwars ntbea 0.5400 +- 0.0200 (10 trials)".
inline std::string format_summary(const ExperimentReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s %s %.4f +- %.4f (%zu trials)", to_string(r.config.game).c_str(),
                to_string(r.config.optimizer).c_str(), r.aggregate.mean, r.aggregate.std_err, r.trials.size());
  return buf;
}

}  // namespace ntbea::experiment

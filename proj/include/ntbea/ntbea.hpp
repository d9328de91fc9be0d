#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "ntbea/errors.hpp"
#include "ntbea/mutation.hpp"
#include "ntbea/ntuple.hpp"
#include "ntbea/random.hpp"
#include "ntbea/search_space.hpp"

namespace ntbea {

enum class RecommendMode { kDimensionWise, kBestSampled };

inline std::string to_string(RecommendMode m) {
  return m == RecommendMode::kDimensionWise ? "dimension_wise" : "best_sampled";
}

inline RecommendMode parse_recommend_mode(const std::string& s) {
  if (s == "dimension_wise" || s == "dimensionWise") return RecommendMode::kDimensionWise;
  if (s == "best_sampled" || s == "bestSampled") return RecommendMode::kBestSampled;
  throw ConfigError("unknown recommend mode '" + s + "'");
}

struct NTBEAConfig {
  int neighborhood_size = 50;
  double mutation_prob = 0.2;
  bool flip_once = true;
  bool mutate_to_different = false;
  double k = 1.0;
  double epsilon = 0.5;
  double default_mean = 0.0;
  double tie_break_noise = 1e-6;
  std::int64_t nb_evals = 100;
  TupleFlags tuples;
  RecommendMode recommend = RecommendMode::kDimensionWise;
  bool record_trace = false;

  void validate() const {
    if (neighborhood_size < 1) throw ConfigError("neighborhood size must be >= 1");
    if (!(mutation_prob > 0.0 && mutation_prob < 1.0)) {
      throw ConfigError("mutation probability must be in (0, 1)");
    }
    if (!(k >= 0.0)) throw ConfigError("k must be >= 0");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    if (nb_evals < 1) throw ConfigError("evaluation budget must be >= 1");
    if (!(tie_break_noise >= 0.0)) throw ConfigError("tie-break noise must be >= 0");
    if (!tuples.one && !tuples.two && !tuples.full) {
      throw ConfigError("at least one tuple set must be enabled");
    }
  }

  UcbParams ucb() const { return {k, epsilon, default_mean}; }
  MutationParams mutation() const { return {mutation_prob, flip_once, mutate_to_different}; }
};

struct TraceRow {
  std::int64_t iteration = 0;
  Point current;
  double fitness = 0.0;
  Point next;
  double next_ucb = 0.0;
};

struct RunResult {
  Point recommended;
  NTupleSystem model;
  std::vector<Sample> history;
  std::int64_t evals_used = 0;
  std::vector<TraceRow> trace;
};

// Neighbourhood of `current`: n mutated copies, duplicates removed (first
// occurrence kept). The batch is not refilled, so fewer than n may return.
template <typename Engine>
std::vector<Point> neighbors(const Point& current, const SearchSpace& space, int n,
                             const MutationParams& m, Engine& rng,
                             std::vector<std::vector<bool>>* attempts = nullptr) {
  space.check(current);
  std::vector<Point> out;
  out.reserve(n);
  std::set<Point> seen;
  if (attempts) attempts->clear();
  std::vector<bool> mask;
  for (int i = 0; i < n; ++i) {
    Point p = current;
    mutate_genome(p, [&](int j) { return space.arity(j); }, m, rng, attempts ? &mask : nullptr);
    if (attempts) attempts->push_back(mask);
    if (seen.insert(p).second) out.push_back(std::move(p));
  }
  return out;
}

// Point returned once the budget is spent.
//   kDimensionWise: each dimension takes the value with the highest marginal
//     mean over the sampled points (the 1-tuple statistic); ties go to the
//     most-visited value, then to the lowest index.
//   kBestSampled: the distinct sampled point with the highest model mean.
inline Point recommend(const NTupleSystem& model, RecommendMode mode) {
  const auto& samples = model.samples();
  if (samples.empty()) throw InvariantError("cannot recommend from an empty model");
  const auto& space = model.space();
  if (mode == RecommendMode::kBestSampled) {
    std::set<Point> distinct;
    for (const auto& s : samples) distinct.insert(s.point);
    Point best;
    double best_v = -INFINITY;
    for (const auto& p : distinct) {
      const double v = model.mean_estimate(p);
      if (best.empty() || v > best_v) {
        best = p;
        best_v = v;
      }
    }
    return best;
  }
  Point out(space.dimensions(), 0);
  for (std::size_t i = 0; i < space.dimensions(); ++i) {
    std::vector<StatSummary> marginal(space.arity(i));
    for (const auto& s : samples) marginal[s.point[i]].add(s.fitness);
    int best = -1;
    for (int v = 0; v < space.arity(i); ++v) {
      if (marginal[v].count == 0) continue;
      if (best < 0) {
        best = v;
        continue;
      }
      const double mv = marginal[v].mean();
      const double mb = marginal[best].mean();
      if (mv > mb || (mv == mb && marginal[v].count > marginal[best].count)) best = v;
    }
    out[i] = best;
  }
  return out;
}

// The bandit-guided (1, n) evolutionary loop: evaluate the current point once,
// add it to the model, then move to the neighbour with the highest aggregate
// UCB. The current point is never part of its own candidate set.
template <typename Evaluator, typename Engine>
RunResult run(Evaluator&& evaluate, const SearchSpace& space, const NTBEAConfig& config,
              Engine& rng) {
  config.validate();
  RunResult result{{}, NTupleSystem(space, config.tuples), {}, 0, {}};
  const UcbParams ucb = config.ucb();
  const MutationParams mutation = config.mutation();
  Point current = space.random_point(rng);
  for (std::int64_t t = 0; t < config.nb_evals; ++t) {
    double value = 0.0;
    try {
      value = static_cast<double>(evaluate(current));
    } catch (const std::exception& e) {
      throw EvaluationError(std::string("evaluator failed: ") + e.what(), result.evals_used);
    }
    ++result.evals_used;
    if (!std::isfinite(value)) {
      throw EvaluationError("evaluator returned a non-finite fitness", result.evals_used);
    }
    result.model.add_sample(current, value);
    result.history.push_back({current, value});

    const auto population = neighbors(current, space, config.neighborhood_size, mutation, rng);
    std::size_t best = 0;
    double best_v = -INFINITY;
    for (std::size_t i = 0; i < population.size(); ++i) {
      const double v = ucb_value(result.model, population[i], ucb, rng, config.tie_break_noise);
      if (v > best_v) {
        best_v = v;
        best = i;
      }
    }
    if (config.record_trace) {
      result.trace.push_back({t, current, value, population[best], best_v});
    }
    current = population[best];
  }
  result.recommended = recommend(result.model, config.recommend);
  return result;
}

inline void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace) {
  os << "iteration,current,fitness,next,next_ucb\n";
  for (const auto& r : trace) {
    os << r.iteration << ",\"" << to_string(r.current) << "\"," << format_double(r.fitness)
       << ",\"" << to_string(r.next) << "\"," << format_double(r.next_ucb) << '\n';
  }
}

}  // namespace ntbea

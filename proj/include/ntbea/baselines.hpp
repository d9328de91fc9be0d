#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <exception>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "ntbea/errors.hpp"
#include "ntbea/ntuple.hpp"
#include "ntbea/random.hpp"
#include "ntbea/search_space.hpp"

namespace ntbea {

struct OptimizerResult {
  Point recommended;
  std::vector<Sample> history;
  std::int64_t evals_used = 0;
};

namespace detail {

template <typename Evaluator>
double checked_eval(Evaluator& evaluate, const Point& p, OptimizerResult& r) {
  double v = 0.0;
  try {
    v = static_cast<double>(evaluate(p));
  } catch (const std::exception& e) {
    throw EvaluationError(std::string("evaluator failed: ") + e.what(), r.evals_used);
  }
  ++r.evals_used;
  if (!std::isfinite(v)) throw EvaluationError("evaluator returned a non-finite fitness", r.evals_used);
  r.history.push_back({p, v});
  return v;
}

// Highest observed fitness, first occurrence on ties.
inline Point best_observed(const std::vector<Sample>& history) {
  auto it = std::max_element(history.begin(), history.end(),
                             [](const Sample& a, const Sample& b) { return a.fitness < b.fitness; });
  return it->point;
}

}  // namespace detail

// Evaluates points in lexicographic order, wrapping around if the budget
// exceeds the space size. The rng is accepted for interface symmetry only.
template <typename Evaluator, typename Engine>
OptimizerResult grid_search(Evaluator&& evaluate, const SearchSpace& space, std::int64_t budget,
                            Engine& /*rng*/) {
  if (budget < 1) throw ConfigError("budget must be >= 1");
  OptimizerResult r;
  for (std::int64_t t = 0; t < budget; ++t) {
    detail::checked_eval(evaluate, space.point_at(static_cast<std::uint64_t>(t) % space.size()), r);
  }
  r.recommended = detail::best_observed(r.history);
  return r;
}

template <typename Evaluator, typename Engine>
OptimizerResult random_search(Evaluator&& evaluate, const SearchSpace& space, std::int64_t budget,
                              Engine& rng) {
  if (budget < 1) throw ConfigError("budget must be >= 1");
  OptimizerResult r;
  for (std::int64_t t = 0; t < budget; ++t) detail::checked_eval(evaluate, space.random_point(rng), r);
  r.recommended = detail::best_observed(r.history);
  return r;
}

struct SWcGAConfig {
  int window_size = 50;
  std::int64_t budget = 100;
  // Probability floor is floor_scale / arity.
  double floor_scale = 0.01;

  void validate() const {
    if (window_size < 2) throw ConfigError("SWcGA window size must be >= 2");
    if (budget < window_size) throw ConfigError("SWcGA budget must be >= window size");
    if (!(floor_scale >= 0.0 && floor_scale < 1.0)) throw ConfigError("SWcGA floor scale must be in [0, 1)");
  }
};

// Per-dimension categorical distributions of the multi-valued compact GA.
class ProductDistribution {
 public:
  explicit ProductDistribution(const SearchSpace& space) {
    for (int a : space.arities()) probs_.emplace_back(a, 1.0 / a);
  }

  const std::vector<std::vector<double>>& probs() const { return probs_; }

  template <typename Engine>
  Point sample(Engine& rng) const {
    Point p(probs_.size());
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      std::discrete_distribution<int> dist(probs_[i].begin(), probs_[i].end());
      p[i] = dist(rng);
    }
    return p;
  }

  // Moves `step` of mass toward the winner's value and away from the loser's
  // value in every dimension, then re-imposes the floor floor_scale/arity.
  void update(const Point& winner, const Point& loser, double step, double floor_scale) {
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      if (winner[i] == loser[i]) continue;
      auto& p = probs_[i];
      p[winner[i]] += step;
      p[loser[i]] -= step;
      const double n = static_cast<double>(p.size());
      const double floor = floor_scale / n;
      double excess = 0.0;
      for (double& x : p) {
        x = std::max(x - floor, 0.0);
        excess += x;
      }
      for (double& x : p) x = excess > 0.0 ? floor + (1.0 - n * floor) * x / excess : 1.0 / n;
    }
  }

  Point mode() const {
    Point p(probs_.size());
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      p[i] = static_cast<int>(std::max_element(probs_[i].begin(), probs_[i].end()) - probs_[i].begin());
    }
    return p;
  }

 private:
  std::vector<std::vector<double>> probs_;
};

// Sliding-window compact GA over integer genes, using absolute fitness: once
// the FIFO window is full, every new sample triggers an update from the best
// and worst entries currently in the window.
template <typename Evaluator, typename Engine>
OptimizerResult swcga(Evaluator&& evaluate, const SearchSpace& space, const SWcGAConfig& config,
                      Engine& rng, std::vector<ProductDistribution>* snapshots = nullptr) {
  config.validate();
  OptimizerResult r;
  ProductDistribution dist(space);
  std::deque<Sample> window;
  const double step = 1.0 / config.window_size;
  for (std::int64_t t = 0; t < config.budget; ++t) {
    Point p = dist.sample(rng);
    const double v = detail::checked_eval(evaluate, p, r);
    window.push_back({std::move(p), v});
    if (static_cast<int>(window.size()) > config.window_size) window.pop_front();
    if (static_cast<int>(window.size()) == config.window_size) {
      std::size_t best = 0, worst = 0;
      for (std::size_t i = 1; i < window.size(); ++i) {
        if (window[i].fitness > window[best].fitness) best = i;
        if (window[i].fitness < window[worst].fitness) worst = i;
      }
      if (window[best].fitness > window[worst].fitness) {
        dist.update(window[best].point, window[worst].point, step, config.floor_scale);
      }
    }
    if (snapshots) snapshots->push_back(dist);
  }
  r.recommended = dist.mode();
  return r;
}

// Same columns as the NTBEA trace; next_ucb is left empty.
inline void write_history_csv(std::ostream& os, const std::vector<Sample>& history) {
  os << "iteration,current,fitness,next,next_ucb\n";
  for (std::size_t i = 0; i < history.size(); ++i) {
    os << i << ",\"" << to_string(history[i].point) << "\"," << format_double(history[i].fitness)
       << ",\"" << (i + 1 < history.size() ? to_string(history[i + 1].point) : std::string()) << "\",\n";
  }
}

}  // namespace ntbea

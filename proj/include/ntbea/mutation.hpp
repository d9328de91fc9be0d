#pragma once

#include <random>
#include <vector>

#include "ntbea/random.hpp"

namespace ntbea {

struct MutationParams {
  double prob = 0.2;       // independent per-gene mutation probability
  bool flip_once = true;   // force one uniformly chosen gene to mutate
  bool to_different = false;  // draw from the other arity-1 values only
};

// Mutates `genome` in place. Gene j takes values in [0, arity(j)). When
// `attempted` is non-null it receives the mask of genes a mutation was drawn
// for (whether or not the drawn value differs).
template <typename Genome, typename ArityFn, typename Engine>
void mutate_genome(Genome& genome, ArityFn&& arity, const MutationParams& m, Engine& rng,
                   std::vector<bool>* attempted = nullptr) {
  const int d = static_cast<int>(genome.size());
  if (attempted) attempted->assign(d, false);
  if (d == 0) return;
  const int forced = m.flip_once ? uniform_index(rng, d) : -1;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int j = 0; j < d; ++j) {
    if (j != forced && !(coin(rng) < m.prob)) continue;
    if (attempted) (*attempted)[j] = true;
    const int a = arity(j);
    if (m.to_different) {
      if (a > 1) {
        const int v = uniform_index(rng, a - 1);
        genome[j] = v >= genome[j] ? v + 1 : v;
      }
    } else {
      genome[j] = uniform_index(rng, a);
    }
  }
}

}  // namespace ntbea

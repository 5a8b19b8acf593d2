#pragma once

// Seeded random instances for the test harness. Output is a pure function of
// the seed: identical bytes on every run.

#include <cstdint>
#include <random>
#include <vector>

#include "hmsf/cnf.hpp"
#include "hmsf/error.hpp"
#include "hmsf/hgraph.hpp"

namespace hmsf {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : eng_() % n; }

  int int_in(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  double unit() { return static_cast<double>(eng_() >> 11) * (1.0 / 9007199254740992.0); }

 private:
  std::mt19937_64 eng_;
};

inline Formula random_formula(int num_vars, int num_clauses, Rng& rng) {
  if (num_vars < 3)
    throw Error(ErrorCode::InvalidArgument,
                "need at least 3 variables for distinct-variable 3-clauses");
  if (num_clauses < 1) throw Error(ErrorCode::InvalidArgument, "need at least 1 clause");
  Formula f;
  f.num_vars = num_vars;
  std::vector<int> pool(static_cast<std::size_t>(num_vars));
  for (int i = 0; i < num_vars; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
  for (int j = 0; j < num_clauses; ++j) {
    Clause c;
    for (int slot = 0; slot < 3; ++slot) {
      int swap_at = slot + static_cast<int>(rng.below(static_cast<std::uint64_t>(num_vars - slot)));
      std::swap(pool[static_cast<std::size_t>(slot)], pool[static_cast<std::size_t>(swap_at)]);
      c.literals[static_cast<std::size_t>(slot)] =
          Literal{pool[static_cast<std::size_t>(slot)], rng.below(2) == 1};
    }
    f.clauses.push_back(c);
  }
  return f;
}

inline Formula random_formula(int num_vars, int num_clauses, std::uint64_t seed) {
  Rng rng(seed);
  return random_formula(num_vars, num_clauses, rng);
}

inline HeteroGraph random_hgraph(int num_nodes, int num_trees, double density, Cost max_cost,
                                 Rng& rng) {
  if (num_nodes < 1 || num_trees < 1 || num_nodes < num_trees)
    throw Error(ErrorCode::InvalidArgument, "need num_nodes >= num_trees >= 1");
  if (density < 0.0 || density > 1.0)
    throw Error(ErrorCode::InvalidArgument, "density must be in [0, 1]");
  HeteroGraph g(num_nodes, num_trees);
  for (int u = 0; u < num_nodes; ++u)
    for (int v = u + 1; v < num_nodes; ++v) {
      if (rng.unit() >= density) continue;
      std::vector<Cost> costs(static_cast<std::size_t>(num_trees));
      for (int i = 0; i < num_trees; ++i) costs[static_cast<std::size_t>(i)] = rng.below(max_cost + 1);
      g.add_edge(u, v, std::move(costs));
    }
  return g;
}

// Random instance with roots 0..t-1 and no budget.
inline Instance random_instance(int num_nodes, int num_trees, double density, Cost max_cost,
                                std::uint64_t seed) {
  Rng rng(seed);
  HeteroGraph g = random_hgraph(num_nodes, num_trees, density, max_cost, rng);
  std::vector<int> roots;
  for (int i = 0; i < num_trees; ++i) roots.push_back(i);
  return Instance{std::move(g), std::move(roots), std::nullopt};
}

}  // namespace hmsf

#pragma once

// Exact spanning-forest optimization. Every assignment of non-root nodes to
// the trees is enumerated; for a fixed assignment the tree costs are
// independent sums under one cost function each, so a per-tree minimum
// spanning tree is exact. A subset-enumeration oracle double-checks the
// enumerator at tiny scale.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hmsf/error.hpp"
#include "hmsf/hgraph.hpp"

namespace hmsf {

struct MstResult {
  std::vector<std::pair<int, int>> edges;
  Cost cost = 0;
};

// Minimum spanning tree of the subgraph induced by `nodes` under cost
// function tree_index. Among equal-cost trees returns the lexicographically
// smallest edge set (edges as sorted (u,v) pairs). Disconnected induced
// subgraphs yield nullopt.
inline std::optional<MstResult> mst(const HeteroGraph& g, const std::vector<int>& nodes,
                                    int tree_index) {
  if (tree_index < 0 || tree_index >= g.num_trees())
    throw Error(ErrorCode::InvalidArgument, "tree index out of range");
  if (nodes.empty()) throw Error(ErrorCode::InvalidArgument, "empty node subset");
  std::vector<char> in_set(static_cast<std::size_t>(g.num_nodes()), 0);
  for (int node : nodes) {
    if (node < 0 || node >= g.num_nodes())
      throw Error(ErrorCode::InvalidArgument, "node " + std::to_string(node) + " out of range");
    if (in_set[static_cast<std::size_t>(node)])
      throw Error(ErrorCode::InvalidArgument, "node " + std::to_string(node) + " repeated");
    in_set[static_cast<std::size_t>(node)] = 1;
  }
  const int want = static_cast<int>(nodes.size()) - 1;

  struct Cand {
    Cost c;
    int u, v;
  };
  std::vector<Cand> by_cost;
  for (const Edge& e : g.edges())
    if (in_set[static_cast<std::size_t>(e.u)] && in_set[static_cast<std::size_t>(e.v)])
      by_cost.push_back({e.costs[static_cast<std::size_t>(tree_index)], e.u, e.v});
  std::sort(by_cost.begin(), by_cost.end(), [](const Cand& a, const Cand& b) {
    return std::tie(a.c, a.u, a.v) < std::tie(b.c, b.u, b.v);
  });

  // optimum cost via plain Kruskal
  detail::Dsu dsu(g.num_nodes());
  Cost best_cost = 0;
  int picked = 0;
  for (const Cand& e : by_cost) {
    if (picked == want) break;
    if (dsu.unite(e.u, e.v)) {
      best_cost += e.c;  // per-index sums stay within the construction guard
      ++picked;
    }
  }
  if (picked < want) return std::nullopt;

  // canonical edge set: grow in (u,v) order, keeping an edge only when some
  // optimum tree still contains everything chosen so far
  std::vector<Cand> by_pair = by_cost;
  std::sort(by_pair.begin(), by_pair.end(), [](const Cand& a, const Cand& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });

  MstResult result;
  detail::Dsu chosen(g.num_nodes());
  Cost chosen_cost = 0;
  for (const Cand& e : by_pair) {
    if (static_cast<int>(result.edges.size()) == want) break;
    if (chosen.find(e.u) == chosen.find(e.v)) continue;
    // cheapest completion with this edge forced in
    detail::Dsu trial = chosen;
    trial.unite(e.u, e.v);
    Cost total = chosen_cost + e.c;
    int count = static_cast<int>(result.edges.size()) + 1;
    for (const Cand& rest : by_cost) {
      if (count == want) break;
      if (trial.unite(rest.u, rest.v)) {
        total += rest.c;
        ++count;
      }
    }
    if (count == want && total == best_cost) {
      chosen.unite(e.u, e.v);
      chosen_cost += e.c;
      result.edges.emplace_back(e.u, e.v);
    }
  }
  result.cost = best_cost;
  return result;
}

struct SolveResult {
  Cost min_cost = 0;
  SpanningForest forest;
  std::uint64_t feasible_partitions = 0;

  friend bool operator==(const SolveResult& a, const SolveResult& b) {
    return a.min_cost == b.min_cost && a.forest == b.forest &&
           a.feasible_partitions == b.feasible_partitions;
  }
};

struct SolveLimits {
  // cap on the number of enumerated partitions, trees^(nodes - roots);
  // 1<<24 corresponds to 24 free nodes in the two-tree case
  std::uint64_t max_partitions = std::uint64_t{1} << 24;
};

namespace detail {

struct SortedEdge {
  Cost c;
  int u, v;
};

inline SpanningForest forest_from_partition(const Instance& inst,
                                            const std::vector<int>& tree_of) {
  SpanningForest forest;
  const int t = inst.graph.num_trees();
  forest.trees.resize(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) {
    forest.trees[static_cast<std::size_t>(i)].root = inst.roots[static_cast<std::size_t>(i)];
    std::vector<int> members;
    for (int node = 0; node < inst.graph.num_nodes(); ++node)
      if (tree_of[static_cast<std::size_t>(node)] == i) members.push_back(node);
    auto tree = mst(inst.graph, members, i);
    if (!tree)
      throw Error(ErrorCode::NoSpanningForest, "internal: winning partition lost connectivity");
    forest.trees[static_cast<std::size_t>(i)].edges = std::move(tree->edges);
  }
  return forest;
}

}  // namespace detail

// Exact minimum: enumerates every partition of the non-root nodes over the
// trees (lexicographic encoding order, node ids ascending) and prices each
// side with a minimum spanning tree. First partition reaching the optimum
// wins ties. Throws TooLarge beyond limits.max_partitions and
// NoSpanningForest when every partition leaves some tree disconnected.
inline SolveResult solve_exact(const Instance& inst, const SolveLimits& limits = {}) {
  validate_instance(inst);
  const int n = inst.graph.num_nodes();
  const int t = inst.graph.num_trees();

  std::vector<int> non_roots;
  std::vector<int> tree_of(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < t; ++i) tree_of[static_cast<std::size_t>(inst.roots[static_cast<std::size_t>(i)])] = i;
  for (int node = 0; node < n; ++node)
    if (tree_of[static_cast<std::size_t>(node)] == -1) non_roots.push_back(node);
  const int q = static_cast<int>(non_roots.size());

  std::uint64_t total_partitions = 1;
  for (int i = 0; i < q; ++i) {
    if (total_partitions > limits.max_partitions / static_cast<std::uint64_t>(t))
      throw Error(ErrorCode::TooLarge,
                  std::to_string(n - t) + " free nodes exceed the enumeration bound (" +
                      std::to_string(limits.max_partitions) + " partitions)");
    total_partitions *= static_cast<std::uint64_t>(t);
  }

  // per-tree edge lists pre-sorted by (cost, u, v)
  std::vector<std::vector<detail::SortedEdge>> sorted(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) {
    auto& list = sorted[static_cast<std::size_t>(i)];
    for (const Edge& e : inst.graph.edges())
      list.push_back({e.costs[static_cast<std::size_t>(i)], e.u, e.v});
    std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
      return std::tie(a.c, a.u, a.v) < std::tie(b.c, b.u, b.v);
    });
  }

  std::vector<int> digits(static_cast<std::size_t>(q), 0);
  std::vector<int> tree_size(static_cast<std::size_t>(t), 1);  // roots
  for (int node : non_roots) tree_of[static_cast<std::size_t>(node)] = 0;
  tree_size[0] += q;

  detail::Dsu dsu(n);
  std::uint64_t feasible = 0;
  bool have_best = false;
  Cost best_cost = 0;
  std::vector<int> best_digits;

  for (std::uint64_t code = 0;; ++code) {
    // price this partition
    dsu.reset();
    Cost total = 0;
    bool feasible_here = true;
    for (int i = 0; i < t && feasible_here; ++i) {
      const int want = tree_size[static_cast<std::size_t>(i)] - 1;
      int picked = 0;
      Cost tree_cost = 0;
      if (want > 0) {
        for (const auto& e : sorted[static_cast<std::size_t>(i)]) {
          if (tree_of[static_cast<std::size_t>(e.u)] != i ||
              tree_of[static_cast<std::size_t>(e.v)] != i)
            continue;
          if (dsu.unite(e.u, e.v)) {
            tree_cost += e.c;
            if (++picked == want) break;
          }
        }
      }
      if (picked < want)
        feasible_here = false;
      else
        total = checked_add(total, tree_cost);
    }
    if (feasible_here) {
      ++feasible;
      if (!have_best || total < best_cost) {
        have_best = true;
        best_cost = total;
        best_digits = digits;
      }
    }

    // next partition: base-t odometer, last position least significant,
    // so codes enumerate encodings in lexicographic order
    int pos = q - 1;
    while (pos >= 0 && digits[static_cast<std::size_t>(pos)] == t - 1) {
      digits[static_cast<std::size_t>(pos)] = 0;
      --tree_size[static_cast<std::size_t>(t - 1)];
      ++tree_size[0];
      tree_of[static_cast<std::size_t>(non_roots[static_cast<std::size_t>(pos)])] = 0;
      --pos;
    }
    if (pos < 0) break;
    int& d = digits[static_cast<std::size_t>(pos)];
    --tree_size[static_cast<std::size_t>(d)];
    ++d;
    ++tree_size[static_cast<std::size_t>(d)];
    tree_of[static_cast<std::size_t>(non_roots[static_cast<std::size_t>(pos)])] = d;
  }

  if (!have_best)
    throw Error(ErrorCode::NoSpanningForest, "no partition admits a spanning forest");

  // rebuild the winner with canonical per-tree trees
  for (int i = 0; i < t; ++i) tree_of[static_cast<std::size_t>(inst.roots[static_cast<std::size_t>(i)])] = i;
  for (int p = 0; p < q; ++p)
    tree_of[static_cast<std::size_t>(non_roots[static_cast<std::size_t>(p)])] =
        best_digits[static_cast<std::size_t>(p)];
  SolveResult result;
  result.min_cost = best_cost;
  result.feasible_partitions = feasible;
  result.forest = detail::forest_from_partition(inst, tree_of);
  return result;
}

// Decision form: is there a spanning forest of cost at most the budget?
inline bool solve_decision(const Instance& inst, const SolveLimits& limits = {}) {
  if (!inst.budget)
    throw Error(ErrorCode::MissingBudget, "instance has no budget line");
  return solve_exact(inst, limits).min_cost <= *inst.budget;
}

// Independent oracle: enumerates every edge subset of size nodes - trees,
// keeps those that verify as spanning forests, and returns the cheapest.
// Deliberately shares no search logic with solve_exact.
inline SolveResult brute_force_enum(const Instance& inst) {
  validate_instance(inst);
  const int n = inst.graph.num_nodes();
  const int t = inst.graph.num_trees();
  const int num_edges = static_cast<int>(inst.graph.edges().size());
  if (n > 9 || num_edges > 18)
    throw Error(ErrorCode::TooLarge, "oracle bound is 9 nodes and 18 edges");
  const int target = n - t;

  Instance no_budget{inst.graph, inst.roots, std::nullopt};

  // edges in (u,v) order for deterministic subset enumeration
  std::vector<std::pair<int, int>> pairs;
  for (const Edge& e : inst.graph.edges()) pairs.emplace_back(e.u, e.v);
  std::sort(pairs.begin(), pairs.end());

  bool have_best = false;
  SolveResult best;
  std::set<std::vector<int>> partitions_seen;

  std::vector<int> pick(static_cast<std::size_t>(target));
  for (int i = 0; i < target; ++i) pick[static_cast<std::size_t>(i)] = i;

  auto consider = [&](const std::vector<int>& subset) {
    detail::Dsu dsu(n);
    for (int idx : subset) {
      auto [u, v] = pairs[static_cast<std::size_t>(idx)];
      if (!dsu.unite(u, v)) return;  // cycle
    }
    // exactly t components remain; each must own one root
    std::vector<int> root_rep(static_cast<std::size_t>(t));
    for (int i = 0; i < t; ++i)
      root_rep[static_cast<std::size_t>(i)] = dsu.find(inst.roots[static_cast<std::size_t>(i)]);
    for (int i = 0; i < t; ++i)
      for (int j = i + 1; j < t; ++j)
        if (root_rep[static_cast<std::size_t>(i)] == root_rep[static_cast<std::size_t>(j)]) return;

    SpanningForest candidate;
    candidate.trees.resize(static_cast<std::size_t>(t));
    for (int i = 0; i < t; ++i)
      candidate.trees[static_cast<std::size_t>(i)].root = inst.roots[static_cast<std::size_t>(i)];
    std::vector<int> tree_of(static_cast<std::size_t>(n), -1);
    for (int node = 0; node < n; ++node) {
      int rep = dsu.find(node);
      for (int i = 0; i < t; ++i)
        if (rep == root_rep[static_cast<std::size_t>(i)]) tree_of[static_cast<std::size_t>(node)] = i;
    }
    for (int idx : subset) {
      auto [u, v] = pairs[static_cast<std::size_t>(idx)];
      int tree = tree_of[static_cast<std::size_t>(u)];
      if (tree < 0) return;  // component without a root
      candidate.trees[static_cast<std::size_t>(tree)].edges.emplace_back(u, v);
    }
    for (int node = 0; node < n; ++node)
      if (tree_of[static_cast<std::size_t>(node)] < 0) return;

    VerificationReport report = verify_forest(no_budget, candidate);
    if (!report.valid) return;
    partitions_seen.insert(tree_of);
    if (!have_best || *report.cost < best.min_cost) {
      have_best = true;
      best.min_cost = *report.cost;
      for (auto& tree : candidate.trees) std::sort(tree.edges.begin(), tree.edges.end());
      best.forest = candidate;
    }
  };

  if (target == 0) {
    consider({});
  } else if (target <= num_edges) {
    for (;;) {
      consider(pick);
      int i = target - 1;
      while (i >= 0 && pick[static_cast<std::size_t>(i)] == num_edges - target + i) --i;
      if (i < 0) break;
      ++pick[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < target; ++j)
        pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  }

  if (!have_best)
    throw Error(ErrorCode::NoSpanningForest, "no edge subset forms a spanning forest");
  best.feasible_partitions = partitions_seen.size();
  return best;
}

}  // namespace hmsf

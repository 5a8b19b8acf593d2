#pragma once

// 3-SAT to 2-HMSF reduction. For a 3-CNF formula with n variables and m
// clauses, builds a 2-heterogeneous graph on 2n+m+2 nodes:
//
//   node t (id 0) and node f (id 1), the tree roots;
//   nodes x_i (id 2i) and ~x_i (id 2i+1) per variable;
//   one node per clause (ids 2n+2 ... 2n+1+m).
//
// Edge families, with s = n+1:
//   type x  (x_i, ~x_i)   costs (1, 1)
//   type t  (t, x_i)      costs (s, s^2)
//   type f  (f, ~x_i)     costs (s^2, s)
//   type C  (C_j, x_i)    costs (s^2, 2s^2)      one edge per clause literal
//            (C_j, ~x_i)  costs (2s^2, s^2)
//
// Budget k = m*s^2 + n*s + n. The formula is satisfiable iff the instance
// admits a spanning forest of cost at most k rooted at t and f, and
// certificates translate both ways (assignment_to_forest /
// forest_to_assignment).
//
// Variants: GENERAL is the raw gadget. COMPLETE_CLOSURE completes it with
// shortest-path costs. METRIC first replaces the expensive cross costs
// w2(C_j, x_i) and w1(C_j, ~x_i) by s^2 + s, then completes; the result
// satisfies the triangle inequality under both cost functions.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hmsf/cnf.hpp"
#include "hmsf/error.hpp"
#include "hmsf/hgraph.hpp"

namespace hmsf {

enum class Variant { kGeneral, kCompleteClosure, kMetric };

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::kGeneral: return "general";
    case Variant::kCompleteClosure: return "closure";
    case Variant::kMetric: return "metric";
  }
  return "unknown";
}

inline std::optional<Variant> variant_from_string(const std::string& s) {
  if (s == "general") return Variant::kGeneral;
  if (s == "closure") return Variant::kCompleteClosure;
  if (s == "metric") return Variant::kMetric;
  return std::nullopt;
}

// k = m(n+1)^2 + n(n+1) + n
inline Cost budget_k(std::uint64_t n, std::uint64_t m) {
  if (n == std::numeric_limits<std::uint64_t>::max())
    throw Error(ErrorCode::Overflow, "n+1 exceeds 64 bits");
  Cost s = n + 1;
  Cost s2 = checked_mul(s, s);
  return checked_add(checked_add(checked_mul(m, s2), checked_mul(n, s)), n);
}

// Node-naming map retained for certificate translation and DOT styling.
struct ReductionArtifacts {
  Instance instance;
  int num_vars = 0;
  int num_clauses = 0;
  int t_node = 0;
  int f_node = 1;
  std::vector<int> pos_node;    // pos_node[i] = node of x_i, i in 1..n
  std::vector<int> neg_node;    // neg_node[i] = node of ~x_i
  std::vector<int> clause_node; // clause_node[j] = node of clause j, j in 1..m
  std::map<std::pair<int, int>, EdgeType> edge_type;  // gadget edges only
};

inline ReductionArtifacts reduce(const Formula& formula, Variant variant) {
  validate_formula(formula);
  const int n = formula.num_vars;
  const int m = static_cast<int>(formula.clauses.size());
  const Cost s = static_cast<Cost>(n) + 1;
  const Cost s2 = checked_mul(s, s);
  const Cost cheap = s2;
  const Cost expensive =
      variant == Variant::kMetric ? checked_add(s2, s) : checked_mul(2, s2);

  ReductionArtifacts art;
  art.num_vars = n;
  art.num_clauses = m;
  art.pos_node.assign(static_cast<std::size_t>(n) + 1, -1);
  art.neg_node.assign(static_cast<std::size_t>(n) + 1, -1);
  art.clause_node.assign(static_cast<std::size_t>(m) + 1, -1);

  HeteroGraph g(2 * n + m + 2, 2);
  g.set_label(0, "t");
  g.set_label(1, "f");
  for (int i = 1; i <= n; ++i) {
    art.pos_node[static_cast<std::size_t>(i)] = 2 * i;
    art.neg_node[static_cast<std::size_t>(i)] = 2 * i + 1;
    g.set_label(2 * i, "x" + std::to_string(i));
    g.set_label(2 * i + 1, "~x" + std::to_string(i));
  }
  for (int j = 1; j <= m; ++j) {
    art.clause_node[static_cast<std::size_t>(j)] = 2 * n + 1 + j;
    g.set_label(2 * n + 1 + j, "C" + std::to_string(j));
  }

  for (int i = 1; i <= n; ++i) {
    g.add_edge(2 * i, 2 * i + 1, {1, 1});
    art.edge_type[{2 * i, 2 * i + 1}] = EdgeType::X;
  }
  for (int i = 1; i <= n; ++i) {
    g.add_edge(0, 2 * i, {s, s2});
    art.edge_type[{0, 2 * i}] = EdgeType::T;
  }
  for (int i = 1; i <= n; ++i) {
    g.add_edge(1, 2 * i + 1, {s2, s});
    art.edge_type[{1, 2 * i + 1}] = EdgeType::F;
  }
  for (int j = 1; j <= m; ++j) {
    const Clause& clause = formula.clauses[static_cast<std::size_t>(j) - 1];
    const int cj = art.clause_node[static_cast<std::size_t>(j)];
    for (const Literal& lit : clause.literals) {
      if (lit.negated) {
        const int node = art.neg_node[static_cast<std::size_t>(lit.var)];
        g.add_edge(node, cj, {expensive, cheap});
        art.edge_type[{node, cj}] = EdgeType::C;
      } else {
        const int node = art.pos_node[static_cast<std::size_t>(lit.var)];
        g.add_edge(node, cj, {cheap, expensive});
        art.edge_type[{node, cj}] = EdgeType::C;
      }
    }
  }

  if (variant != Variant::kGeneral) g = metric_closure_complete(g);

  art.instance = Instance{std::move(g), {0, 1},
                          budget_k(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(m))};
  return art;
}

// Builds the canonical forest for a satisfying assignment: (t, x_i) when
// x_i is true, otherwise (f, ~x_i); per clause an edge to its first true
// literal; every variable-pair edge joins the tree its anchored endpoint
// already belongs to. Cost comes out to exactly the budget.
inline SpanningForest assignment_to_forest(const ReductionArtifacts& art, const Formula& formula,
                                           const Assignment& a) {
  if (!evaluate(formula, a))
    throw Error(ErrorCode::NotAModel, "assignment does not satisfy the formula");

  SpanningForest forest;
  forest.trees.resize(2);
  forest.trees[0].root = art.t_node;
  forest.trees[1].root = art.f_node;

  for (int i = 1; i <= art.num_vars; ++i) {
    const int pos = art.pos_node[static_cast<std::size_t>(i)];
    const int neg = art.neg_node[static_cast<std::size_t>(i)];
    if (a.value(i)) {
      forest.trees[0].edges.emplace_back(art.t_node, pos);
      forest.trees[0].edges.emplace_back(pos, neg);
    } else {
      forest.trees[1].edges.emplace_back(art.f_node, neg);
      forest.trees[1].edges.emplace_back(pos, neg);
    }
  }
  for (int j = 1; j <= art.num_clauses; ++j) {
    const Clause& clause = formula.clauses[static_cast<std::size_t>(j) - 1];
    const int cj = art.clause_node[static_cast<std::size_t>(j)];
    for (const Literal& lit : clause.literals) {
      if (a.value(lit.var) == lit.negated) continue;  // first true literal wins
      if (lit.negated)
        forest.trees[1].edges.emplace_back(art.neg_node[static_cast<std::size_t>(lit.var)], cj);
      else
        forest.trees[0].edges.emplace_back(art.pos_node[static_cast<std::size_t>(lit.var)], cj);
      break;
    }
  }
  for (auto& tree : forest.trees) {
    for (auto& [u, v] : tree.edges)
      if (u > v) std::swap(u, v);
    std::sort(tree.edges.begin(), tree.edges.end());
  }
  return forest;
}

// Reads an assignment back out of a verified certificate: x_i is true iff
// the forest contains the (t, x_i) edge. Rejects forests that fail
// verification (including the budget check).
inline Assignment forest_to_assignment(const ReductionArtifacts& art, const SpanningForest& f) {
  VerificationReport report = verify_forest(art.instance, f);
  if (!report.valid)
    throw Error(ErrorCode::InvalidCertificate,
                report.violations.empty() ? "certificate rejected"
                                          : report.violations.front().message);
  std::set<std::pair<int, int>> edges;
  for (const auto& tree : f.trees)
    for (auto [u, v] : tree.edges)
      edges.insert(u < v ? std::make_pair(u, v) : std::make_pair(v, u));

  std::vector<bool> values(static_cast<std::size_t>(art.num_vars));
  for (int i = 1; i <= art.num_vars; ++i) {
    const int pos = art.pos_node[static_cast<std::size_t>(i)];
    const auto key = art.t_node < pos ? std::make_pair(art.t_node, pos)
                                      : std::make_pair(pos, art.t_node);
    values[static_cast<std::size_t>(i) - 1] = edges.count(key) > 0;
  }
  return Assignment(std::move(values));
}

}  // namespace hmsf

#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <limits>
#include <vector>

#include "hmsf/cnf.hpp"
#include "hmsf/hgraph.hpp"

namespace test {

// (x1 v ~x2 v x3) ^ (x3 v ~x4 v ~x5), n = 5
inline hmsf::Formula example_formula() {
  return hmsf::parse_dimacs(std::string("p cnf 5 2\n1 -2 3 0\n3 -4 -5 0\n"));
}

// (x1 v x2 v x3), n = 3
inline hmsf::Formula single_clause_formula() {
  return hmsf::parse_dimacs(std::string("p cnf 3 1\n1 2 3 0\n"));
}

// all 8 sign patterns over {x1,x2,x3}: unsatisfiable
inline hmsf::Formula all_patterns_formula() {
  std::string text = "p cnf 3 8\n";
  for (int mask = 0; mask < 8; ++mask) {
    for (int var = 1; var <= 3; ++var)
      text += std::to_string((mask >> (3 - var)) & 1 ? -var : var) + " ";
    text += "0\n";
  }
  return hmsf::parse_dimacs(text);
}

inline hmsf::Assignment make_assignment(std::initializer_list<bool> values) {
  return hmsf::Assignment(std::vector<bool>(values));
}

// clause check written from scratch so solver tests have an oracle that does
// not route through hmsf::evaluate
inline bool satisfies_oracle(const hmsf::Formula& f, const std::vector<bool>& values) {
  for (const auto& clause : f.clauses) {
    bool any = false;
    for (const auto& lit : clause.literals) {
      bool v = values[static_cast<std::size_t>(lit.var) - 1];
      if (lit.negated ? !v : v) any = true;
    }
    if (!any) return false;
  }
  return true;
}

inline constexpr hmsf::Cost kUnreachable = std::numeric_limits<hmsf::Cost>::max();

// Floyd-Warshall all-pairs distances: the independent check for the
// Dijkstra-based metric closure.
inline std::vector<std::vector<hmsf::Cost>> floyd_warshall(const hmsf::HeteroGraph& g,
                                                           int tree_index) {
  const auto n = static_cast<std::size_t>(g.num_nodes());
  std::vector<std::vector<hmsf::Cost>> d(n, std::vector<hmsf::Cost>(n, kUnreachable));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const hmsf::Edge& e : g.edges()) {
    hmsf::Cost c = e.costs[static_cast<std::size_t>(tree_index)];
    auto u = static_cast<std::size_t>(e.u), v = static_cast<std::size_t>(e.v);
    if (c < d[u][v]) d[u][v] = d[v][u] = c;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i][k] == kUnreachable) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (d[k][j] == kUnreachable) continue;
        hmsf::Cost via = d[i][k] + d[k][j];
        if (via < d[i][j]) d[i][j] = via;
      }
    }
  return d;
}

}  // namespace test

#define REQUIRE_ERROR_CODE(expr, expected)                          \
  do {                                                              \
    bool caught_ = false;                                           \
    try {                                                           \
      (void)(expr);                                                 \
    } catch (const hmsf::Error& e_) {                               \
      caught_ = true;                                               \
      REQUIRE(e_.code() == (expected));                             \
    }                                                               \
    REQUIRE(caught_);                                               \
  } while (0)

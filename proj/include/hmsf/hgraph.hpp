#pragma once

// Heterogeneous graph data model: every edge carries one non-negative integer
// cost per tree index. Includes the spanning-forest representation, forest
// cost, the polynomial-time certificate verifier, metric closure,
// triangle-inequality checking, the text formats, and DOT export.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hmsf/error.hpp"

namespace hmsf {

using Cost = std::uint64_t;

inline Cost checked_add(Cost a, Cost b) {
  Cost r = 0;
  if (__builtin_add_overflow(a, b, &r))
    throw Error(ErrorCode::Overflow, "cost sum exceeds 64 bits");
  return r;
}

inline Cost checked_mul(Cost a, Cost b) {
  Cost r = 0;
  if (__builtin_mul_overflow(a, b, &r))
    throw Error(ErrorCode::Overflow, "cost product exceeds 64 bits");
  return r;
}

struct Edge {
  int u = 0;  // u < v after normalization
  int v = 0;
  std::vector<Cost> costs;  // one per tree index

  friend bool operator==(const Edge& a, const Edge& b) {
    return a.u == b.u && a.v == b.v && a.costs == b.costs;
  }
};

// Undirected graph with node ids 0..num_nodes-1, at most one edge per pair.
// Construction guard: the per-index sum over all edge costs must fit in 64
// bits, which keeps every downstream cost sum (forest costs, shortest paths,
// triangle sums) exact. Immutable once built; share freely across threads.
class HeteroGraph {
 public:
  HeteroGraph() : HeteroGraph(0, 1) {}

  HeteroGraph(int num_nodes, int num_trees)
      : num_nodes_(num_nodes), num_trees_(num_trees), cost_totals_(num_trees, 0) {
    if (num_nodes < 0) throw Error(ErrorCode::InvalidArgument, "negative node count");
    if (num_trees < 1) throw Error(ErrorCode::InvalidArgument, "need at least one tree");
  }

  void add_edge(int u, int v, std::vector<Cost> costs) {
    if (u == v) throw Error(ErrorCode::InvalidArgument, "self loop");
    if (u < 0 || v < 0 || u >= num_nodes_ || v >= num_nodes_)
      throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
    if (static_cast<int>(costs.size()) != num_trees_)
      throw Error(ErrorCode::InvalidArgument, "edge needs one cost per tree");
    if (u > v) std::swap(u, v);
    auto key = std::make_pair(u, v);
    if (edge_index_.count(key))
      throw Error(ErrorCode::DuplicateEdge,
                  "duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    for (int i = 0; i < num_trees_; ++i)
      cost_totals_[static_cast<std::size_t>(i)] =
          checked_add(cost_totals_[static_cast<std::size_t>(i)], costs[static_cast<std::size_t>(i)]);
    edge_index_.emplace(key, static_cast<int>(edges_.size()));
    edges_.push_back(Edge{u, v, std::move(costs)});
  }

  void set_label(int node, std::string name) {
    if (node < 0 || node >= num_nodes_)
      throw Error(ErrorCode::InvalidArgument, "label node out of range");
    labels_[node] = std::move(name);
  }

  int num_nodes() const { return num_nodes_; }
  int num_trees() const { return num_trees_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::map<int, std::string>& labels() const { return labels_; }

  const Edge* find_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    auto it = edge_index_.find({u, v});
    return it == edge_index_.end() ? nullptr : &edges_[static_cast<std::size_t>(it->second)];
  }

  bool has_edge(int u, int v) const { return find_edge(u, v) != nullptr; }

  friend bool operator==(const HeteroGraph& a, const HeteroGraph& b) {
    return a.num_nodes_ == b.num_nodes_ && a.num_trees_ == b.num_trees_ &&
           a.edges_ == b.edges_ && a.labels_ == b.labels_;
  }

 private:
  int num_nodes_;
  int num_trees_;
  std::vector<Edge> edges_;
  std::map<std::pair<int, int>, int> edge_index_;
  std::map<int, std::string> labels_;
  std::vector<Cost> cost_totals_;
};

// A problem instance: graph, one distinct root per tree, optional budget k.
struct Instance {
  HeteroGraph graph;
  std::vector<int> roots;
  std::optional<Cost> budget;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.graph == b.graph && a.roots == b.roots && a.budget == b.budget;
  }
};

inline void validate_instance(const Instance& inst) {
  if (static_cast<int>(inst.roots.size()) != inst.graph.num_trees())
    throw Error(ErrorCode::InvalidArgument, "need one root per tree");
  std::set<int> seen;
  for (int r : inst.roots) {
    if (r < 0 || r >= inst.graph.num_nodes())
      throw Error(ErrorCode::RootOutOfRange, "root " + std::to_string(r) + " out of range");
    if (!seen.insert(r).second)
      throw Error(ErrorCode::RootOutOfRange, "root " + std::to_string(r) + " repeated");
  }
}

// Candidate spanning forest: per tree a root and an explicit edge set.
// Nothing is validated at construction; verify_forest reports problems.
struct SpanningForest {
  struct Tree {
    int root = 0;
    std::vector<std::pair<int, int>> edges;

    friend bool operator==(const Tree& a, const Tree& b) {
      return a.root == b.root && a.edges == b.edges;
    }
  };

  std::vector<Tree> trees;

  friend bool operator==(const SpanningForest& a, const SpanningForest& b) {
    return a.trees == b.trees;
  }
};

enum class ViolationKind {
  TreeCountMismatch,
  RootMismatch,
  EdgeNotInGraph,
  DuplicateForestEdge,
  CycleInTree,
  TreeDisconnected,
  NodeNotSpanned,
  NodeInMultipleTrees,
  EdgeCountMismatch,
  BudgetExceeded,
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::TreeCountMismatch: return "tree count mismatch";
    case ViolationKind::RootMismatch: return "root mismatch";
    case ViolationKind::EdgeNotInGraph: return "edge not in graph";
    case ViolationKind::DuplicateForestEdge: return "duplicate forest edge";
    case ViolationKind::CycleInTree: return "cycle in tree";
    case ViolationKind::TreeDisconnected: return "tree disconnected";
    case ViolationKind::NodeNotSpanned: return "node not spanned";
    case ViolationKind::NodeInMultipleTrees: return "node in multiple trees";
    case ViolationKind::EdgeCountMismatch: return "edge count mismatch";
    case ViolationKind::BudgetExceeded: return "cost exceeds budget";
  }
  return "unknown violation";
}

struct Violation {
  ViolationKind kind;
  int a = -1;  // offending node, or edge endpoint
  int b = -1;  // second edge endpoint when applicable
  std::string message;
};

struct VerificationReport {
  bool valid = false;
  std::optional<Cost> cost;  // present when structurally valid
  std::vector<Violation> violations;
};

namespace detail {

class Dsu {
 public:
  explicit Dsu(int n) : parent_(static_cast<std::size_t>(n)) { reset(); }

  void reset() {
    for (std::size_t i = 0; i < parent_.size(); ++i) parent_[i] = static_cast<int>(i);
  }

  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] =
          parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }

  // false when x and y were already connected
  bool unite(int x, int y) {
    int rx = find(x), ry = find(y);
    if (rx == ry) return false;
    parent_[static_cast<std::size_t>(rx)] = ry;
    return true;
  }

 private:
  std::vector<int> parent_;
};

// Checks every SpanningForest invariant against g, with each tree anchored at
// its own recorded root. Root-vs-instance matching and the budget are the
// caller's concern.
inline void structural_violations(const HeteroGraph& g, const SpanningForest& f,
                                  std::vector<Violation>& out) {
  const int n = g.num_nodes();
  if (static_cast<int>(f.trees.size()) != g.num_trees())
    out.push_back({ViolationKind::TreeCountMismatch, static_cast<int>(f.trees.size()), -1,
                   "forest has " + std::to_string(f.trees.size()) + " trees, graph expects " +
                       std::to_string(g.num_trees())});

  std::map<std::pair<int, int>, int> edge_times;
  std::vector<int> cover(static_cast<std::size_t>(n), 0);
  std::size_t total_edges = 0;

  for (std::size_t ti = 0; ti < f.trees.size(); ++ti) {
    const auto& tree = f.trees[ti];
    total_edges += tree.edges.size();

    bool root_ok = tree.root >= 0 && tree.root < n;
    if (!root_ok)
      out.push_back({ViolationKind::RootMismatch, tree.root, -1,
                     "tree " + std::to_string(ti) + " root " + std::to_string(tree.root) +
                         " out of range"});

    std::set<int> nodes;
    if (root_ok) nodes.insert(tree.root);
    for (auto [u, v] : tree.edges) {
      if (u > v) std::swap(u, v);
      bool in_range = u >= 0 && v < n && u != v && v >= 0;
      if (!in_range || !g.has_edge(u, v)) {
        out.push_back({ViolationKind::EdgeNotInGraph, u, v,
                       "edge (" + std::to_string(u) + "," + std::to_string(v) +
                           ") not in graph"});
      }
      if (in_range) {
        nodes.insert(u);
        nodes.insert(v);
        ++edge_times[{u, v}];
      }
    }

    // acyclicity over this tree's edges
    Dsu dsu(n);
    for (auto [u, v] : tree.edges) {
      if (u < 0 || v < 0 || u >= n || v >= n || u == v) continue;
      if (!dsu.unite(u, v))
        out.push_back({ViolationKind::CycleInTree, u, v,
                       "cycle in tree " + std::to_string(ti) + " at edge (" +
                           std::to_string(u) + "," + std::to_string(v) + ")"});
    }
    // connectivity: every tree node must reach the root
    if (root_ok) {
      int root_rep = dsu.find(tree.root);
      for (int node : nodes) {
        if (dsu.find(node) != root_rep) {
          out.push_back({ViolationKind::TreeDisconnected, node, -1,
                         "tree " + std::to_string(ti) + " disconnected: node " +
                             std::to_string(node) + " cannot reach root " +
                             std::to_string(tree.root)});
          break;
        }
      }
    }

    for (int node : nodes)
      if (node >= 0 && node < n) ++cover[static_cast<std::size_t>(node)];
  }

  for (const auto& [pair, times] : edge_times)
    if (times > 1)
      out.push_back({ViolationKind::DuplicateForestEdge, pair.first, pair.second,
                     "edge (" + std::to_string(pair.first) + "," + std::to_string(pair.second) +
                         ") used " + std::to_string(times) + " times"});

  for (int node = 0; node < n; ++node) {
    int c = cover[static_cast<std::size_t>(node)];
    if (c == 0)
      out.push_back({ViolationKind::NodeNotSpanned, node, -1,
                     "node not spanned: " + std::to_string(node)});
    else if (c > 1)
      out.push_back({ViolationKind::NodeInMultipleTrees, node, -1,
                     "node in multiple trees: " + std::to_string(node)});
  }

  const std::size_t want =
      static_cast<std::size_t>(g.num_nodes() >= g.num_trees() ? g.num_nodes() - g.num_trees() : 0);
  if (total_edges != want)
    out.push_back({ViolationKind::EdgeCountMismatch, static_cast<int>(total_edges), -1,
                   "forest has " + std::to_string(total_edges) + " edges, want " +
                       std::to_string(want)});
}

}  // namespace detail

// Total forest cost: edges of tree i are priced by cost function i.
// Requires a structurally valid forest.
inline Cost forest_cost(const HeteroGraph& g, const SpanningForest& f) {
  std::vector<Violation> viols;
  detail::structural_violations(g, f, viols);
  if (!viols.empty())
    throw Error(ErrorCode::InvalidForest, viols.front().message);
  Cost total = 0;
  for (std::size_t ti = 0; ti < f.trees.size(); ++ti) {
    for (auto [u, v] : f.trees[ti].edges) {
      const Edge* e = g.find_edge(u, v);
      total = checked_add(total, e->costs[ti]);
    }
  }
  return total;
}

// Polynomial-time check of a candidate forest against an instance: structural
// invariants, root agreement, and the budget when one is present. Never
// throws; every failure becomes a report entry.
inline VerificationReport verify_forest(const Instance& inst, const SpanningForest& f) {
  VerificationReport report;
  detail::structural_violations(inst.graph, f, report.violations);

  const std::size_t common = std::min(f.trees.size(), inst.roots.size());
  for (std::size_t ti = 0; ti < common; ++ti) {
    if (f.trees[ti].root != inst.roots[ti])
      report.violations.push_back(
          {ViolationKind::RootMismatch, f.trees[ti].root, inst.roots[ti],
           "root mismatch: tree " + std::to_string(ti) + " rooted at " +
               std::to_string(f.trees[ti].root) + ", instance wants " +
               std::to_string(inst.roots[ti])});
  }

  bool structural_ok = report.violations.empty();
  if (structural_ok) {
    Cost cost = 0;
    for (std::size_t ti = 0; ti < f.trees.size(); ++ti)
      for (auto [u, v] : f.trees[ti].edges)
        cost = checked_add(cost, inst.graph.find_edge(u, v)->costs[ti]);
    report.cost = cost;
    if (inst.budget && cost > *inst.budget)
      report.violations.push_back(
          {ViolationKind::BudgetExceeded, -1, -1,
           "cost exceeds budget: " + std::to_string(cost) + " > " +
               std::to_string(*inst.budget)});
  }
  report.valid = report.violations.empty();
  return report;
}

inline bool is_complete(const HeteroGraph& g) {
  const std::size_t n = static_cast<std::size_t>(g.num_nodes());
  return g.edges().size() == n * (n - 1) / 2 || g.num_nodes() <= 1;
}

// All ordered node triples (v1,v2,v3) with w(v1,v2) + w(v2,v3) < w(v1,v3)
// under cost function tree_index. Empty result means the cost function is a
// metric. Requires a complete graph.
inline std::vector<std::array<int, 3>> check_triangle_inequality(const HeteroGraph& g,
                                                                 int tree_index) {
  if (tree_index < 0 || tree_index >= g.num_trees())
    throw Error(ErrorCode::InvalidArgument, "tree index out of range");
  if (!is_complete(g))
    throw Error(ErrorCode::GraphNotComplete, "triangle inequality needs a complete graph");
  const int n = g.num_nodes();
  std::vector<std::vector<Cost>> w(static_cast<std::size_t>(n),
                                   std::vector<Cost>(static_cast<std::size_t>(n), 0));
  for (const Edge& e : g.edges()) {
    Cost c = e.costs[static_cast<std::size_t>(tree_index)];
    w[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)] = c;
    w[static_cast<std::size_t>(e.v)][static_cast<std::size_t>(e.u)] = c;
  }
  std::vector<std::array<int, 3>> bad;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (b == a) continue;
      for (int c = 0; c < n; ++c) {
        if (c == a || c == b) continue;
        // both addends are distinct edges of one cost index, so the sum
        // stays below the construction guard
        if (w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] +
                w[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)] <
            w[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)])
          bad.push_back({a, b, c});
      }
    }
  return bad;
}

namespace detail {

constexpr Cost kInfinity = std::numeric_limits<Cost>::max();

// Single-source shortest path distances under one cost index.
inline std::vector<Cost> dijkstra(const HeteroGraph& g, int source, int tree_index) {
  const int n = g.num_nodes();
  std::vector<std::vector<std::pair<int, Cost>>> adj(static_cast<std::size_t>(n));
  for (const Edge& e : g.edges()) {
    Cost c = e.costs[static_cast<std::size_t>(tree_index)];
    adj[static_cast<std::size_t>(e.u)].emplace_back(e.v, c);
    adj[static_cast<std::size_t>(e.v)].emplace_back(e.u, c);
  }
  std::vector<Cost> dist(static_cast<std::size_t>(n), kInfinity);
  using Item = std::pair<Cost, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[static_cast<std::size_t>(source)] = 0;
  heap.push({0, source});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d != dist[static_cast<std::size_t>(u)]) continue;
    for (auto [v, c] : adj[static_cast<std::size_t>(u)]) {
      Cost nd = d + c;  // bounded by the per-index total, cannot wrap
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        heap.push({nd, v});
      }
    }
  }
  return dist;
}

}  // namespace detail

// Completes the graph: original edges keep their stored costs verbatim, every
// missing pair gets the per-index shortest-path distance between its
// endpoints. Note original costs are kept even when a shorter path exists, so
// the output is complete but not necessarily metric.
inline HeteroGraph metric_closure_complete(const HeteroGraph& g) {
  const int n = g.num_nodes();
  HeteroGraph out(n, g.num_trees());
  for (const auto& [node, name] : g.labels()) out.set_label(node, name);
  for (const Edge& e : g.edges()) out.add_edge(e.u, e.v, e.costs);
  if (n <= 1) return out;

  std::vector<std::vector<std::vector<Cost>>> dist(
      static_cast<std::size_t>(g.num_trees()));
  for (int i = 0; i < g.num_trees(); ++i) {
    dist[static_cast<std::size_t>(i)].reserve(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s)
      dist[static_cast<std::size_t>(i)].push_back(detail::dijkstra(g, s, i));
  }
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      if (g.has_edge(u, v)) continue;
      std::vector<Cost> costs(static_cast<std::size_t>(g.num_trees()));
      for (int i = 0; i < g.num_trees(); ++i) {
        Cost d = dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(u)]
                     [static_cast<std::size_t>(v)];
        if (d == detail::kInfinity)
          throw Error(ErrorCode::DisconnectedGraph,
                      "no path between " + std::to_string(u) + " and " + std::to_string(v));
        costs[static_cast<std::size_t>(i)] = d;
      }
      out.add_edge(u, v, std::move(costs));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Text formats
// ---------------------------------------------------------------------------

namespace detail {

inline std::optional<std::uint64_t> parse_u64(const std::string& tok) {
  if (tok.empty() || tok[0] == '-' || tok[0] == '+') return std::nullopt;
  std::uint64_t value = 0;
  for (char ch : tok) {
    if (ch < '0' || ch > '9') return std::nullopt;
    if (value > (std::numeric_limits<std::uint64_t>::max() - (ch - '0')) / 10)
      return std::nullopt;
    value = value * 10 + static_cast<std::uint64_t>(ch - '0');
  }
  return value;
}

inline std::optional<int> parse_int_tok(const std::string& tok) {
  if (tok.empty()) return std::nullopt;
  std::size_t start = tok[0] == '-' ? 1 : 0;
  if (start == tok.size()) return std::nullopt;
  long long value = 0;
  for (std::size_t i = start; i < tok.size(); ++i) {
    if (tok[i] < '0' || tok[i] > '9') return std::nullopt;
    value = value * 10 + (tok[i] - '0');
    if (value > std::numeric_limits<int>::max()) return std::nullopt;
  }
  return start ? -static_cast<int>(value) : static_cast<int>(value);
}

[[noreturn]] inline void bad_line(int lineno, const std::string& why) {
  throw Error(ErrorCode::MalformedLine, "line " + std::to_string(lineno) + ": " + why);
}

}  // namespace detail

// Line-oriented instance format, `#` starts a comment:
//
//   hmsf 1
//   nodes <N>
//   trees <t>
//   roots <r_0> ... <r_{t-1}>
//   budget <k>            (optional)
//   label <id> <name>     (optional, repeatable)
//   edge <u> <v> <c_0> ... <c_{t-1}>
inline Instance parse_instance(std::istream& in) {
  std::string raw;
  int lineno = 0;
  bool saw_version = false;
  std::optional<int> num_nodes, num_trees;
  std::optional<std::vector<int>> roots;
  std::optional<Cost> budget;
  std::vector<std::tuple<int, int, std::vector<Cost>>> edges;
  std::map<int, std::string> labels;

  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    auto hash = raw.find('#');
    std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;

    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);

    if (!saw_version) {
      if (kw != "hmsf" || toks.size() != 1 || toks[0] != "1")
        detail::bad_line(lineno, "expected `hmsf 1` header");
      saw_version = true;
      continue;
    }
    if (kw == "nodes") {
      if (num_nodes) detail::bad_line(lineno, "duplicate nodes line");
      auto v = toks.size() == 1 ? detail::parse_int_tok(toks[0]) : std::nullopt;
      if (!v || *v < 0) detail::bad_line(lineno, "expected `nodes <N>`");
      num_nodes = *v;
    } else if (kw == "trees") {
      if (num_trees) detail::bad_line(lineno, "duplicate trees line");
      auto v = toks.size() == 1 ? detail::parse_int_tok(toks[0]) : std::nullopt;
      if (!v || *v < 1) detail::bad_line(lineno, "expected `trees <t>` with t >= 1");
      num_trees = *v;
    } else if (kw == "roots") {
      if (roots) detail::bad_line(lineno, "duplicate roots line");
      if (!num_nodes || !num_trees) detail::bad_line(lineno, "roots before nodes/trees");
      if (static_cast<int>(toks.size()) != *num_trees)
        detail::bad_line(lineno, "expected one root per tree");
      std::vector<int> r;
      std::set<int> seen;
      for (const auto& tok : toks) {
        auto v = detail::parse_int_tok(tok);
        if (!v) detail::bad_line(lineno, "root is not an integer");
        if (*v < 0 || *v >= *num_nodes)
          throw Error(ErrorCode::RootOutOfRange, "line " + std::to_string(lineno) + ": root " +
                                                     tok + " out of range");
        if (!seen.insert(*v).second) detail::bad_line(lineno, "root " + tok + " repeated");
        r.push_back(*v);
      }
      roots = std::move(r);
    } else if (kw == "budget") {
      if (budget) detail::bad_line(lineno, "duplicate budget line");
      auto v = toks.size() == 1 ? detail::parse_u64(toks[0]) : std::nullopt;
      if (!v) detail::bad_line(lineno, "expected `budget <k>` with non-negative k");
      budget = *v;
    } else if (kw == "label") {
      if (!num_nodes) detail::bad_line(lineno, "label before nodes");
      if (toks.size() < 2) detail::bad_line(lineno, "expected `label <id> <name>`");
      auto id = detail::parse_int_tok(toks[0]);
      if (!id || *id < 0 || *id >= *num_nodes) detail::bad_line(lineno, "label id out of range");
      if (labels.count(*id)) detail::bad_line(lineno, "duplicate label for node " + toks[0]);
      std::string name = toks[1];
      for (std::size_t i = 2; i < toks.size(); ++i) name += " " + toks[i];
      labels[*id] = name;
    } else if (kw == "edge") {
      if (!num_nodes || !num_trees) detail::bad_line(lineno, "edge before nodes/trees");
      if (static_cast<int>(toks.size()) != 2 + *num_trees)
        detail::bad_line(lineno, "expected `edge <u> <v>` plus one cost per tree");
      auto u = detail::parse_int_tok(toks[0]);
      auto v = detail::parse_int_tok(toks[1]);
      if (!u || !v) detail::bad_line(lineno, "edge endpoint is not an integer");
      if (*u < 0 || *v < 0 || *u >= *num_nodes || *v >= *num_nodes)
        detail::bad_line(lineno, "edge endpoint out of range");
      if (*u == *v) detail::bad_line(lineno, "self loop");
      std::vector<Cost> costs;
      for (int i = 0; i < *num_trees; ++i) {
        auto c = detail::parse_u64(toks[static_cast<std::size_t>(2 + i)]);
        if (!c) detail::bad_line(lineno, "edge cost is not a non-negative integer");
        costs.push_back(*c);
      }
      edges.emplace_back(*u, *v, std::move(costs));
    } else {
      detail::bad_line(lineno, "unknown keyword `" + kw + "`");
    }
  }

  if (!saw_version) throw Error(ErrorCode::MalformedLine, "empty input, expected `hmsf 1`");
  if (!num_nodes) throw Error(ErrorCode::MalformedLine, "missing nodes line");
  if (!num_trees) throw Error(ErrorCode::MalformedLine, "missing trees line");
  if (!roots) throw Error(ErrorCode::MalformedLine, "missing roots line");

  HeteroGraph g(*num_nodes, *num_trees);
  for (auto& [node, name] : labels) g.set_label(node, name);
  for (auto& [u, v, costs] : edges) g.add_edge(u, v, std::move(costs));
  Instance inst{std::move(g), std::move(*roots), budget};
  validate_instance(inst);
  return inst;
}

inline Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

inline std::string write_instance(const Instance& inst) {
  std::ostringstream out;
  out << "hmsf 1\n";
  out << "nodes " << inst.graph.num_nodes() << '\n';
  out << "trees " << inst.graph.num_trees() << '\n';
  out << "roots";
  for (int r : inst.roots) out << ' ' << r;
  out << '\n';
  if (inst.budget) out << "budget " << *inst.budget << '\n';
  for (const auto& [node, name] : inst.graph.labels())
    out << "label " << node << ' ' << name << '\n';
  for (const Edge& e : inst.graph.edges()) {
    out << "edge " << e.u << ' ' << e.v;
    for (Cost c : e.costs) out << ' ' << c;
    out << '\n';
  }
  return out.str();
}

// Forest certificate: per tree one `tree <i> <root>` line (indices in order)
// followed by that tree's `fedge <u> <v>` lines.
inline SpanningForest parse_forest(std::istream& in) {
  SpanningForest f;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    auto hash = raw.find('#');
    std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);

    if (kw == "tree") {
      if (toks.size() != 2) detail::bad_line(lineno, "expected `tree <i> <root>`");
      auto idx = detail::parse_int_tok(toks[0]);
      auto root = detail::parse_int_tok(toks[1]);
      if (!idx || !root) detail::bad_line(lineno, "tree line needs two integers");
      if (*idx != static_cast<int>(f.trees.size()))
        detail::bad_line(lineno, "tree indices must appear in order 0,1,...");
      f.trees.push_back({*root, {}});
    } else if (kw == "fedge") {
      if (f.trees.empty()) detail::bad_line(lineno, "fedge before any tree line");
      if (toks.size() != 2) detail::bad_line(lineno, "expected `fedge <u> <v>`");
      auto u = detail::parse_int_tok(toks[0]);
      auto v = detail::parse_int_tok(toks[1]);
      if (!u || !v) detail::bad_line(lineno, "fedge needs two integers");
      f.trees.back().edges.emplace_back(*u, *v);
    } else {
      detail::bad_line(lineno, "unknown keyword `" + kw + "`");
    }
  }
  return f;
}

inline SpanningForest parse_forest(const std::string& text) {
  std::istringstream in(text);
  return parse_forest(in);
}

inline std::string write_forest(const SpanningForest& f) {
  std::ostringstream out;
  for (std::size_t i = 0; i < f.trees.size(); ++i) {
    out << "tree " << i << ' ' << f.trees[i].root << '\n';
    for (auto [u, v] : f.trees[i].edges) out << "fedge " << u << ' ' << v << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// DOT export
// ---------------------------------------------------------------------------

// Edge families of the 3-SAT gadget; recovered from node labels for styling.
enum class EdgeType { X, T, F, C };

namespace detail {

struct NodeRole {
  enum Kind { kNone, kTrueAnchor, kFalseAnchor, kPosLiteral, kNegLiteral, kClause } kind = kNone;
};

inline NodeRole classify_label(const std::string& name) {
  auto all_digits = [](const std::string& s) {
    return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
  };
  if (name == "t") return {NodeRole::kTrueAnchor};
  if (name == "f") return {NodeRole::kFalseAnchor};
  if (name.size() > 1 && name[0] == 'x' && all_digits(name.substr(1)))
    return {NodeRole::kPosLiteral};
  if (name.size() > 2 && name[0] == '~' && name[1] == 'x' && all_digits(name.substr(2)))
    return {NodeRole::kNegLiteral};
  if (name.size() > 1 && name[0] == 'C' && all_digits(name.substr(1)))
    return {NodeRole::kClause};
  return {};
}

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

// Classifies a gadget edge from the instance's node labels; nullopt for edges
// that do not belong to a labelled gadget (for example closure additions).
inline std::optional<EdgeType> classify_edge(const Instance& inst, int u, int v) {
  const auto& labels = inst.graph.labels();
  auto role = [&](int node) -> detail::NodeRole {
    auto it = labels.find(node);
    return it == labels.end() ? detail::NodeRole{} : detail::classify_label(it->second);
  };
  detail::NodeRole ru = role(u), rv = role(v);
  auto has = [&](detail::NodeRole::Kind a, detail::NodeRole::Kind b) {
    return (ru.kind == a && rv.kind == b) || (ru.kind == b && rv.kind == a);
  };
  if (has(detail::NodeRole::kPosLiteral, detail::NodeRole::kNegLiteral)) {
    // same variable pair: labels are x<i> and ~x<i>
    const std::string &a = labels.at(u), &b = labels.at(v);
    const std::string &pos = a[0] == 'x' ? a : b, &neg = a[0] == 'x' ? b : a;
    if (neg.substr(1) == pos) return EdgeType::X;
    return std::nullopt;
  }
  if (has(detail::NodeRole::kTrueAnchor, detail::NodeRole::kPosLiteral)) return EdgeType::T;
  if (has(detail::NodeRole::kFalseAnchor, detail::NodeRole::kNegLiteral)) return EdgeType::F;
  if ((ru.kind == detail::NodeRole::kClause &&
       (rv.kind == detail::NodeRole::kPosLiteral || rv.kind == detail::NodeRole::kNegLiteral)) ||
      (rv.kind == detail::NodeRole::kClause &&
       (ru.kind == detail::NodeRole::kPosLiteral || ru.kind == detail::NodeRole::kNegLiteral)))
    return EdgeType::C;
  return std::nullopt;
}

// Graphviz export. Styling follows the gadget legend: dashed for type x
// edges, thin solid for type t/f edges, bold for type C edges; edges outside
// the gadget (closure additions) are drawn gray. Every edge is labelled with
// its cost tuple.
inline std::string export_dot(const Instance& inst) {
  std::ostringstream out;
  out << "graph hmsf {\n";
  const auto& labels = inst.graph.labels();
  for (int node = 0; node < inst.graph.num_nodes(); ++node) {
    out << "  " << node;
    std::vector<std::string> attrs;
    auto it = labels.find(node);
    if (it != labels.end()) attrs.push_back("label=\"" + detail::dot_escape(it->second) + "\"");
    if (std::find(inst.roots.begin(), inst.roots.end(), node) != inst.roots.end())
      attrs.push_back("shape=doublecircle");
    if (!attrs.empty()) {
      out << " [" << attrs[0];
      for (std::size_t i = 1; i < attrs.size(); ++i) out << ", " << attrs[i];
      out << ']';
    }
    out << ";\n";
  }
  for (const Edge& e : inst.graph.edges()) {
    out << "  " << e.u << " -- " << e.v << " [";
    auto type = classify_edge(inst, e.u, e.v);
    if (type) {
      switch (*type) {
        case EdgeType::X: out << "style=dashed"; break;
        case EdgeType::T:
        case EdgeType::F: out << "style=solid"; break;
        case EdgeType::C: out << "style=bold"; break;
      }
    } else {
      out << "color=gray";
    }
    out << ", label=\"";
    for (std::size_t i = 0; i < e.costs.size(); ++i) {
      if (i) out << '/';
      out << e.costs[i];
    }
    out << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace hmsf

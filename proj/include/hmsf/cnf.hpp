#pragma once

// 3-CNF formulas: DIMACS parsing, evaluation, and two small SAT solvers
// (exhaustive enumeration and DPLL) used as the SAT-side oracle.
//
// Restriction enforced throughout: every clause has exactly three literals
// over pairwise distinct variables. Clauses with repeated or complementary
// occurrences of one variable are rejected at parse time; the graph
// construction would otherwise produce parallel clause edges.

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hmsf/error.hpp"

namespace hmsf {

struct Literal {
  int var = 0;  // 1-based variable index
  bool negated = false;

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.var == b.var && a.negated == b.negated;
  }
};

struct Clause {
  std::array<Literal, 3> literals;

  friend bool operator==(const Clause& a, const Clause& b) {
    return a.literals == b.literals;
  }
};

struct Formula {
  int num_vars = 0;
  std::vector<Clause> clauses;

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.num_vars == b.num_vars && a.clauses == b.clauses;
  }
};

// Total truth assignment for variables 1..n (values[i-1] holds variable i).
struct Assignment {
  std::vector<bool> values;

  Assignment() = default;
  explicit Assignment(std::vector<bool> v) : values(std::move(v)) {}

  int num_vars() const { return static_cast<int>(values.size()); }
  bool value(int var) const { return values[static_cast<std::size_t>(var) - 1]; }

  friend bool operator==(const Assignment& a, const Assignment& b) {
    return a.values == b.values;
  }
};

// Checks the structural invariants of a Formula built outside the parser.
inline void validate_formula(const Formula& f) {
  if (f.num_vars < 3)
    throw Error(ErrorCode::InvalidArgument, "formula needs at least 3 variables");
  if (f.clauses.empty())
    throw Error(ErrorCode::InvalidArgument, "formula needs at least 1 clause");
  for (const Clause& c : f.clauses) {
    for (const Literal& l : c.literals) {
      if (l.var < 1 || l.var > f.num_vars)
        throw Error(ErrorCode::VariableOutOfRange,
                    "variable " + std::to_string(l.var) + " outside 1.." +
                        std::to_string(f.num_vars));
    }
    if (c.literals[0].var == c.literals[1].var || c.literals[0].var == c.literals[2].var ||
        c.literals[1].var == c.literals[2].var)
      throw Error(ErrorCode::DuplicateVariableInClause,
                  "clause uses a variable more than once");
  }
}

// Parses DIMACS CNF: `c` comment lines, one `p cnf <n> <m>` header, then
// clause tokens (nonzero integers, each clause terminated by 0). Clauses may
// wrap across lines; exactly three distinct-variable literals per clause.
inline Formula parse_dimacs(std::istream& in) {
  std::string line;
  bool saw_header = false;
  long long n = 0, m = 0;
  Formula f;
  std::vector<Literal> pending;

  auto finish_clause = [&]() {
    if (pending.size() != 3)
      throw Error(ErrorCode::ClauseSizeNot3,
                  "clause has " + std::to_string(pending.size()) + " literals, want 3");
    Clause c{{pending[0], pending[1], pending[2]}};
    if (c.literals[0].var == c.literals[1].var || c.literals[0].var == c.literals[2].var ||
        c.literals[1].var == c.literals[2].var)
      throw Error(ErrorCode::DuplicateVariableInClause,
                  "clause uses a variable more than once");
    f.clauses.push_back(c);
    pending.clear();
  };

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank line
    if (tok == "c") continue;    // comment
    if (tok.size() > 1 && tok[0] == 'c') continue;
    if (tok == "p") {
      if (saw_header) throw Error(ErrorCode::MalformedHeader, "duplicate header line");
      std::string fmt;
      if (!(ls >> fmt >> n >> m) || fmt != "cnf")
        throw Error(ErrorCode::MalformedHeader, "expected `p cnf <n> <m>`");
      std::string extra;
      if (ls >> extra) throw Error(ErrorCode::MalformedHeader, "trailing tokens after header");
      if (n < 3) throw Error(ErrorCode::MalformedHeader, "need n >= 3 variables");
      if (m < 1) throw Error(ErrorCode::MalformedHeader, "need m >= 1 clauses");
      saw_header = true;
      f.num_vars = static_cast<int>(n);
      continue;
    }
    if (!saw_header)
      throw Error(ErrorCode::MalformedHeader, "clause data before `p cnf` header");
    // clause tokens; a clause ends at literal 0
    ls.clear();
    ls.str(line);
    long long lit;
    while (ls >> lit) {
      if (lit == 0) {
        finish_clause();
        continue;
      }
      long long var = lit < 0 ? -lit : lit;
      if (var > n)
        throw Error(ErrorCode::VariableOutOfRange,
                    "literal " + std::to_string(lit) + " outside 1.." + std::to_string(n));
      pending.push_back(Literal{static_cast<int>(var), lit < 0});
      if (pending.size() > 3)
        throw Error(ErrorCode::ClauseSizeNot3, "clause has more than 3 literals");
    }
    if (!ls.eof())
      throw Error(ErrorCode::MalformedLine, "non-integer token in clause data: " + line);
  }
  if (!saw_header) throw Error(ErrorCode::MalformedHeader, "missing `p cnf` header");
  if (!pending.empty())
    throw Error(ErrorCode::ClauseSizeNot3, "unterminated clause at end of input");
  if (static_cast<long long>(f.clauses.size()) != m)
    throw Error(ErrorCode::MalformedHeader,
                "header promises " + std::to_string(m) + " clauses, found " +
                    std::to_string(f.clauses.size()));
  return f;
}

inline Formula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

inline std::string write_dimacs(const Formula& f) {
  std::ostringstream out;
  out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const Clause& c : f.clauses) {
    for (const Literal& l : c.literals) out << (l.negated ? -l.var : l.var) << ' ';
    out << "0\n";
  }
  return out.str();
}

// True iff every clause contains at least one literal true under `a`.
inline bool evaluate(const Formula& f, const Assignment& a) {
  if (a.num_vars() != f.num_vars)
    throw Error(ErrorCode::IncompleteAssignment,
                "assignment covers " + std::to_string(a.num_vars()) + " of " +
                    std::to_string(f.num_vars) + " variables");
  for (const Clause& c : f.clauses) {
    bool sat = false;
    for (const Literal& l : c.literals) {
      if (a.value(l.var) != l.negated) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

// Exhaustive SAT search. Returns the lexicographically first model
// (false < true, variable order 1..n) or nullopt. Deterministic fixture oracle.
inline std::optional<Assignment> sat_brute_force(const Formula& f, int max_vars = 30) {
  validate_formula(f);
  const int n = f.num_vars;
  if (n > max_vars)
    throw Error(ErrorCode::TooManyVariables,
                std::to_string(n) + " variables exceeds enumeration bound " +
                    std::to_string(max_vars));
  const std::uint64_t total = std::uint64_t{1} << n;
  Assignment a(std::vector<bool>(static_cast<std::size_t>(n), false));
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    // variable 1 is the most significant bit so masks count in lex order
    for (int i = 1; i <= n; ++i)
      a.values[static_cast<std::size_t>(i) - 1] = (mask >> (n - i)) & 1u;
    if (evaluate(f, a)) return a;
  }
  return std::nullopt;
}

namespace detail {

enum : std::int8_t { kUnset = -1, kFalse = 0, kTrue = 1 };

inline bool dpll_search(const Formula& f, std::vector<std::int8_t>& val) {
  // unit propagation to fixpoint
  for (;;) {
    bool changed = false;
    for (const Clause& c : f.clauses) {
      int unset = 0;
      const Literal* last = nullptr;
      bool sat = false;
      for (const Literal& l : c.literals) {
        std::int8_t v = val[static_cast<std::size_t>(l.var)];
        if (v == kUnset) {
          ++unset;
          last = &l;
        } else if ((v == kTrue) != l.negated) {
          sat = true;
          break;
        }
      }
      if (sat) continue;
      if (unset == 0) return false;  // conflict
      if (unset == 1) {
        val[static_cast<std::size_t>(last->var)] = last->negated ? kFalse : kTrue;
        changed = true;
      }
    }
    if (!changed) break;
  }
  // satisfied once every clause has a true literal
  bool all_sat = true;
  for (const Clause& c : f.clauses) {
    bool sat = false;
    for (const Literal& l : c.literals) {
      std::int8_t v = val[static_cast<std::size_t>(l.var)];
      if (v != kUnset && (v == kTrue) != l.negated) {
        sat = true;
        break;
      }
    }
    if (!sat) {
      all_sat = false;
      break;
    }
  }
  if (all_sat) return true;

  int branch = 0;
  for (int i = 1; i <= f.num_vars; ++i) {
    if (val[static_cast<std::size_t>(i)] == kUnset) {
      branch = i;
      break;
    }
  }
  if (branch == 0) return false;  // fully assigned but some clause is false

  for (std::int8_t choice : {kFalse, kTrue}) {
    std::vector<std::int8_t> saved = val;
    val[static_cast<std::size_t>(branch)] = choice;
    if (dpll_search(f, val)) return true;
    val = std::move(saved);
  }
  return false;
}

}  // namespace detail

// DPLL with unit propagation. Same satisfiability verdict as sat_brute_force;
// the returned model may differ. Unassigned variables in a model default to false.
inline std::optional<Assignment> sat_dpll(const Formula& f) {
  validate_formula(f);
  std::vector<std::int8_t> val(static_cast<std::size_t>(f.num_vars) + 1, detail::kUnset);
  if (!detail::dpll_search(f, val)) return std::nullopt;
  std::vector<bool> v(static_cast<std::size_t>(f.num_vars));
  for (int i = 1; i <= f.num_vars; ++i)
    v[static_cast<std::size_t>(i) - 1] = val[static_cast<std::size_t>(i)] == detail::kTrue;
  return Assignment(std::move(v));
}

}  // namespace hmsf

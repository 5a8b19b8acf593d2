// Command-line front end for the 2-HMSF toolkit: reduction, solving,
// certificate verification, round-trip experiments, DOT export, and seeded
// instance generators.
//
// Exit codes: 0 ok/valid/yes, 2 invalid certificate, 3 decision-no (unsat,
// over budget, triangle violations), 64 input error, 65 overflow,
// 70 equivalence violation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hmsf/cnf.hpp"
#include "hmsf/gen.hpp"
#include "hmsf/hgraph.hpp"
#include "hmsf/reduction.hpp"
#include "hmsf/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidCertificate = 2;
constexpr int kExitNo = 3;
constexpr int kExitInputError = 64;
constexpr int kExitOverflow = 65;
constexpr int kExitEquivalenceViolation = 70;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hmsf::Error(hmsf::ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hmsf::Error(hmsf::ErrorCode::IoError, "cannot write " + path);
  out << content;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty())
    std::cout << content;
  else
    write_file(path, content);
}

hmsf::SolveLimits limits_from_env() {
  hmsf::SolveLimits limits;
  if (const char* env = std::getenv("HMSF_MAX_ENUM")) {
    auto v = hmsf::detail::parse_u64(env);
    if (!v || *v == 0)
      throw hmsf::Error(hmsf::ErrorCode::InvalidArgument,
                        "HMSF_MAX_ENUM must be a positive integer");
    limits.max_partitions = *v;
  }
  return limits;
}

hmsf::Variant parse_variant(const std::string& name) {
  auto v = hmsf::variant_from_string(name);
  if (!v)
    throw hmsf::Error(hmsf::ErrorCode::InvalidArgument,
                      "variant must be general, closure, or metric");
  return *v;
}

int exit_code_for(const hmsf::Error& e) {
  return e.code() == hmsf::ErrorCode::Overflow ? kExitOverflow : kExitInputError;
}

int cmd_reduce(const std::string& cnf_path, const std::string& variant_name,
               const std::string& out_path) {
  hmsf::Variant variant = parse_variant(variant_name);
  hmsf::Formula formula = hmsf::parse_dimacs(read_file(cnf_path));
  hmsf::ReductionArtifacts art = hmsf::reduce(formula, variant);

  std::ostringstream text;
  text << "# 3-CNF reduction: n=" << art.num_vars << " m=" << art.num_clauses
       << " variant=" << hmsf::to_string(variant) << " k=" << *art.instance.budget << "\n";
  text << hmsf::write_instance(art.instance);
  emit(out_path, text.str());

  std::cout << "n=" << art.num_vars << " m=" << art.num_clauses
            << " nodes=" << art.instance.graph.num_nodes()
            << " edges=" << art.instance.graph.edges().size() << " k=" << *art.instance.budget
            << "\n";
  return kExitOk;
}

int cmd_solve(const std::string& instance_path, bool decision, const std::string& cert_path) {
  hmsf::Instance inst = hmsf::parse_instance(read_file(instance_path));
  if (decision && !inst.budget)
    throw hmsf::Error(hmsf::ErrorCode::MissingBudget, "decision mode needs a budget line");
  hmsf::SolveLimits limits = limits_from_env();
  hmsf::SolveResult result = hmsf::solve_exact(inst, limits);
  std::cout << "min_cost=" << result.min_cost
            << " feasible_partitions=" << result.feasible_partitions;
  if (inst.budget) std::cout << " budget=" << *inst.budget;
  if (decision) {
    bool yes = result.min_cost <= *inst.budget;
    std::cout << " decision=" << (yes ? "yes" : "no") << "\n";
    return yes ? kExitOk : kExitNo;
  }
  std::cout << "\n";
  if (!cert_path.empty()) write_file(cert_path, hmsf::write_forest(result.forest));
  return kExitOk;
}

int cmd_sat(const std::string& cnf_path) {
  hmsf::Formula formula = hmsf::parse_dimacs(read_file(cnf_path));
  auto model = hmsf::sat_dpll(formula);
  if (!model) {
    std::cout << "sat=false\n";
    return kExitNo;
  }
  std::cout << "sat=true\nmodel=";
  for (int i = 1; i <= formula.num_vars; ++i) {
    if (i > 1) std::cout << ' ';
    std::cout << (model->value(i) ? i : -i);
  }
  std::cout << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& instance_path, const std::string& cert_path) {
  hmsf::Instance inst = hmsf::parse_instance(read_file(instance_path));
  hmsf::SpanningForest forest = hmsf::parse_forest(read_file(cert_path));
  hmsf::VerificationReport report = hmsf::verify_forest(inst, forest);
  std::cout << "valid=" << (report.valid ? "true" : "false");
  if (report.cost) std::cout << " cost=" << *report.cost;
  if (inst.budget) std::cout << " budget=" << *inst.budget;
  std::cout << "\n";
  for (const auto& v : report.violations) std::cout << "violation: " << v.message << "\n";
  return report.valid ? kExitOk : kExitInvalidCertificate;
}

int cmd_roundtrip(const std::string& cnf_path, const std::string& variant_name) {
  hmsf::Variant variant = parse_variant(variant_name);
  hmsf::Formula formula = hmsf::parse_dimacs(read_file(cnf_path));
  hmsf::ReductionArtifacts art = hmsf::reduce(formula, variant);
  hmsf::SolveLimits limits = limits_from_env();

  auto model = hmsf::sat_brute_force(formula);
  hmsf::SolveResult result = hmsf::solve_exact(art.instance, limits);
  const hmsf::Cost k = *art.instance.budget;
  const bool decision = result.min_cost <= k;

  std::cout << "variant=" << hmsf::to_string(variant) << " sat=" << (model ? "true" : "false")
            << " decision=" << (decision ? "true" : "false") << " min_cost=" << result.min_cost
            << " k=" << k << "\n";

  bool ok = (model.has_value() == decision);
  if (model) {
    if (result.min_cost != k) ok = false;
    hmsf::SpanningForest forest = hmsf::assignment_to_forest(art, formula, *model);
    hmsf::VerificationReport report = hmsf::verify_forest(art.instance, forest);
    bool cert_ok = report.valid && report.cost && *report.cost == k;
    bool extract_ok = false;
    bool exact_ok = false;
    if (cert_ok) {
      hmsf::Assignment back = hmsf::forest_to_assignment(art, forest);
      extract_ok = hmsf::evaluate(formula, back);
      exact_ok = back == *model;
    }
    std::cout << "cert_valid=" << (report.valid ? "true" : "false");
    if (report.cost) std::cout << " cert_cost=" << *report.cost;
    std::cout << " extract_satisfies=" << (extract_ok ? "true" : "false")
              << " roundtrip_exact=" << (exact_ok ? "true" : "false") << "\n";
    ok = ok && cert_ok && extract_ok && exact_ok;
  } else if (result.min_cost <= k) {
    ok = false;
  }

  std::cout << (ok ? "equivalence=ok" : "equivalence=VIOLATED") << "\n";
  return ok ? kExitOk : kExitEquivalenceViolation;
}

int cmd_check_metric(const std::string& instance_path) {
  hmsf::Instance inst = hmsf::parse_instance(read_file(instance_path));
  std::size_t total = 0;
  for (int i = 0; i < inst.graph.num_trees(); ++i) {
    auto bad = hmsf::check_triangle_inequality(inst.graph, i);
    std::cout << "index=" << i << " violations=" << bad.size() << "\n";
    for (std::size_t j = 0; j < bad.size() && j < 10; ++j)
      std::cout << "triangle " << bad[j][0] << ' ' << bad[j][1] << ' ' << bad[j][2] << "\n";
    total += bad.size();
  }
  return total == 0 ? kExitOk : kExitNo;
}

int cmd_export_dot(const std::string& instance_path, const std::string& out_path) {
  hmsf::Instance inst = hmsf::parse_instance(read_file(instance_path));
  emit(out_path, hmsf::export_dot(inst));
  return kExitOk;
}

int cmd_gen_cnf(int num_vars, int num_clauses, std::uint64_t seed, const std::string& out_path) {
  hmsf::Formula f = hmsf::random_formula(num_vars, num_clauses, seed);
  emit(out_path, hmsf::write_dimacs(f));
  return kExitOk;
}

int cmd_gen_hgraph(int num_nodes, int num_trees, double density, std::uint64_t max_cost,
                   std::uint64_t seed, const std::string& out_path) {
  hmsf::Instance inst = hmsf::random_instance(num_nodes, num_trees, density, max_cost, seed);
  emit(out_path, hmsf::write_instance(inst));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2-heterogeneous minimum spanning forest toolkit"};
  app.require_subcommand(1);

  std::string cnf_path, instance_path, cert_path, out_path;
  std::string variant_name = "general";
  bool decision = false;

  auto* reduce = app.add_subcommand("reduce", "Build the 2-HMSF instance for a 3-CNF formula");
  reduce->add_option("cnf", cnf_path, "DIMACS CNF input")->required();
  reduce->add_option("--variant", variant_name, "general|closure|metric");
  reduce->add_option("-o,--output", out_path, "instance file (stdout if omitted)");

  auto* solve = app.add_subcommand("solve", "Exact minimum spanning forest of an instance");
  solve->add_option("instance", instance_path, "HMSF instance file")->required();
  solve->add_flag("--decision", decision, "compare the optimum against the budget");
  solve->add_option("-o,--output", out_path, "write the optimal forest certificate here");

  auto* sat = app.add_subcommand("sat", "Decide satisfiability of a 3-CNF formula");
  sat->add_option("cnf", cnf_path, "DIMACS CNF input")->required();

  auto* verify = app.add_subcommand("verify", "Check a forest certificate against an instance");
  verify->add_option("instance", instance_path, "HMSF instance file")->required();
  verify->add_option("certificate", cert_path, "forest certificate file")->required();

  auto* roundtrip = app.add_subcommand(
      "roundtrip", "Cross-check SAT verdict, decision verdict, and certificate translation");
  roundtrip->add_option("cnf", cnf_path, "DIMACS CNF input")->required();
  roundtrip->add_option("--variant", variant_name, "general|closure|metric");

  auto* check_metric =
      app.add_subcommand("check-metric", "Test the triangle inequality per cost function");
  check_metric->add_option("instance", instance_path, "HMSF instance file")->required();

  auto* export_dot = app.add_subcommand("export-dot", "Write the instance as Graphviz DOT");
  export_dot->add_option("instance", instance_path, "HMSF instance file")->required();
  export_dot->add_option("-o,--output", out_path, "DOT file (stdout if omitted)");

  auto* gen = app.add_subcommand("gen", "Seeded random inputs");
  gen->require_subcommand(1);
  int gen_vars = 5, gen_clauses = 5, gen_nodes = 8, gen_trees = 2;
  double gen_density = 0.7;
  std::uint64_t gen_seed = 1, gen_max_cost = 20;
  auto* gen_cnf = gen->add_subcommand("cnf", "Random 3-CNF formula");
  gen_cnf->add_option("--vars", gen_vars, "number of variables (>= 3)");
  gen_cnf->add_option("--clauses", gen_clauses, "number of clauses (>= 1)");
  gen_cnf->add_option("--seed", gen_seed, "RNG seed");
  gen_cnf->add_option("-o,--output", out_path, "output file (stdout if omitted)");
  auto* gen_hgraph = gen->add_subcommand("hgraph", "Random heterogeneous graph instance");
  gen_hgraph->add_option("--nodes", gen_nodes, "number of nodes");
  gen_hgraph->add_option("--trees", gen_trees, "number of trees/roots");
  gen_hgraph->add_option("--density", gen_density, "edge probability in [0,1]");
  gen_hgraph->add_option("--max-cost", gen_max_cost, "costs drawn from 0..max");
  gen_hgraph->add_option("--seed", gen_seed, "RNG seed");
  gen_hgraph->add_option("-o,--output", out_path, "output file (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*reduce) return cmd_reduce(cnf_path, variant_name, out_path);
    if (*solve) return cmd_solve(instance_path, decision, cert_path.empty() ? out_path : cert_path);
    if (*sat) return cmd_sat(cnf_path);
    if (*verify) return cmd_verify(instance_path, cert_path);
    if (*roundtrip) return cmd_roundtrip(cnf_path, variant_name);
    if (*check_metric) return cmd_check_metric(instance_path);
    if (*export_dot) return cmd_export_dot(instance_path, out_path);
    if (*gen_cnf) return cmd_gen_cnf(gen_vars, gen_clauses, gen_seed, out_path);
    if (*gen_hgraph)
      return cmd_gen_hgraph(gen_nodes, gen_trees, gen_density, gen_max_cost, gen_seed, out_path);
  } catch (const hmsf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitInputError;
}

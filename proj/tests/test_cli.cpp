#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "hmsf/reduction.hpp"
#include "hmsf/solver.hpp"
#include "helpers.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout and stderr combined
};

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("hmsf_cli_test_" + std::to_string(getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

RunResult run(const std::string& args) {
  fs::path capture = work_dir() / "capture.txt";
  std::string cmd = std::string(HMSF_BIN) + " " + args + " > " + capture.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(capture);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::string path_of(const std::string& name) { return (work_dir() / name).string(); }

void write(const std::string& name, const std::string& content) {
  std::ofstream out(path_of(name));
  out << content;
}

std::string slurp(const std::string& name) {
  std::ifstream in(path_of(name));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kExampleCnf = "p cnf 5 2\n1 -2 3 0\n3 -4 -5 0\n";

std::string unsat_cnf() { return hmsf::write_dimacs(test::all_patterns_formula()); }

}  // namespace

TEST_CASE("reduce writes an instance and a summary line") {
  write("example.cnf", kExampleCnf);
  RunResult r = run("reduce " + path_of("example.cnf") + " --variant general -o " +
                    path_of("example.hmsf"));
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.output == "n=5 m=2 nodes=14 edges=21 k=107\n");

  hmsf::Instance inst = hmsf::parse_instance(slurp("example.hmsf"));
  REQUIRE(inst.graph.num_nodes() == 14);
  REQUIRE(inst.budget == hmsf::Cost{107});
  REQUIRE(inst.graph.labels().at(0) == "t");
}

TEST_CASE("reduce closure reports the complete edge count") {
  write("example.cnf", kExampleCnf);
  RunResult r = run("reduce " + path_of("example.cnf") + " --variant closure -o " +
                    path_of("closure.hmsf"));
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.output.find("edges=91") != std::string::npos);
}

TEST_CASE("reduce rejects malformed input with exit 64") {
  write("broken.cnf", "p cnf 3 1\n1 1 2 0\n");
  RunResult r = run("reduce " + path_of("broken.cnf") + " -o " + path_of("broken.hmsf"));
  REQUIRE(r.exit_code == 64);
  write("missing_header.cnf", "1 2 3 0\n");
  REQUIRE(run("reduce " + path_of("missing_header.cnf")).exit_code == 64);
}

TEST_CASE("solve prints the optimum and honors decision mode") {
  write("example.cnf", kExampleCnf);
  run("reduce " + path_of("example.cnf") + " -o " + path_of("example.hmsf"));

  RunResult plain = run("solve " + path_of("example.hmsf") + " -o " + path_of("opt.forest"));
  REQUIRE(plain.exit_code == 0);
  REQUIRE(plain.output.find("min_cost=107") != std::string::npos);

  hmsf::SpanningForest forest = hmsf::parse_forest(slurp("opt.forest"));
  hmsf::Instance inst = hmsf::parse_instance(slurp("example.hmsf"));
  REQUIRE(hmsf::verify_forest(inst, forest).valid);

  REQUIRE(run("solve --decision " + path_of("example.hmsf")).exit_code == 0);

  write("unsat.cnf", unsat_cnf());
  run("reduce " + path_of("unsat.cnf") + " -o " + path_of("unsat.hmsf"));
  RunResult no = run("solve --decision " + path_of("unsat.hmsf"));
  REQUIRE(no.exit_code == 3);
  REQUIRE(no.output.find("decision=no") != std::string::npos);
}

TEST_CASE("solve respects the HMSF_MAX_ENUM override") {
  write("example.cnf", kExampleCnf);
  run("reduce " + path_of("example.cnf") + " -o " + path_of("example.hmsf"));
  fs::path capture = work_dir() / "capture.txt";
  std::string cmd = std::string("HMSF_MAX_ENUM=16 ") + HMSF_BIN + " solve " +
                    path_of("example.hmsf") + " > " + capture.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  REQUIRE(WEXITSTATUS(status) == 64);
}

TEST_CASE("sat reports a model or unsatisfiability") {
  write("example.cnf", kExampleCnf);
  RunResult yes = run("sat " + path_of("example.cnf"));
  REQUIRE(yes.exit_code == 0);
  REQUIRE(yes.output.find("sat=true") != std::string::npos);
  REQUIRE(yes.output.find("model=") != std::string::npos);

  write("unsat.cnf", unsat_cnf());
  RunResult no = run("sat " + path_of("unsat.cnf"));
  REQUIRE(no.exit_code == 3);
  REQUIRE(no.output.find("sat=false") != std::string::npos);
}

TEST_CASE("verify accepts good certificates and rejects broken ones") {
  hmsf::Formula f = test::example_formula();
  auto art = hmsf::reduce(f, hmsf::Variant::kGeneral);
  write("example.hmsf", hmsf::write_instance(art.instance));

  hmsf::Assignment a = test::make_assignment({true, false, true, false, false});
  hmsf::SpanningForest good = hmsf::assignment_to_forest(art, f, a);
  write("good.forest", hmsf::write_forest(good));
  RunResult ok = run("verify " + path_of("example.hmsf") + " " + path_of("good.forest"));
  REQUIRE(ok.exit_code == 0);
  REQUIRE(ok.output.find("valid=true") != std::string::npos);
  REQUIRE(ok.output.find("cost=107") != std::string::npos);

  // inject a cycle: clause 1 also touches x3 (node 6), edge (6,12) exists
  hmsf::SpanningForest cyclic = good;
  cyclic.trees[0].edges.emplace_back(6, 12);
  write("cyclic.forest", hmsf::write_forest(cyclic));
  RunResult cyc = run("verify " + path_of("example.hmsf") + " " + path_of("cyclic.forest"));
  REQUIRE(cyc.exit_code == 2);
  REQUIRE(cyc.output.find("cycle in tree") != std::string::npos);

  // structurally fine but over budget: clause 1 attached via the expensive side
  hmsf::SpanningForest expensive;
  expensive.trees.resize(2);
  expensive.trees[0].root = 0;
  expensive.trees[0].edges = {{0, 2}, {0, 4}, {0, 6}, {0, 8}, {0, 10},
                              {2, 3}, {4, 5}, {6, 7}, {8, 9}, {10, 11},
                              {5, 12}, {6, 13}};
  expensive.trees[1].root = 1;
  write("expensive.forest", hmsf::write_forest(expensive));
  RunResult over = run("verify " + path_of("example.hmsf") + " " + path_of("expensive.forest"));
  REQUIRE(over.exit_code == 2);
  REQUIRE(over.output.find("cost exceeds budget") != std::string::npos);
}

TEST_CASE("roundtrip agrees on every variant") {
  write("example.cnf", kExampleCnf);
  for (const std::string variant : {"general", "closure", "metric"}) {
    RunResult r = run("roundtrip --variant " + variant + " " + path_of("example.cnf"));
    INFO(r.output);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.output.find("min_cost=107 k=107") != std::string::npos);
    REQUIRE(r.output.find("equivalence=ok") != std::string::npos);
  }

  write("unsat.cnf", unsat_cnf());
  RunResult r = run("roundtrip " + path_of("unsat.cnf"));
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.output.find("sat=false decision=false") != std::string::npos);
}

TEST_CASE("check-metric separates the metric variant from the raw closure") {
  write("example.cnf", kExampleCnf);
  run("reduce " + path_of("example.cnf") + " --variant metric -o " + path_of("metric.hmsf"));
  RunResult clean = run("check-metric " + path_of("metric.hmsf"));
  REQUIRE(clean.exit_code == 0);
  REQUIRE(clean.output.find("index=0 violations=0") != std::string::npos);
  REQUIRE(clean.output.find("index=1 violations=0") != std::string::npos);

  run("reduce " + path_of("example.cnf") + " --variant closure -o " + path_of("closure.hmsf"));
  RunResult dirty = run("check-metric " + path_of("closure.hmsf"));
  REQUIRE(dirty.exit_code == 3);
  REQUIRE(dirty.output.find("triangle") != std::string::npos);

  run("reduce " + path_of("example.cnf") + " --variant general -o " + path_of("general.hmsf"));
  REQUIRE(run("check-metric " + path_of("general.hmsf")).exit_code == 64);  // not complete
}

TEST_CASE("export-dot emits one statement per edge") {
  write("example.cnf", kExampleCnf);
  run("reduce " + path_of("example.cnf") + " -o " + path_of("example.hmsf"));
  RunResult r = run("export-dot " + path_of("example.hmsf") + " -o " + path_of("example.dot"));
  REQUIRE(r.exit_code == 0);
  std::string dot = slurp("example.dot");
  std::size_t edges = 0;
  for (std::size_t pos = dot.find(" -- "); pos != std::string::npos; pos = dot.find(" -- ", pos + 1))
    ++edges;
  REQUIRE(edges == 21);
  REQUIRE(dot.find("style=dashed") != std::string::npos);
}

TEST_CASE("reduce, solve --decision, and sat agree on generated formulas") {
  for (int seed = 1; seed <= 6; ++seed) {
    std::string cnf = path_of("sweep" + std::to_string(seed) + ".cnf");
    std::string inst = path_of("sweep" + std::to_string(seed) + ".hmsf");
    REQUIRE(run("gen cnf --vars 4 --clauses " + std::to_string(2 + seed) + " --seed " +
                std::to_string(seed) + " -o " + cnf)
                .exit_code == 0);
    REQUIRE(run("reduce " + cnf + " -o " + inst).exit_code == 0);
    int decision = run("solve --decision " + inst).exit_code;
    int sat = run("sat " + cnf).exit_code;
    INFO("seed " << seed);
    REQUIRE((decision == 0 || decision == 3));
    REQUIRE(decision == sat);
  }
}

TEST_CASE("gen is deterministic per seed and validates parameters") {
  RunResult a = run("gen cnf --vars 4 --clauses 5 --seed 1 -o " + path_of("a.cnf"));
  RunResult b = run("gen cnf --vars 4 --clauses 5 --seed 1 -o " + path_of("b.cnf"));
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  REQUIRE(slurp("a.cnf") == slurp("b.cnf"));
  REQUIRE_FALSE(slurp("a.cnf").empty());
  hmsf::Formula f = hmsf::parse_dimacs(slurp("a.cnf"));
  REQUIRE(f.num_vars == 4);
  REQUIRE(f.clauses.size() == 5);

  RunResult c = run("gen cnf --vars 4 --clauses 5 --seed 2 -o " + path_of("c.cnf"));
  REQUIRE(c.exit_code == 0);
  REQUIRE(slurp("a.cnf") != slurp("c.cnf"));

  REQUIRE(run("gen cnf --vars 2 --clauses 3").exit_code == 64);

  RunResult g = run("gen hgraph --nodes 8 --density 0.7 --seed 2 -o " + path_of("g.hmsf"));
  REQUIRE(g.exit_code == 0);
  hmsf::Instance inst = hmsf::parse_instance(slurp("g.hmsf"));
  REQUIRE(inst.graph.num_nodes() == 8);
}

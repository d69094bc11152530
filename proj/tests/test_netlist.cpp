#include <doctest.h>

#include <camoforge/bench_io.hpp>
#include <camoforge/netlist.hpp>
#include <camoforge/synth.hpp>

#include <fstream>
#include <sstream>

#include "oracle.hpp"

using namespace camoforge;

namespace {

std::string load_bench_file(const std::string& name) {
  std::string path = std::string(CAMOFORGE_BENCH_DIR) + "/" + name;
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "missing benchmark file ", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("netlist") {

TEST_CASE("c17 parses with the expected structure") {
  Netlist n = parse_bench(load_bench_file("c17.bench"));
  CHECK(n.n_pis() == 5);
  CHECK(n.n_pos() == 2);
  CHECK(n.n_gates() == 6);
  for (const Gate& g : n.gates()) CHECK(g.kind == GateKind::Nand);
  CHECK(n.primary_inputs().front() == "1gat");
  CHECK(n.primary_outputs() == std::vector<std::string>{"22gat", "23gat"});
  CHECK(n.warnings().empty());
}

TEST_CASE("minimal single-buffer netlist") {
  Netlist n = parse_bench("INPUT(a)\nOUTPUT(y)\ny = BUFF(a)");
  CHECK(n.n_pis() == 1);
  CHECK(n.n_gates() == 1);
  CHECK(n.gates().front().kind == GateKind::Buff);
}

TEST_CASE("self-loop is a cyclic-netlist error") {
  CHECK_THROWS_WITH_AS(parse_bench("INPUT(a)\nOUTPUT(y)\ny = NAND(a, y)"),
                       doctest::Contains("cyclic"), Error);
}

TEST_CASE("two-gate cycle is rejected") {
  CHECK_THROWS_WITH_AS(
      parse_bench("INPUT(a)\nOUTPUT(y)\nx = NAND(a, y)\ny = NAND(a, x)"),
      doctest::Contains("cyclic"), Error);
}

TEST_CASE("duplicate net is rejected") {
  CHECK_THROWS_WITH_AS(parse_bench("INPUT(a)\nINPUT(a)\nOUTPUT(a)"),
                       doctest::Contains("duplicate net"), Error);
  CHECK_THROWS_WITH_AS(parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\ny = BUFF(a)"),
                       doctest::Contains("duplicate net"), Error);
}

TEST_CASE("undefined fanin is rejected") {
  CHECK_THROWS_WITH_AS(parse_bench("INPUT(a)\nOUTPUT(y)\ny = NAND(a, ghost)"),
                       doctest::Contains("undefined fanin"), Error);
}

TEST_CASE("arity violations are rejected") {
  CHECK_THROWS_WITH_AS(parse_bench("INPUT(a)\nOUTPUT(y)\ny = NAND(a)"),
                       doctest::Contains("arity"), Error);
  CHECK_THROWS_WITH_AS(parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NOT(a, b)"),
                       doctest::Contains("arity"), Error);
  CHECK_THROWS_WITH_AS(parse_bench("INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(y)\ny = XOR(a, b, c)"),
                       doctest::Contains("arity"), Error);
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_bench("INPUT(a)\nOUTPUT(y)\ny == NOT(a)\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.stage() == "parse");
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("unknown output net is rejected") {
  CHECK_THROWS_WITH_AS(parse_bench("INPUT(a)\nOUTPUT(nope)\n"),
                       doctest::Contains("unknown net"), Error);
}

TEST_CASE("n-ary gates up to the ISCAS fanin width parse") {
  Netlist n = parse_bench(
      "INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(d)\nINPUT(e)\nINPUT(f)\nINPUT(g)\nINPUT(h)\nINPUT(i)\n"
      "OUTPUT(y)\ny = NAND(a, b, c, d, e, f, g, h, i)");
  CHECK(n.gates().front().fanins.size() == 9);
}

TEST_CASE("declarations may come in any order") {
  // Gates may reference nets declared later; INPUT lines may trail gates.
  Netlist n = parse_bench("OUTPUT(y)\ny = NAND(m, a)\nm = NOT(b)\nINPUT(a)\nINPUT(b)\n");
  CHECK(n.n_gates() == 2);
  CHECK(n.primary_inputs() == std::vector<std::string>{"a", "b"});
  LevelMap lm = levelize(n);
  CHECK(lm.forward_level[n.net_id("y")] == 2);
}

TEST_CASE("comments and CRLF are tolerated") {
  Netlist n = parse_bench("# header\r\nINPUT(a)\r\n\r\nOUTPUT(y)  # trailing\r\ny = NOT(a)\r\n");
  CHECK(n.n_gates() == 1);
}

TEST_CASE("dangling nets warn but do not fail") {
  Netlist n = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\nunused = NOT(a)");
  REQUIRE(n.warnings().size() == 1);
  CHECK(n.warnings().front().find("unused") != std::string::npos);
}

TEST_CASE("CAMO dialect: single fanin placeholder") {
  Netlist n = parse_bench("INPUT(a)\nOUTPUT(y)\nc = CAMO(a)\ny = BUFF(c)");
  CHECK(n.n_camo() == 1);
  CHECK_THROWS_WITH_AS(parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = CAMO(a, b)"),
                       doctest::Contains("arity"), Error);
  CHECK(write_bench(n).find("c = CAMO(a)") != std::string::npos);
}

TEST_CASE("round-trip: c17 is reproduced gate for gate") {
  Netlist a = parse_bench(load_bench_file("c17.bench"));
  Netlist b = parse_bench(write_bench(a));
  CHECK(a.primary_inputs() == b.primary_inputs());
  CHECK(a.primary_outputs() == b.primary_outputs());
  REQUIRE(a.n_gates() == b.n_gates());
  for (const Gate& g : a.gates()) {
    const Gate& h = b.gate(b.net_id(g.name));
    CHECK(h.kind == g.kind);
    CHECK(h.fanins == g.fanins);
  }
  // And the canonical form is a fixed point.
  CHECK(write_bench(a) == write_bench(b));
}

TEST_CASE("round-trip property on random netlists") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    SynthSpec spec;
    spec.n_inputs = 6;
    spec.n_outputs = 3;
    spec.n_gates = 40;
    spec.seed = seed;
    Netlist a = random_netlist(spec);
    Netlist b = parse_bench(write_bench(a));
    REQUIRE(a.n_gates() == b.n_gates());
    CHECK(a.primary_inputs() == b.primary_inputs());
    CHECK(a.primary_outputs() == b.primary_outputs());
    for (const Gate& g : a.gates()) {
      const Gate& h = b.gate(b.net_id(g.name));
      CHECK(h.kind == g.kind);
      CHECK(h.fanins == g.fanins);
    }
  }
}

TEST_CASE("mutated inputs fail cleanly, never crash") {
  std::string base = load_bench_file("c17.bench");
  std::mt19937_64 rng(99);
  int parsed = 0, rejected = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::string text = base;
    int edits = 1 + static_cast<int>(rng() % 4);
    for (int e = 0; e < edits; ++e) {
      std::size_t pos = rng() % text.size();
      switch (rng() % 3) {
        case 0: text[pos] = static_cast<char>(rng() % 96 + 32); break;
        case 1: text.erase(pos, 1); break;
        default: text.insert(pos, 1, static_cast<char>(rng() % 96 + 32)); break;
      }
    }
    try {
      parse_bench(text);
      ++parsed;
    } catch (const Error&) {
      ++rejected;
    }
  }
  CHECK(parsed + rejected == 300);
  CHECK(rejected > 0);  // most mutations break something
}

TEST_CASE("empty netlist serializes to an empty document") {
  Netlist n = parse_bench("");
  CHECK(n.n_nets() == 0);
  CHECK(write_bench(n) == "");
}

TEST_CASE("levelize: chain distances from the output") {
  Netlist n = parse_bench("INPUT(a)\nOUTPUT(y)\nm = NOT(a)\ny = NOT(m)");
  LevelMap lm = levelize(n);
  CHECK(lm.output_distance[n.net_id("m")] == 1);
  CHECK(lm.output_distance[n.net_id("y")] == 0);
  CHECK(lm.output_distance[n.net_id("a")] == 2);
  CHECK(lm.forward_level[n.net_id("y")] == 2);
}

TEST_CASE("levelize: primary input feeding a PO-driving gate") {
  Netlist n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NAND(a, b)");
  LevelMap lm = levelize(n);
  CHECK(lm.output_distance[n.net_id("a")] == 1);
  CHECK(lm.forward_level[n.net_id("a")] == 0);
}

TEST_CASE("levelize: c17 maximum forward level (exhaustive oracle)") {
  Netlist n = parse_bench(load_bench_file("c17.bench"));
  LevelMap lm = levelize(n);
  // Frozen from exhaustive path enumeration: longest chain is 3 gates.
  CHECK(lm.max_forward_level == 3);
  oracle::Levels ol = oracle::levelize(n);
  int oracle_max = 0;
  for (const auto& [name, d] : ol.forward) oracle_max = std::max(oracle_max, d);
  CHECK(oracle_max == 3);
}

TEST_CASE("levelize agrees with the naive relaxation oracle") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SynthSpec spec;
    spec.n_inputs = 7;
    spec.n_outputs = 3;
    spec.n_gates = 60;  // <= 100 gates per the contract
    spec.seed = 1000 + seed;
    Netlist n = random_netlist(spec);
    LevelMap lm = levelize(n);
    oracle::Levels ol = oracle::levelize(n);
    for (int id = 0; id < n.n_nets(); ++id) {
      CHECK(lm.forward_level[id] == ol.forward.at(n.net_name(id)));
      CHECK(lm.output_distance[id] == ol.to_output.at(n.net_name(id)));
    }
  }
}

TEST_CASE("enumerate_paths: trivial cases") {
  Netlist n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\nOUTPUT(z)\ny = NOT(a)\nz = NOT(b)");
  CHECK(enumerate_paths(n, "a", "z") == 0);  // disconnected
  CHECK(enumerate_paths(n, "a", "y") == 1);  // single edge
  CHECK(enumerate_paths(n, "a", "a") == 1);  // trivial path
  CHECK_THROWS_AS(enumerate_paths(n, "a", "ghost"), Error);
}

TEST_CASE("enumerate_paths: c17 matches brute-force DFS") {
  Netlist n = parse_bench(load_bench_file("c17.bench"));
  // Frozen from DFS: 1gat feeds 22gat only through 10gat.
  CHECK(enumerate_paths(n, "1gat", "22gat") == 1);
  CHECK(enumerate_paths(n, "1gat", "22gat") == oracle::count_paths(n, "1gat", "22gat"));
  CHECK(enumerate_paths(n, "3gat", "23gat") == oracle::count_paths(n, "3gat", "23gat"));
  CHECK(enumerate_paths(n, "11gat", "23gat") == oracle::count_paths(n, "11gat", "23gat"));
}

TEST_CASE("enumerate_paths saturates instead of overflowing") {
  // Each stage doubles the path count; 70 stages exceed 64 bits.
  std::ostringstream bench;
  bench << "INPUT(x0)\nOUTPUT(x70)\n";
  for (int i = 1; i <= 70; ++i) {
    bench << "p" << i << " = BUFF(x" << i - 1 << ")\n"
          << "q" << i << " = NOT(x" << i - 1 << ")\n"
          << "x" << i << " = AND(p" << i << ", q" << i << ")\n";
  }
  Netlist n = parse_bench(bench.str());
  CHECK(enumerate_paths(n, "x0", "x70") == std::numeric_limits<std::uint64_t>::max());
  CHECK(enumerate_paths(n, "x0", "x20") == (std::uint64_t(1) << 20));
}

TEST_CASE("enumerate_paths matches DFS on random circuits") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SynthSpec spec;
    spec.n_inputs = 5;
    spec.n_outputs = 2;
    spec.n_gates = 30;
    spec.seed = 2000 + seed;
    Netlist n = random_netlist(spec);
    const std::string& from = n.primary_inputs().front();
    const std::string& to = n.primary_outputs().front();
    CHECK(enumerate_paths(n, from, to) == oracle::count_paths(n, from, to));
  }
}

}  // TEST_SUITE

// Acceptance suite: runs every shipped acceptance criterion end to end and
// prints one PASS/FAIL line per criterion. Exit code is the number of
// failures.
//
// The benchmark-dependent criteria run on the real ISCAS85 .bench files
// when all seven (c432..c7552) are present in --bench-dir; otherwise they
// run on the deterministic synthetic stand-in suite at the same scale,
// which is disclosed in the output. c17.bench is always read from
// --bench-dir (it ships with the repository).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <camoforge/camoforge.hpp>

#include "oracle.hpp"

namespace fs = std::filesystem;
using namespace camoforge;

namespace {

struct Check {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }

  void expect(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double less = 0, equal = 0;
      for (double u : v) {
        if (u < v[i]) ++less;
        if (u == v[i]) ++equal;
      }
      r[i] = less + (equal + 1) / 2.0;
    }
    return r;
  };
  std::vector<double> rx = ranks(x), ry = ranks(y);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(rx.size());
  my /= static_cast<double>(ry.size());
  double num = 0, dx = 0, dy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  if (dx == 0 || dy == 0) return 0;
  return num / std::sqrt(dx * dy);
}

std::vector<bool> vector_bits(std::uint64_t v, int width) {
  std::vector<bool> bits;
  for (int i = 0; i < width; ++i) bits.push_back((v >> i) & 1);
  return bits;
}

/// Total PI->PO path count, saturating.
std::uint64_t total_path_count(const Netlist& n) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> count(static_cast<std::size_t>(n.n_nets()), 0);
  const auto& topo = n.topo_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    int id = *it;
    std::uint64_t total = n.is_po_net(id) ? 1 : 0;
    for (int c : n.consumer_ids(id)) {
      std::uint64_t add = count[static_cast<std::size_t>(c)];
      total = (total > kMax - add) ? kMax : total + add;
    }
    count[static_cast<std::size_t>(id)] = total;
  }
  std::uint64_t sum = 0;
  for (int pi = 0; pi < n.n_pis(); ++pi) {
    std::uint64_t add = count[static_cast<std::size_t>(pi)];
    sum = (sum > kMax - add) ? kMax : sum + add;
  }
  return sum;
}

bool site_on_path(const Site& s, const std::vector<std::string>& path) {
  if (s.to_output) return !path.empty() && s.driver == path.back();
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    if (path[i] == s.driver && path[i + 1] == s.sink) return true;
  return false;
}

struct Corpus {
  Netlist c17;
  std::vector<std::pair<std::string, Netlist>> benches;
  bool synthetic = true;
};

Corpus load_corpus(const std::string& dir) {
  Corpus corpus;
  fs::path c17_path = fs::path(dir) / "c17.bench";
  corpus.c17 = parse_bench(read_file(c17_path.string()));

  static const char* kNames[] = {"c432", "c499", "c880", "c1908", "c2670", "c5315", "c7552"};
  bool all_real = true;
  for (const char* name : kNames)
    if (!fs::exists(fs::path(dir) / (std::string(name) + ".bench"))) all_real = false;
  if (all_real) {
    for (const char* name : kNames) {
      fs::path p = fs::path(dir) / (std::string(name) + ".bench");
      corpus.benches.emplace_back(name, parse_bench(read_file(p.string())));
    }
    corpus.synthetic = false;
  } else {
    corpus.benches = iscas85_scale_suite();
  }
  return corpus;
}

int g_failures = 0;

void run_criterion(int id, const std::string& title, double budget_s,
                   const std::function<void(Check&)>& body) {
  Check check;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.fail(std::string("exception: ") + e.what());
  }
  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && elapsed > budget_s) {
    std::ostringstream ss;
    ss << "exceeded time budget (" << elapsed << "s > " << budget_s << "s)";
    check.fail(ss.str());
  }
  if (!check.pass) ++g_failures;
  std::printf("%s  criterion %2d: %s (%.1fs)%s%s\n", check.pass ? "PASS" : "FAIL", id,
              title.c_str(), elapsed, check.detail.empty() ? "" : " -- ",
              check.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  std::string bench_dir = "benchmarks";
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--bench-dir" && i + 1 < argc)
      bench_dir = argv[++i];
    else {
      std::fprintf(stderr, "usage: %s [--bench-dir DIR]\n", argv[0]);
      return 2;
    }
  }

  Corpus corpus;
  try {
    corpus = load_corpus(bench_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "cannot load benchmark corpus: %s\n", e.what());
    return 2;
  }
  std::printf("benchmark corpus: %s\n",
              corpus.synthetic
                  ? "synthetic ISCAS85-scale stand-ins (real c432..c7552.bench not installed)"
                  : "real ISCAS85 .bench files");
  std::fflush(stdout);

  const DelayTable delays = DelayTable::defaults();
  constexpr std::uint64_t kVectorSeed = 42;
  constexpr std::int64_t kVectors = 10000;

  // 1. simulate.eval against the independent exhaustive oracle.
  run_criterion(1, "oracle equivalence on c17 and 50 random 8-gate netlists", 10, [&](Check& c) {
    for (std::uint64_t v = 0; v < 32; ++v) {
      if (eval(corpus.c17, KeyBits{}, vector_bits(v, 5)) != oracle::eval(corpus.c17, v))
        c.fail("c17 mismatch at vector " + std::to_string(v));
    }
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      SynthSpec spec;
      spec.bare = true;
      spec.n_gates = 8;
      spec.n_inputs = 5 + static_cast<int>(seed % 6);  // 5..10 inputs
      spec.n_outputs = 2 + static_cast<int>(seed % 2);
      spec.seed = seed;
      Netlist n = random_netlist(spec);
      std::uint64_t total = std::uint64_t(1) << n.n_pis();
      for (std::uint64_t v = 0; v < total; ++v) {
        if (eval(n, KeyBits{}, vector_bits(v, n.n_pis())) != oracle::eval(n, v)) {
          c.fail("random netlist seed " + std::to_string(seed) + " mismatch at vector " +
                 std::to_string(v));
          break;
        }
      }
    }
  });

  // 2. Correct-key unlock everywhere.
  run_criterion(2, "correct-key unlock across strategies, block counts and seeds", 300,
                [&](Check& c) {
    auto run_circuit = [&](const std::string& name, const Netlist& n, bool exhaustive) {
      PathReport base = top_k_paths(n, delays, 100);
      int max_level = static_cast<int>(base.paths.front().nets.size());
      VectorSet vectors = exhaustive ? VectorSet::exhaustive(n.n_pis())
                                     : VectorSet::random(n.n_pis(), kVectors, kVectorSeed);
      for (PlacementStrategy strategy :
           {PlacementStrategy::NoncriticalSpread, PlacementStrategy::CriticalStacked,
            PlacementStrategy::LevelAt}) {
        for (int nb = 1; nb <= 7; ++nb) {
          for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            bool level_mode = strategy == PlacementStrategy::LevelAt;
            std::optional<int> level;
            int blocks = nb;
            if (level_mode) {
              level = std::min(nb, max_level);
              blocks = 1;  // a level plan carries a single site
            }
            PlacementPlan plan = plan_placement(n, base, strategy, blocks, seed, level);
            InsertResult ins = insert_blocks(n, plan);
            EquivalenceResult eq = equivalence_check(
                n, ins.netlist, KeyBits::all_buffer(ins.block_ids.size()), vectors);
            if (!eq.equivalent) {
              c.fail(name + " " + to_string(strategy) + " n=" + std::to_string(nb) + " seed=" +
                     std::to_string(seed) + " not unlocked by the correct key");
              return;
            }
          }
        }
      }
    };
    run_circuit("c17", corpus.c17, /*exhaustive=*/true);
    for (const auto& [name, n] : corpus.benches) run_circuit(name, n, false);
  });

  // 3. Encryption probability band at 7 blocks.
  std::vector<std::pair<std::string, PathReport>> base_reports;
  for (const auto& [name, n] : corpus.benches)
    base_reports.emplace_back(name, top_k_paths(n, delays, 100));
  run_criterion(3, "encryption probability: mean in [90%,100%], per circuit >= 80%", 600,
                [&](Check& c) {
    double grand = 0;
    int cells = 0;
    std::ostringstream per;
    for (std::size_t i = 0; i < corpus.benches.size(); ++i) {
      const auto& [name, n] = corpus.benches[i];
      VectorSet vectors = VectorSet::random(n.n_pis(), kVectors, kVectorSeed);
      double mean = 0;
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        PlacementPlan plan = plan_placement(n, base_reports[i].second,
                                            PlacementStrategy::NoncriticalSpread, 7, seed);
        InsertResult ins = insert_blocks(n, plan);
        KeyBits wrong = KeyBits::all_inverter(ins.block_ids.size());
        mean += encryption_probability(n, ins.netlist, wrong, vectors).probability;
      }
      mean /= 10;
      grand += mean * 10;
      cells += 10;
      per << " " << name << "=" << mean;
      if (mean < 0.80) c.fail(name + " per-circuit mean " + std::to_string(mean) + " < 0.80");
    }
    double overall = grand / cells;
    std::ostringstream ss;
    ss << "mean=" << overall << ", per-circuit:" << per.str();
    c.detail = ss.str();
    c.expect(overall >= 0.90 && overall <= 1.0,
             "overall mean " + std::to_string(overall) + " outside [0.90, 1.00]");
  });

  // 4. Probability rises with the block count.
  run_criterion(4, "positive probability trend over 1..5 blocks (Spearman > 0)", 0, [&](Check& c) {
    for (std::size_t i = 0; i < corpus.benches.size(); ++i) {
      const auto& [name, n] = corpus.benches[i];
      VectorSet vectors = VectorSet::random(n.n_pis(), kVectors, kVectorSeed);
      std::vector<double> xs, ys;
      for (int nb = 1; nb <= 5; ++nb) {
        double mean = 0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
          PlacementPlan plan = plan_placement(n, base_reports[i].second,
                                              PlacementStrategy::NoncriticalSpread, nb, seed);
          InsertResult ins = insert_blocks(n, plan);
          KeyBits wrong = KeyBits::all_inverter(ins.block_ids.size());
          mean += encryption_probability(n, ins.netlist, wrong, vectors).probability;
        }
        xs.push_back(nb);
        ys.push_back(mean / 5);
      }
      double rho = spearman(xs, ys);
      if (!(rho > 0))
        c.fail(name + " Spearman " + std::to_string(rho) + " not positive");
    }
  });

  // 5. Critical-path overhead of spread placement.
  run_criterion(5, "spread timing: mean critical overhead <= 5%, n=1 exactly 0%", 120,
                [&](Check& c) {
    double sum_pct = 0;
    int runs = 0;
    for (std::size_t i = 0; i < corpus.benches.size(); ++i) {
      const auto& [name, n] = corpus.benches[i];
      const PathReport& base = base_reports[i].second;
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        PlacementPlan p7 = plan_placement(n, base, PlacementStrategy::NoncriticalSpread, 7, seed);
        PathReport after7 = top_k_paths(insert_blocks(n, p7).netlist, delays, 100);
        sum_pct += delay_overhead(base, after7).critical_pct;
        ++runs;

        PlacementPlan p1 = plan_placement(n, base, PlacementStrategy::NoncriticalSpread, 1, seed);
        if (site_on_path(p1.sites.front(), p1.critical_path)) continue;  // off-critical guard
        PathReport after1 = top_k_paths(insert_blocks(n, p1).netlist, delays, 100);
        double pct = delay_overhead(base, after1).critical_pct;
        if (pct != 0.0)
          c.fail(name + " seed " + std::to_string(seed) + ": single off-critical block moved "
                 "the critical path by " + std::to_string(pct) + "%");
      }
    }
    double mean_pct = sum_pct / runs;
    std::ostringstream ss;
    ss << "mean n=7 critical overhead " << mean_pct << "%";
    c.detail = ss.str();
    c.expect(mean_pct <= 5.0, "mean overhead exceeds 5%");
  });

  // 6. Stacked-on-critical contrast.
  run_criterion(6, "critical-stacked: +7 camo delays exactly; ~6% camo lands in [30%,55%]", 0,
                [&](Check& c) {
    for (std::size_t i = 0; i < corpus.benches.size(); ++i) {
      const auto& [name, n] = corpus.benches[i];
      const PathReport& base = base_reports[i].second;
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        PlacementPlan plan = plan_placement(n, base, PlacementStrategy::CriticalStacked, 7, seed);
        PathReport after = top_k_paths(insert_blocks(n, plan).netlist, delays, 100);
        double expect = base.critical_delay_ps + 7 * delays.camo_ps;
        if (std::fabs(after.critical_delay_ps - expect) > 1e-9)
          c.fail(name + " stacked delay " + std::to_string(after.critical_delay_ps) + " != " +
                 std::to_string(expect));
      }
      DelayTable heavy = delays;
      heavy.camo_ps = 0.06 * base.critical_delay_ps;
      PathReport heavy_base = top_k_paths(n, heavy, 100);
      PlacementPlan plan = plan_placement(n, heavy_base, PlacementStrategy::CriticalStacked, 7, 1);
      PathReport after = top_k_paths(insert_blocks(n, plan).netlist, heavy, 100);
      double pct = delay_overhead(heavy_base, after).critical_pct;
      if (pct < 30.0 || pct > 55.0)
        c.fail(name + " relative overhead " + std::to_string(pct) + "% outside [30, 55]");
    }
  });

  // 7. Top-100 metric.
  run_criterion(7, "top-100 paths: exact vs enumeration; spread overhead <= 8%", 0, [&](Check& c) {
    std::vector<std::pair<std::string, Netlist>> small;
    small.emplace_back("c17", corpus.c17);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      SynthSpec spec;
      spec.n_inputs = 6;
      spec.n_outputs = 3;
      spec.n_gates = 40;
      spec.seed = 9000 + seed;
      small.emplace_back("small" + std::to_string(seed), random_netlist(spec));
    }
    for (const auto& [name, n] : corpus.benches) small.emplace_back(name, n);
    int qualifying = 0;
    for (const auto& [name, n] : small) {
      if (total_path_count(n) > 10000) continue;
      ++qualifying;
      auto expected = oracle::all_paths(n, delays);
      PathReport got = top_k_paths(n, delays, 100);
      std::size_t want = std::min<std::size_t>(expected.size(), 100);
      if (got.paths.size() != want) {
        c.fail(name + ": " + std::to_string(got.paths.size()) + " paths != " +
               std::to_string(want));
        continue;
      }
      for (std::size_t i = 0; i < want; ++i) {
        if (got.paths[i].nets != expected[i].nets ||
            std::fabs(got.paths[i].delay_ps - expected[i].delay_ps) > 1e-9) {
          c.fail(name + ": path rank " + std::to_string(i) + " differs from enumeration");
          break;
        }
      }
    }
    c.expect(qualifying >= 10, "too few circuits under 10^4 paths to compare");

    double sum_pct = 0;
    int runs = 0;
    for (std::size_t i = 0; i < corpus.benches.size(); ++i) {
      const auto& [name, n] = corpus.benches[i];
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        PlacementPlan plan = plan_placement(n, base_reports[i].second,
                                            PlacementStrategy::NoncriticalSpread, 7, seed);
        PathReport after = top_k_paths(insert_blocks(n, plan).netlist, delays, 100);
        sum_pct += delay_overhead(base_reports[i].second, after).topk_pct;
        ++runs;
      }
    }
    double mean_pct = sum_pct / runs;
    std::ostringstream ss;
    ss << "mean top-100 overhead " << mean_pct << "%";
    c.detail = ss.str();
    c.expect(mean_pct <= 8.0, "mean top-100 overhead exceeds 8%");
  });

  // 8. Level-1 placement dominates deeper levels.
  run_criterion(8, "level distance: level 1 flips its output always and tops deeper levels", 0,
                [&](Check& c) {
    int tested = 0;
    for (const auto& [name, n] : corpus.benches) {
      if (name != "c880" && name != "c880s" && name != "c5315" && name != "c5315s") continue;
      ++tested;
      TimedPath crit = critical_path(n, delays);
      VectorSet vectors = VectorSet::random(n.n_pis(), kVectors, kVectorSeed);
      auto rows = level_sweep(n, crit, vectors);
      if (rows.empty() || rows.front().level != 1) {
        c.fail(name + ": no level-1 row");
        continue;
      }
      if (rows.front().po_flip_probability != 1.0)
        c.fail(name + ": level-1 output flip rate " +
               std::to_string(rows.front().po_flip_probability) + " != 1.0");
      for (const auto& row : rows)
        if (rows.front().probability < row.probability)
          c.fail(name + ": level " + std::to_string(row.level) + " beats level 1");
    }
    c.expect(tested == 2, "expected both c880-scale and c5315-scale circuits");
  });

  // 9. Reconfigurable-gate truth tables.
  run_criterion(9, "reconfigurable NAND family truth tables (16 cells)", 1, [&](Check& c) {
    struct Row {
      BlockMode c1, c2, c3;
      std::array<bool, 4> want;
      const char* name;
    };
    const Row rows[] = {
        {BlockMode::Buffer, BlockMode::Buffer, BlockMode::Buffer, {1, 1, 1, 0}, "NAND"},
        {BlockMode::Buffer, BlockMode::Buffer, BlockMode::Inverter, {0, 0, 0, 1}, "AND"},
        {BlockMode::Inverter, BlockMode::Inverter, BlockMode::Buffer, {0, 1, 1, 1}, "OR"},
        {BlockMode::Inverter, BlockMode::Inverter, BlockMode::Inverter, {1, 0, 0, 0}, "NOR"},
    };
    for (const Row& r : rows) {
      if (compose_reconfigurable(r.c1, r.c2, r.c3) != r.want)
        c.fail(std::string(r.name) + " table differs");
    }
  });

  // 10. Two-step and one-step programming agree for every key.
  run_criterion(10, "protocol equivalence over all 256 keys on an 8-block chain", 5, [&](Check& c) {
    OperatingPoint op;
    std::vector<std::string> ids;
    for (int i = 0; i < 8; ++i) ids.push_back("b" + std::to_string(i));
    for (unsigned keyval = 0; keyval < 256 && c.pass; ++keyval) {
      KeyBits key;
      for (int i = 0; i < 8; ++i) key.bits.push_back((keyval >> i) & 1);
      ScanChain chain_two = make_chain(ids);
      ScanChain chain_one = make_chain(ids, /*negative_zero_bias=*/true);
      shift_key(chain_two, key, 8);
      shift_key(chain_one, key, 8);
      std::vector<EncryptionBlock> two(8), one(8);
      program_step1_erase(chain_two, two, op);
      for (const auto& b : two)
        if (b.upper().state() != VthState::Hvt || b.lower().state() != VthState::Hvt)
          c.fail("step-1 snapshot not all-HVT for key " + std::to_string(keyval));
      program_step2_write(chain_two, two, op);
      program_one_step(chain_one, one, op);
      for (int i = 0; i < 8; ++i) {
        if (two[static_cast<std::size_t>(i)].mode() == BlockMode::Unresolved)
          c.fail("unresolved block after two-step, key " + std::to_string(keyval));
        if (two[static_cast<std::size_t>(i)].mode() != one[static_cast<std::size_t>(i)].mode())
          c.fail("protocol mismatch at block " + std::to_string(i) + ", key " +
                 std::to_string(keyval));
        bool want_invert = (keyval >> i) & 1;
        if ((two[static_cast<std::size_t>(i)].mode() == BlockMode::Inverter) != want_invert)
          c.fail("key bit polarity broken at block " + std::to_string(i));
      }
    }
  });

  // 11. Device-level properties.
  run_criterion(11, "device properties: nonvolatile reads, idempotence, grid, sub-boundary", 0,
                [&](Check& c) {
    FeFetDevice d;
    d.apply_pulse(4.0, 500.0);
    for (int i = 1; i < 220; ++i) {
      (void)d.conducts(i * 0.01);
      if (d.state() != VthState::Lvt) c.fail("read mutated device state");
    }
    FeFetDevice twice;
    twice.apply_pulse(-4.0, 500.0);
    VthState once = twice.state();
    twice.apply_pulse(-4.0, 500.0);
    if (twice.state() != once) c.fail("programming is not idempotent");
    FeFetDevice lvt(FeFetParams{}, VthState::Lvt), hvt(FeFetParams{}, VthState::Hvt);
    for (int i = 1; i < 220; ++i) {
      double v = i * 0.01;
      if (lvt.conducts(v) != (v > lvt.params().vth_low_v)) c.fail("LVT grid error");
      if (hvt.conducts(v) != (v > hvt.params().vth_high_v)) c.fail("HVT grid error");
    }
    FeFetDevice blank;
    blank.apply_pulse(4.0, 5.0);  // below the 20 ns anchor
    if (blank.state() != VthState::Unprogrammed) c.fail("sub-boundary pulse switched the device");
  });

  // 12. Variation calibration.
  run_criterion(12, "variation: 10k-sample spread within 20% of 6.4/4.5 ns; sigma=0 exact", 0,
                [&](Check& c) {
    DelayVariationModel model;
    McDelayStats buf = mc_delay(BlockMode::Buffer, model.sigma_vth_v, 10000, kVectorSeed, model);
    McDelayStats inv = mc_delay(BlockMode::Inverter, model.sigma_vth_v, 10000, kVectorSeed, model);
    std::ostringstream ss;
    ss << "buffer spread " << buf.spread_ns << " ns, inverter spread " << inv.spread_ns << " ns";
    c.detail = ss.str();
    if (std::fabs(buf.spread_ns - 6.4) / 6.4 > 0.20)
      c.fail("buffer spread outside 6.4 ns +/- 20%");
    if (std::fabs(inv.spread_ns - 4.5) / 4.5 > 0.20)
      c.fail("inverter spread outside 4.5 ns +/- 20%");
    McDelayStats zero = mc_delay(BlockMode::Buffer, 0.0, 10000, kVectorSeed, model);
    if (zero.stddev_ns != 0.0 || zero.spread_ns != 0.0) c.fail("sigma=0 variance not exactly 0");
  });

  std::printf("%d of 12 criteria passed\n", 12 - g_failures);
  return g_failures;
}

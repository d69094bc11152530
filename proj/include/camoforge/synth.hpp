/* camoforge
 *
 * synth.hpp -- seeded random combinational circuit generator, used for
 * property tests and for the benchmark-scale stand-in suite when the real
 * ISCAS85 files are not installed.
 *
 * Generated circuits carry one dedicated deep chain so the most-critical
 * path is unique with healthy slack everywhere else, leftover sink nets are
 * folded into an XOR absorber so nearly every gate is observable, and the
 * gate mix leans on the NAND/NOT families like the target corpus.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "netlist.hpp"

namespace camoforge {

struct SynthSpec {
  int n_inputs = 8;
  int n_outputs = 2;
  int n_gates = 24;  // main gates; absorbers and the deep chain add to this
  std::uint64_t seed = 1;
  int extra_chain_margin = 3;  // chain length beyond the organic depth
  bool bare = false;  // exactly n_gates: no absorber, parity or deep chain
};

namespace detail {

struct GrowingCircuit {
  std::vector<Gate> gates;
  std::vector<std::string> names;   // pool of all nets, PIs first
  std::vector<int> level;           // forward level per pool entry
  std::vector<int> consumers;       // consumer count per pool entry
  int n_pis = 0;

  int add_gate(std::string name, GateKind kind, const std::vector<int>& fanins) {
    Gate g;
    g.name = name;
    g.kind = kind;
    int lvl = 0;
    for (int f : fanins) {
      g.fanins.push_back(names[static_cast<std::size_t>(f)]);
      ++consumers[static_cast<std::size_t>(f)];
      lvl = std::max(lvl, level[static_cast<std::size_t>(f)] + 1);
    }
    gates.push_back(std::move(g));
    names.push_back(std::move(name));
    level.push_back(lvl);
    consumers.push_back(0);
    return static_cast<int>(names.size()) - 1;
  }
};

}  // namespace detail

inline Netlist random_netlist(const SynthSpec& spec) {
  if (spec.n_inputs < 1 || spec.n_outputs < 1 || spec.n_gates < 1)
    throw Error("synth", "spec needs at least one input, output and gate");
  std::mt19937_64 rng(spec.seed);
  auto pick = [&](std::size_t n) { return static_cast<int>(rng() % n); };
  auto chance = [&](double p) { return (rng() >> 11) * 0x1.0p-53 < p; };

  detail::GrowingCircuit c;
  c.n_pis = spec.n_inputs;
  std::vector<std::string> pis;
  for (int i = 0; i < spec.n_inputs; ++i) {
    pis.push_back("i" + std::to_string(i));
    c.names.push_back(pis.back());
    c.level.push_back(0);
    c.consumers.push_back(0);
  }

  // NAND/NOT-leaning with a strong XOR share; XOR columns are what keep
  // flips observable through the arithmetic-style cones of the target
  // corpus.
  auto draw_kind = [&]() {
    int r = pick(100);
    if (r < 14) return GateKind::Nand;
    if (r < 24) return GateKind::And;
    if (r < 34) return GateKind::Or;
    if (r < 41) return GateKind::Nor;
    if (r < 65) return GateKind::Xor;
    if (r < 71) return GateKind::Xnor;
    if (r < 92) return GateKind::Not;
    return GateKind::Buff;
  };

  auto draw_fanin = [&](const std::vector<int>& taken, bool prefer_unconsumed) -> int {
    for (int attempt = 0; attempt < 64; ++attempt) {
      int id;
      if (prefer_unconsumed && chance(0.45)) {
        // reuse a recent sink so few nets dangle
        int lo = std::max(0, static_cast<int>(c.names.size()) - 128);
        int span = static_cast<int>(c.names.size()) - lo;
        id = lo + pick(static_cast<std::size_t>(span));
        if (c.consumers[static_cast<std::size_t>(id)] != 0) continue;
      } else if (chance(0.15)) {
        id = pick(static_cast<std::size_t>(c.n_pis));  // fresh primary input
      } else if (chance(0.35)) {
        id = pick(c.names.size());  // anywhere: reconvergence and fanout
      } else {
        int window = std::max(32, static_cast<int>(c.names.size()) / 3);
        int lo = std::max(0, static_cast<int>(c.names.size()) - window);
        id = lo + pick(static_cast<std::size_t>(static_cast<int>(c.names.size()) - lo));
      }
      if (std::find(taken.begin(), taken.end(), id) == taken.end()) return id;
    }
    for (int id = 0; id < static_cast<int>(c.names.size()); ++id)
      if (std::find(taken.begin(), taken.end(), id) == taken.end()) return id;
    throw Error("synth", "cannot draw a distinct fanin");
  };

  for (int i = 0; i < spec.n_gates; ++i) {
    GateKind kind = draw_kind();
    int arity;
    auto [lo, hi] = arity_range(kind);
    if (lo == 1)
      arity = 1;
    else if (lo == hi)
      arity = 2;
    else
      arity = chance(0.85) ? 2 : (chance(0.8) ? 3 : 4);
    std::vector<int> fanins;
    for (int a = 0; a < arity; ++a) fanins.push_back(draw_fanin(fanins, a == 0));
    c.add_gate("g" + std::to_string(i), kind, fanins);
  }

  auto sink_list_bare = [&]() {
    std::vector<int> sinks;
    for (int id = c.n_pis; id < static_cast<int>(c.names.size()); ++id)
      if (c.consumers[static_cast<std::size_t>(id)] == 0) sinks.push_back(id);
    return sinks;
  };
  if (spec.bare) {
    std::vector<int> pos_ids;
    std::vector<int> sinks = sink_list_bare();
    std::shuffle(sinks.begin(), sinks.end(), rng);
    for (int id : sinks) {
      if (static_cast<int>(pos_ids.size()) >= spec.n_outputs) break;
      pos_ids.push_back(id);
    }
    int guard = 0;
    while (static_cast<int>(pos_ids.size()) < spec.n_outputs && guard++ < 100000) {
      int id = c.n_pis + pick(static_cast<std::size_t>(c.names.size() - static_cast<std::size_t>(c.n_pis)));
      if (std::find(pos_ids.begin(), pos_ids.end(), id) == pos_ids.end()) pos_ids.push_back(id);
    }
    std::vector<std::string> pos;
    for (int id : pos_ids) pos.push_back(c.names[static_cast<std::size_t>(id)]);
    return Netlist::build(std::move(c.gates), std::move(pis), std::move(pos));
  }

  int aux_counter = 0;
  auto xor_reduce = [&](std::vector<int> leaves) {
    while (leaves.size() > 1) {
      std::vector<int> next;
      for (std::size_t i = 0; i + 1 < leaves.size(); i += 2)
        next.push_back(c.add_gate("a" + std::to_string(aux_counter++), GateKind::Xor,
                                  {leaves[i], leaves[i + 1]}));
      if (leaves.size() % 2) next.push_back(leaves.back());
      leaves = std::move(next);
    }
    return leaves.empty() ? -1 : leaves.front();
  };

  // Fold leftover sinks (beyond what the outputs will expose) into an XOR
  // tree so their logic stays observable.
  auto sink_list = [&]() {
    std::vector<int> sinks;
    for (int id = c.n_pis; id < static_cast<int>(c.names.size()); ++id)
      if (c.consumers[static_cast<std::size_t>(id)] == 0) sinks.push_back(id);
    return sinks;
  };
  std::vector<int> sinks = sink_list();
  int absorber_root = -1;
  if (static_cast<int>(sinks.size()) > spec.n_outputs - 1) {
    std::vector<int> shuffled = sinks;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    int n_keep = std::max(0, spec.n_outputs - 2);
    std::vector<int> fold(shuffled.begin() + n_keep, shuffled.end());
    absorber_root = xor_reduce(std::move(fold));
  }

  // Parity observation outputs over nets sampled across the whole body,
  // like the checker columns of the target corpus; they keep most cones
  // observable at some output.
  std::vector<int> parity_roots;
  {
    int n_parity = std::clamp(spec.n_outputs / 3, 2, 10);
    int body_gates = static_cast<int>(c.names.size()) - c.n_pis;
    int taps_per_tree = std::clamp(body_gates / 12, 8, 32);
    for (int t = 0; t < n_parity; ++t) {
      std::vector<int> taps;
      for (int i = 0; i < taps_per_tree; ++i)
        taps.push_back(c.n_pis + pick(static_cast<std::size_t>(body_gates)));
      std::sort(taps.begin(), taps.end());
      taps.erase(std::unique(taps.begin(), taps.end()), taps.end());
      if (taps.size() < 2) continue;
      parity_roots.push_back(xor_reduce(std::move(taps)));
    }
  }

  // Dedicated deepest chain: two buffers (no side edges near the root),
  // then two-input gates whose side inputs are primary inputs only, so
  // every other path keeps at least a few gate delays of slack.
  int organic_depth = 0;
  for (int id = 0; id < static_cast<int>(c.names.size()); ++id)
    organic_depth = std::max(organic_depth, c.level[static_cast<std::size_t>(id)]);
  int chain_len = organic_depth + std::max(spec.extra_chain_margin, organic_depth / 4);
  int prev = pick(static_cast<std::size_t>(c.n_pis));
  prev = c.add_gate("d0", GateKind::Buff, {prev});
  prev = c.add_gate("d1", GateKind::Buff, {prev});
  static constexpr GateKind kChainKinds[3] = {GateKind::Nand, GateKind::And, GateKind::Or};
  for (int s = 2; s < chain_len; ++s) {
    int side = pick(static_cast<std::size_t>(c.n_pis));
    while (side == prev) side = pick(static_cast<std::size_t>(c.n_pis));
    prev = c.add_gate("d" + std::to_string(s), kChainKinds[s % 3], {prev, side});
  }
  int chain_tail = prev;

  // Outputs: the chain tail, the absorber root, parity roots, kept sinks,
  // then random internal nets until the target count is met.
  std::vector<int> pos_ids{chain_tail};
  if (absorber_root >= 0 && static_cast<int>(pos_ids.size()) < spec.n_outputs)
    pos_ids.push_back(absorber_root);
  for (int root : parity_roots) {
    if (static_cast<int>(pos_ids.size()) >= spec.n_outputs) break;
    if (root >= 0 && std::find(pos_ids.begin(), pos_ids.end(), root) == pos_ids.end())
      pos_ids.push_back(root);
  }
  sinks = sink_list();
  std::shuffle(sinks.begin(), sinks.end(), rng);
  for (int id : sinks) {
    if (static_cast<int>(pos_ids.size()) >= spec.n_outputs) break;
    if (std::find(pos_ids.begin(), pos_ids.end(), id) == pos_ids.end()) pos_ids.push_back(id);
  }
  int guard = 0;
  while (static_cast<int>(pos_ids.size()) < spec.n_outputs && guard++ < 100000) {
    int id = c.n_pis + pick(static_cast<std::size_t>(c.names.size() - static_cast<std::size_t>(c.n_pis)));
    if (std::find(pos_ids.begin(), pos_ids.end(), id) == pos_ids.end()) pos_ids.push_back(id);
  }

  std::vector<std::string> pos;
  for (int id : pos_ids) pos.push_back(c.names[static_cast<std::size_t>(id)]);
  return Netlist::build(std::move(c.gates), std::move(pis), std::move(pos));
}

/// Deterministic benchmark-scale stand-ins matching the input/output/gate
/// counts of the distributed ISCAS85 circuits; names carry an `s` suffix to
/// mark them as synthetic.
inline std::vector<std::pair<std::string, Netlist>> iscas85_scale_suite(std::uint64_t seed_base = 7) {
  struct Entry {
    const char* name;
    int pis, pos, gates;
  };
  static constexpr Entry kEntries[] = {
      {"c432s", 36, 7, 160},    {"c499s", 41, 32, 202},   {"c880s", 60, 26, 383},
      {"c1908s", 33, 25, 880},  {"c2670s", 233, 140, 1193}, {"c5315s", 178, 123, 2307},
      {"c7552s", 207, 108, 3512}};
  std::vector<std::pair<std::string, Netlist>> suite;
  std::uint64_t i = 0;
  for (const Entry& e : kEntries) {
    SynthSpec spec;
    spec.n_inputs = e.pis;
    spec.n_outputs = e.pos;
    spec.n_gates = e.gates;
    spec.seed = seed_base + 1000 * i++;
    suite.emplace_back(e.name, random_netlist(spec));
  }
  return suite;
}

}  // namespace camoforge

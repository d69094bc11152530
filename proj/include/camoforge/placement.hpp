/* camoforge
 *
 * placement.hpp -- insertion-site selection (non-critical spread, stacked
 * on-critical contrast, and level-at-distance variants), CAMO splicing,
 * reconfigurable-gate composition and per-block cost constants.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "device.hpp"
#include "netlist.hpp"
#include "timing.hpp"

namespace camoforge {

enum class PlacementStrategy : std::uint8_t { NoncriticalSpread, CriticalStacked, LevelAt };

inline const char* to_string(PlacementStrategy s) {
  switch (s) {
    case PlacementStrategy::NoncriticalSpread: return "noncritical";
    case PlacementStrategy::CriticalStacked: return "critical";
    case PlacementStrategy::LevelAt: return "level";
  }
  return "?";
}

inline std::optional<PlacementStrategy> placement_strategy_from_string(std::string_view s) {
  if (s == "noncritical" || s == "noncritical_spread" || s == "spread")
    return PlacementStrategy::NoncriticalSpread;
  if (s == "critical" || s == "critical_stacked" || s == "stacked")
    return PlacementStrategy::CriticalStacked;
  if (s == "level" || s == "level_at") return PlacementStrategy::LevelAt;
  return std::nullopt;
}

/// One insertion site. Gate sites reroute fanin `pin` of gate `sink`
/// through a new CAMO gate; output taps (`to_output`) splice the block
/// between the driver and primary-output entry `pin`, so only that output
/// branch sees the block.
struct Site {
  std::string driver;
  std::string sink;  // empty for output taps
  int pin = 0;
  bool to_output = false;
  bool on_critical = false;
  int level_from_output = 0;  // 1 = directly at an output
};

struct PlacementPlan {
  PlacementStrategy strategy = PlacementStrategy::NoncriticalSpread;
  int n_blocks = 0;
  std::optional<int> level;
  std::uint64_t seed = 0;
  std::vector<Site> sites;
  std::vector<std::string> critical_path;  // reference path the plan was built against
  int spread_violations = 0;  // path-sharing pairs admitted by the fallback
};

namespace detail {

struct Edge {
  int driver = -1;
  int sink = -1;  // node id, or -1 for an output tap
  int pin = 0;
  bool to_output = false;
};

inline bool edge_order(const Netlist& n, const Edge& a, const Edge& b) {
  const std::string& da = n.net_name(a.driver);
  const std::string& db = n.net_name(b.driver);
  if (da != db) return da < db;
  if (a.to_output != b.to_output) return a.to_output < b.to_output;
  if (a.sink != b.sink) {
    std::string sa = a.sink < 0 ? "" : n.net_name(a.sink);
    std::string sb = b.sink < 0 ? "" : n.net_name(b.sink);
    if (sa != sb) return sa < sb;
  }
  return a.pin < b.pin;
}

/// Net ids on the reference path, plus its edge set for on-path tests.
struct PathIndex {
  std::vector<int> nets;
  std::set<std::pair<int, int>> edges;  // (driver, sink-gate) pairs
  int terminal = -1;

  PathIndex(const Netlist& n, const std::vector<std::string>& path) {
    for (const std::string& name : path) nets.push_back(n.net_id(name));
    for (std::size_t i = 0; i + 1 < nets.size(); ++i) edges.emplace(nets[i], nets[i + 1]);
    if (!nets.empty()) terminal = nets.back();
  }

  bool edge_on_path(const Edge& e) const {
    if (e.to_output) return e.driver == terminal;
    return edges.count({e.driver, e.sink}) > 0;
  }
};

inline std::vector<bool> descendants_of(const Netlist& n, int net) {
  std::vector<bool> seen(n.n_nets(), false);
  std::vector<int> stack{net};
  seen[net] = true;
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    for (int c : n.consumer_ids(id))
      if (!seen[c]) {
        seen[c] = true;
        stack.push_back(c);
      }
  }
  return seen;
}

inline std::vector<bool> ancestors_of(const Netlist& n, int net) {
  std::vector<bool> seen(n.n_nets(), false);
  std::vector<int> stack{net};
  seen[net] = true;
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    for (int f : n.fanin_ids(id))
      if (!seen[f]) {
        seen[f] = true;
        stack.push_back(f);
      }
  }
  return seen;
}

/// Continuation net of an edge: an output tap terminates the path.
inline int edge_tail(const Edge& e) { return e.to_output ? -1 : e.sink; }

/// Reachability closures of a chosen site, for O(1) path-sharing tests.
struct SiteClosure {
  std::vector<bool> down;  // descendants of the edge's continuation
  std::vector<bool> up;    // ancestors of the edge's driver
};

inline SiteClosure closure_of(const Netlist& n, const Edge& e) {
  SiteClosure c;
  int tail = edge_tail(e);
  c.down = tail >= 0 ? descendants_of(n, tail) : std::vector<bool>(n.n_nets(), false);
  c.up = ancestors_of(n, e.driver);
  return c;
}

/// True iff one PI->PO path can traverse both edges.
inline bool shares_path(const SiteClosure& chosen, const Edge& cand) {
  if (chosen.down[cand.driver]) return true;           // chosen ... -> cand
  int tail = edge_tail(cand);
  if (tail >= 0 && chosen.up[tail]) return true;       // cand -> ... chosen
  return false;
}

}  // namespace detail

/// Pick insertion sites. Deterministic given seed. The reference critical
/// path is the first path of `timing` (computed on the original netlist; no
/// re-timing between picks).
///
/// NoncriticalSpread: uniform picks over gate-input edges and output taps
/// that avoid the reference path, re-verified after each pick so no two
/// sites share a PI->PO path. When the circuit cannot supply n disjoint
/// sites, the remaining picks minimize added sharing and the plan reports
/// the violation count.
/// CriticalStacked: n sites along the reference path itself.
/// LevelAt: one site at the given gate distance from the output along the
/// reference path (level 1 = the output tap).
inline PlacementPlan plan_placement(const Netlist& n, const PathReport& timing,
                                    PlacementStrategy strategy, int n_blocks, std::uint64_t seed,
                                    std::optional<int> level = std::nullopt) {
  const std::string stage = "placement";
  if (n_blocks < 1) throw Error(stage, "n_blocks must be >= 1");
  if (timing.paths.empty()) throw Error(stage, "timing report has no paths");

  PlacementPlan plan;
  plan.strategy = strategy;
  plan.n_blocks = n_blocks;
  plan.seed = seed;
  plan.level = level;
  plan.critical_path = timing.paths.front().nets;

  detail::PathIndex ref(n, plan.critical_path);
  LevelMap levels = levelize(n);

  auto make_site = [&](const detail::Edge& e) {
    Site s;
    s.driver = n.net_name(e.driver);
    s.sink = e.sink >= 0 ? n.net_name(e.sink) : "";
    s.pin = e.pin;
    s.to_output = e.to_output;
    s.on_critical = ref.edge_on_path(e);
    s.level_from_output =
        e.to_output ? 1
                    : (levels.output_distance[e.sink] == LevelMap::kUnreachable
                           ? 0
                           : levels.output_distance[e.sink] + 1);
    return s;
  };

  if (strategy == PlacementStrategy::CriticalStacked ||
      strategy == PlacementStrategy::LevelAt) {
    // Edges along the reference path, input side first; the tap comes last.
    std::vector<detail::Edge> path_edges;
    const auto& nets = ref.nets;
    for (std::size_t i = 0; i + 1 < nets.size(); ++i) {
      detail::Edge e;
      e.driver = nets[i];
      e.sink = nets[i + 1];
      const auto& fin = n.fanin_ids(e.sink);
      e.pin = static_cast<int>(std::find(fin.begin(), fin.end(), e.driver) - fin.begin());
      path_edges.push_back(e);
    }
    {
      detail::Edge tap;
      tap.driver = nets.back();
      tap.to_output = true;
      const auto& pos = n.primary_outputs();
      tap.pin = static_cast<int>(
          std::find(pos.begin(), pos.end(), n.net_name(tap.driver)) - pos.begin());
      if (tap.pin == static_cast<int>(pos.size()))
        throw Error(stage, "reference path does not end at a primary output");
      path_edges.push_back(tap);
    }
    int n_edges = static_cast<int>(path_edges.size());

    if (strategy == PlacementStrategy::LevelAt) {
      if (!level) throw Error(stage, "level strategy requires a level");
      if (n_blocks != 1) throw Error(stage, "level strategy places a single site");
      if (*level < 1 || *level > n_edges)
        throw Error(stage, "level " + std::to_string(*level) + " exceeds path length (max " +
                               std::to_string(n_edges) + ")");
      // Level 1 is the tap (last edge); level L sits L-1 gates before it.
      plan.sites.push_back(make_site(path_edges[n_edges - *level]));
      return plan;
    }

    std::mt19937_64 rng(seed);
    std::vector<int> picks;
    if (n_blocks <= n_edges) {
      std::vector<int> idx(n_edges);
      for (int i = 0; i < n_edges; ++i) idx[i] = i;
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(n_blocks);
      std::sort(idx.begin(), idx.end());
      picks = idx;
    } else {
      for (int i = 0; i < n_blocks; ++i) picks.push_back(i % n_edges);
      std::sort(picks.begin(), picks.end());
    }
    for (int i : picks) plan.sites.push_back(make_site(path_edges[i]));
    return plan;
  }

  // NoncriticalSpread: all off-path edges whose sink still reaches an output.
  LevelMap lm = levels;
  std::vector<detail::Edge> eligible;
  for (int id = 0; id < n.n_nets(); ++id) {
    if (!n.is_gate(id)) continue;
    if (lm.output_distance[id] == LevelMap::kUnreachable) continue;  // dangling cone
    const auto& fin = n.fanin_ids(id);
    for (int pin = 0; pin < static_cast<int>(fin.size()); ++pin) {
      detail::Edge e;
      e.driver = fin[pin];
      e.sink = id;
      e.pin = pin;
      if (!ref.edge_on_path(e)) eligible.push_back(e);
    }
  }
  for (int k = 0; k < n.n_pos(); ++k) {
    detail::Edge tap;
    tap.driver = n.po_ids()[k];
    if (!n.is_gate(tap.driver)) continue;  // cannot splice a PI-to-PO wire-through
    tap.to_output = true;
    tap.pin = k;
    if (!ref.edge_on_path(tap)) eligible.push_back(tap);
  }
  std::sort(eligible.begin(), eligible.end(),
            [&](const detail::Edge& a, const detail::Edge& b) { return detail::edge_order(n, a, b); });

  if (static_cast<int>(eligible.size()) < n_blocks)
    throw Error(stage, "insufficient eligible sites: found " + std::to_string(eligible.size()) +
                           ", need " + std::to_string(n_blocks));

  std::mt19937_64 rng(seed);
  std::vector<detail::Edge> chosen;
  std::vector<detail::SiteClosure> closures;
  std::vector<detail::Edge> rejected;
  std::vector<detail::Edge> pool = eligible;
  while (static_cast<int>(chosen.size()) < n_blocks && !pool.empty()) {
    std::size_t i = std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng);
    detail::Edge cand = pool[i];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
    bool disjoint = true;
    for (const auto& cl : closures)
      if (detail::shares_path(cl, cand)) {
        disjoint = false;
        break;
      }
    if (disjoint) {
      closures.push_back(detail::closure_of(n, cand));
      chosen.push_back(cand);
    } else {
      rejected.push_back(cand);
    }
  }

  // Fallback for small circuits: admit the least-sharing leftovers.
  while (static_cast<int>(chosen.size()) < n_blocks) {
    int best = -1, best_viol = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < rejected.size(); ++i) {
      int viol = 0;
      for (const auto& cl : closures)
        if (detail::shares_path(cl, rejected[i])) ++viol;
      if (viol < best_viol) {
        best_viol = viol;
        best = static_cast<int>(i);
      }
    }
    detail::Edge pick = rejected[static_cast<std::size_t>(best)];
    rejected.erase(rejected.begin() + best);
    plan.spread_violations += best_viol;
    closures.push_back(detail::closure_of(n, pick));
    chosen.push_back(pick);
  }

  std::sort(chosen.begin(), chosen.end(),
            [&](const detail::Edge& a, const detail::Edge& b) { return detail::edge_order(n, a, b); });
  for (const auto& e : chosen) plan.sites.push_back(make_site(e));
  return plan;
}

struct InsertResult {
  Netlist netlist;
  std::vector<std::string> block_ids;  // key-bit order
};

/// Splice one CAMO gate per site. Gate and net count grow by exactly the
/// number of sites; keying every block as a buffer preserves the original
/// function. Multiple sites on one edge chain in site order. Output taps
/// keep the primary-output name on the block and rename the driving gate,
/// so the PI/PO interface is unchanged.
inline InsertResult insert_blocks(const Netlist& n, const PlacementPlan& plan) {
  const std::string stage = "placement";
  std::vector<Gate> gates = n.gates();
  std::vector<std::string> pis = n.primary_inputs();
  std::vector<std::string> pos = n.primary_outputs();

  auto unique_name = [&, taken = std::set<std::string>()](std::string base) mutable {
    // taken starts empty; existing netlist names are checked directly.
    std::string name = base;
    int suffix = 0;
    while (n.has_net(name) || taken.count(name)) name = base + "_" + std::to_string(suffix++);
    taken.insert(name);
    return name;
  };

  // Stale-plan validation against the original netlist.
  for (const Site& s : plan.sites) {
    if (!n.has_net(s.driver)) throw Error(stage, "stale plan: driver net '" + s.driver + "' missing");
    if (s.to_output) {
      if (s.pin < 0 || s.pin >= n.n_pos() || n.primary_outputs()[s.pin] != s.driver)
        throw Error(stage, "stale plan: output tap for '" + s.driver + "' does not match");
      if (n.net_id(s.driver) < n.n_pis())
        throw Error(stage, "cannot splice a block between a primary input and a primary output");
    } else {
      if (!n.has_net(s.sink) || !n.is_gate(n.net_id(s.sink)))
        throw Error(stage, "stale plan: sink gate '" + s.sink + "' missing");
      const Gate& g = n.gate(n.net_id(s.sink));
      if (s.pin < 0 || s.pin >= static_cast<int>(g.fanins.size()) || g.fanins[s.pin] != s.driver)
        throw Error(stage, "stale plan: edge " + s.driver + " -> " + s.sink + " pin " +
                               std::to_string(s.pin) + " no longer exists");
    }
  }

  std::map<std::string, std::size_t> gate_index;  // original gate name -> index
  for (std::size_t i = 0; i < gates.size(); ++i) gate_index[gates[i].name] = i;

  // Output taps first: rename each tapped driver gate, remember the alias
  // so untapped consumers keep seeing the pre-block signal.
  std::map<std::string, std::string> alias;
  std::map<int, std::string> tap_head;  // PO index -> current chain head
  for (const Site& s : plan.sites) {
    if (!s.to_output || alias.count(s.driver)) continue;
    std::string fresh = unique_name(s.driver + "_pre");
    gates[gate_index.at(s.driver)].name = fresh;
    alias[s.driver] = fresh;
    tap_head[s.pin] = fresh;
  }
  for (Gate& g : gates)
    for (std::string& f : g.fanins)
      if (auto it = alias.find(f); it != alias.end()) f = it->second;

  std::vector<std::string> block_ids;
  std::map<std::pair<std::size_t, int>, std::string> edge_head;  // (sink index, pin)
  std::map<int, int> tap_remaining;
  for (const Site& s : plan.sites)
    if (s.to_output) ++tap_remaining[s.pin];

  int counter = 0;
  for (const Site& s : plan.sites) {
    if (s.to_output) {
      std::string head = tap_head.at(s.pin);
      bool last = --tap_remaining[s.pin] == 0;
      // The final block of a tap chain takes over the output net's name.
      std::string id = last ? s.driver : unique_name("camo" + std::to_string(counter));
      ++counter;
      gates.push_back(Gate{id, GateKind::Camo, {head}});
      tap_head[s.pin] = id;
      block_ids.push_back(id);
    } else {
      auto key = std::make_pair(gate_index.at(s.sink), s.pin);
      std::string head;
      if (auto it = edge_head.find(key); it != edge_head.end()) {
        head = it->second;
      } else {
        head = s.driver;
        if (auto al = alias.find(head); al != alias.end()) head = al->second;
      }
      std::string id = unique_name("camo" + std::to_string(counter++));
      gates.push_back(Gate{id, GateKind::Camo, {head}});
      edge_head[key] = id;
      block_ids.push_back(id);
    }
  }
  for (const auto& [key, head] : edge_head)
    gates[key.first].fanins[static_cast<std::size_t>(key.second)] = head;

  InsertResult out{Netlist::build(std::move(gates), std::move(pis), std::move(pos)),
                   std::move(block_ids)};
  return out;
}

/// Truth table (rows 00,01,10,11) of c3(NAND(c1(a), c2(b))) with the three
/// blocks programmed and read through the device model.
inline std::array<bool, 4> compose_reconfigurable(BlockMode c1, BlockMode c2, BlockMode c3,
                                                  const OperatingPoint& op = {},
                                                  const FeFetParams& params = {}) {
  if (c1 == BlockMode::Unresolved || c2 == BlockMode::Unresolved || c3 == BlockMode::Unresolved)
    throw Error("placement", "compose_reconfigurable needs resolved block modes");
  EncryptionBlock b1(params), b2(params), b3(params);
  b1.program(c1 == BlockMode::Inverter, op);
  b2.program(c2 == BlockMode::Inverter, op);
  b3.program(c3 == BlockMode::Inverter, op);
  std::array<bool, 4> table{};
  for (int row = 0; row < 4; ++row) {
    bool a = (row >> 1) & 1;
    bool b = row & 1;
    bool nand_out = !(b1.output(a, op) && b2.output(b, op));
    table[static_cast<std::size_t>(row)] = b3.output(nand_out, op);
  }
  return table;
}

/// Transistor and area cost of inserted blocks, with the comparison
/// constants reported alongside.
struct CostReport {
  int n_blocks = 0;
  int transistors = 0;
  double area_um2 = 0.0;

  static constexpr int kTransistorsPerBlock = 4;
  static constexpr double kBlockAreaUm2 = 1.09;
  static constexpr int kTvdReferenceTransistors = 30;
  static constexpr int kNandWith1AibTransistors = 8;
  static constexpr int kNandWith3AibTransistors = 16;
};

inline CostReport cost_report(int n_blocks) {
  if (n_blocks < 0) throw Error("placement", "n_blocks must be >= 0");
  CostReport r;
  r.n_blocks = n_blocks;
  r.transistors = CostReport::kTransistorsPerBlock * n_blocks;
  r.area_um2 = CostReport::kBlockAreaUm2 * n_blocks;
  return r;
}

}  // namespace camoforge

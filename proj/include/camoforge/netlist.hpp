/* camoforge: gate-level netlist obfuscation toolkit
 *
 * netlist.hpp -- combinational gate-level netlist model (DAG of named nets),
 * levelization and path counting.
 */
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace camoforge {

/// Runtime error tagged with the pipeline stage that raised it.
class Error : public std::runtime_error {
public:
  Error(std::string stage, std::string message)
      : std::runtime_error(stage + ": " + message),
        stage_(std::move(stage)),
        message_(std::move(message)) {}

  const std::string& stage() const noexcept { return stage_; }
  const std::string& message() const noexcept { return message_; }

private:
  std::string stage_;
  std::string message_;
};

enum class GateKind : std::uint8_t {
  Input,  // primary input marker node, no fanins
  And,
  Nand,
  Or,
  Nor,
  Xor,
  Xnor,
  Not,
  Buff,
  Camo  // keyed buffer/inverter block placeholder; mode lives in the key file
};

inline const char* to_string(GateKind k) {
  switch (k) {
    case GateKind::Input: return "INPUT";
    case GateKind::And: return "AND";
    case GateKind::Nand: return "NAND";
    case GateKind::Or: return "OR";
    case GateKind::Nor: return "NOR";
    case GateKind::Xor: return "XOR";
    case GateKind::Xnor: return "XNOR";
    case GateKind::Not: return "NOT";
    case GateKind::Buff: return "BUFF";
    case GateKind::Camo: return "CAMO";
  }
  return "?";
}

inline std::optional<GateKind> gate_kind_from_string(std::string_view s) {
  std::string u(s);
  for (char& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u == "AND") return GateKind::And;
  if (u == "NAND") return GateKind::Nand;
  if (u == "OR") return GateKind::Or;
  if (u == "NOR") return GateKind::Nor;
  if (u == "XOR") return GateKind::Xor;
  if (u == "XNOR") return GateKind::Xnor;
  if (u == "NOT" || u == "INV") return GateKind::Not;
  if (u == "BUFF" || u == "BUF") return GateKind::Buff;
  if (u == "CAMO") return GateKind::Camo;
  return std::nullopt;
}

/// Allowed fanin counts per kind. ISCAS85 uses up to 9 inputs on the
/// AND/NAND/OR/NOR family; XOR/XNOR are kept 2-input to match the corpus.
inline std::pair<int, int> arity_range(GateKind k) {
  switch (k) {
    case GateKind::Input: return {0, 0};
    case GateKind::And:
    case GateKind::Nand:
    case GateKind::Or:
    case GateKind::Nor: return {2, 16};
    case GateKind::Xor:
    case GateKind::Xnor: return {2, 2};
    case GateKind::Not:
    case GateKind::Buff:
    case GateKind::Camo: return {1, 1};
  }
  return {0, 0};
}

/// One logic gate: `name` is the net it drives.
struct Gate {
  std::string name;
  GateKind kind = GateKind::Input;
  std::vector<std::string> fanins;
};

inline bool valid_net_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

/// Immutable combinational netlist. Net ids are dense: primary inputs first
/// (in declaration order), then gate output nets in declaration order.
/// Construction validates the full set of invariants (unique names, resolved
/// fanins, arity, acyclicity, existing outputs); dangling nets that never
/// reach a primary output are accepted with a warning.
class Netlist {
public:
  Netlist() = default;

  static Netlist build(std::vector<Gate> gates, std::vector<std::string> primary_inputs,
                       std::vector<std::string> primary_outputs) {
    Netlist n;
    n.pis_ = std::move(primary_inputs);
    n.pos_ = std::move(primary_outputs);
    n.gates_ = std::move(gates);
    n.validate();
    return n;
  }

  const std::vector<std::string>& primary_inputs() const { return pis_; }
  const std::vector<std::string>& primary_outputs() const { return pos_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  int n_pis() const { return static_cast<int>(pis_.size()); }
  int n_pos() const { return static_cast<int>(pos_.size()); }
  int n_gates() const { return static_cast<int>(gates_.size()); }
  int n_nets() const { return n_pis() + n_gates(); }

  bool has_net(std::string_view name) const { return index_.count(std::string(name)) > 0; }

  int net_id(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw Error("netlist", "unknown net: " + std::string(name));
    return it->second;
  }

  const std::string& net_name(int id) const {
    return id < n_pis() ? pis_[id] : gates_[id - n_pis()].name;
  }

  GateKind kind(int id) const {
    return id < n_pis() ? GateKind::Input : gates_[id - n_pis()].kind;
  }

  bool is_gate(int id) const { return id >= n_pis(); }

  const Gate& gate(int id) const { return gates_.at(id - n_pis()); }

  /// Fanin net ids of a node (empty for primary inputs).
  const std::vector<int>& fanin_ids(int id) const { return fanin_ids_[id]; }

  /// Gate node ids that consume this net.
  const std::vector<int>& consumer_ids(int id) const { return consumer_ids_[id]; }

  /// Net ids of the primary outputs, in declaration order.
  const std::vector<int>& po_ids() const { return po_ids_; }

  bool is_po_net(int id) const { return is_po_[id]; }

  /// All node ids in a topological order (every fanin precedes its gate).
  /// Deterministic: ready nodes are released in declaration order.
  const std::vector<int>& topo_order() const { return topo_; }

  /// CAMO gate net ids in declaration order. Key bits align to this order.
  const std::vector<int>& camo_ids() const { return camo_ids_; }
  int n_camo() const { return static_cast<int>(camo_ids_.size()); }

private:
  void validate() {
    const std::string stage = "netlist";
    index_.clear();
    index_.reserve(pis_.size() + gates_.size());
    for (std::size_t i = 0; i < pis_.size(); ++i) {
      if (!valid_net_name(pis_[i])) throw Error(stage, "invalid net name: '" + pis_[i] + "'");
      if (!index_.emplace(pis_[i], static_cast<int>(i)).second)
        throw Error(stage, "duplicate net: " + pis_[i]);
    }
    for (std::size_t i = 0; i < gates_.size(); ++i) {
      const Gate& g = gates_[i];
      if (!valid_net_name(g.name)) throw Error(stage, "invalid net name: '" + g.name + "'");
      if (g.kind == GateKind::Input)
        throw Error(stage, "gate '" + g.name + "' cannot have kind INPUT");
      if (!index_.emplace(g.name, static_cast<int>(pis_.size() + i)).second)
        throw Error(stage, "duplicate net: " + g.name);
      auto [lo, hi] = arity_range(g.kind);
      int ar = static_cast<int>(g.fanins.size());
      if (ar < lo || ar > hi)
        throw Error(stage, "arity violation: " + std::string(to_string(g.kind)) + " gate '" +
                               g.name + "' has " + std::to_string(ar) + " fanins (expected " +
                               std::to_string(lo) + (lo == hi ? "" : ".." + std::to_string(hi)) +
                               ")");
    }

    fanin_ids_.assign(n_nets(), {});
    consumer_ids_.assign(n_nets(), {});
    for (std::size_t i = 0; i < gates_.size(); ++i) {
      int gid = static_cast<int>(pis_.size() + i);
      for (const std::string& f : gates_[i].fanins) {
        auto it = index_.find(f);
        if (it == index_.end())
          throw Error(stage, "undefined fanin '" + f + "' of gate '" + gates_[i].name + "'");
        fanin_ids_[gid].push_back(it->second);
      }
    }
    for (int id = 0; id < n_nets(); ++id)
      for (int f : fanin_ids_[id]) consumer_ids_[f].push_back(id);

    // Kahn's algorithm; smallest-id-first keeps the order deterministic.
    std::vector<int> indeg(n_nets(), 0);
    for (int id = 0; id < n_nets(); ++id) indeg[id] = static_cast<int>(fanin_ids_[id].size());
    std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
    for (int id = 0; id < n_nets(); ++id)
      if (indeg[id] == 0) ready.push(id);
    topo_.clear();
    topo_.reserve(n_nets());
    while (!ready.empty()) {
      int id = ready.top();
      ready.pop();
      topo_.push_back(id);
      for (int c : consumer_ids_[id])
        if (--indeg[c] == 0) ready.push(c);
    }
    if (static_cast<int>(topo_.size()) != n_nets()) {
      for (int id = 0; id < n_nets(); ++id)
        if (indeg[id] > 0) throw Error(stage, "cyclic netlist: net '" + net_name(id) + "' is on a cycle");
      throw Error(stage, "cyclic netlist");
    }

    is_po_.assign(n_nets(), false);
    po_ids_.clear();
    std::unordered_map<std::string, int> seen_po;
    for (const std::string& p : pos_) {
      auto it = index_.find(p);
      if (it == index_.end()) throw Error(stage, "primary output names unknown net: " + p);
      if (!seen_po.emplace(p, 1).second) throw Error(stage, "duplicate primary output: " + p);
      po_ids_.push_back(it->second);
      is_po_[it->second] = true;
    }

    camo_ids_.clear();
    for (std::size_t i = 0; i < gates_.size(); ++i)
      if (gates_[i].kind == GateKind::Camo) camo_ids_.push_back(static_cast<int>(pis_.size() + i));

    // Dangling nets: driven but never reaching a primary output. Accepted
    // with a warning; timing and placement exclude them.
    warnings_.clear();
    std::vector<bool> reaches_po(n_nets(), false);
    for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
      int id = *it;
      bool r = is_po_[id];
      for (int c : consumer_ids_[id]) r = r || reaches_po[c];
      reaches_po[id] = r;
    }
    for (int id = 0; id < n_nets(); ++id)
      if (!reaches_po[id])
        warnings_.push_back("dangling net '" + net_name(id) + "' does not reach a primary output");
  }

  std::vector<std::string> pis_;
  std::vector<std::string> pos_;
  std::vector<Gate> gates_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<int>> fanin_ids_;
  std::vector<std::vector<int>> consumer_ids_;
  std::vector<int> topo_;
  std::vector<int> po_ids_;
  std::vector<int> camo_ids_;
  std::vector<bool> is_po_;
  std::vector<std::string> warnings_;
};

/// Forward levels (max gate depth from the inputs) and output distances
/// (min gate hops to any primary output). A net driving a primary output
/// has output_distance 0; the gate driving it sits "at level 1", i.e.
/// level = output_distance + 1.
struct LevelMap {
  static constexpr int kUnreachable = -1;
  std::vector<int> forward_level;    // by net id; primary inputs are 0
  std::vector<int> output_distance;  // by net id; kUnreachable if no PO is reachable
  int max_forward_level = 0;
};

inline LevelMap levelize(const Netlist& n) {
  LevelMap m;
  m.forward_level.assign(n.n_nets(), 0);
  m.output_distance.assign(n.n_nets(), LevelMap::kUnreachable);
  for (int id : n.topo_order()) {
    int lvl = 0;
    for (int f : n.fanin_ids(id)) lvl = std::max(lvl, m.forward_level[f] + 1);
    m.forward_level[id] = n.is_gate(id) ? lvl : 0;
    m.max_forward_level = std::max(m.max_forward_level, m.forward_level[id]);
  }
  const auto& topo = n.topo_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    int id = *it;
    int best = n.is_po_net(id) ? 0 : LevelMap::kUnreachable;
    for (int c : n.consumer_ids(id)) {
      if (m.output_distance[c] != LevelMap::kUnreachable)
        best = best == LevelMap::kUnreachable ? m.output_distance[c] + 1
                                              : std::min(best, m.output_distance[c] + 1);
    }
    m.output_distance[id] = best;
  }
  return m;
}

/// Number of distinct directed gate paths between two nets (saturating at
/// UINT64_MAX). from == to counts the trivial path.
inline std::uint64_t enumerate_paths(const Netlist& n, std::string_view from, std::string_view to) {
  int src = n.net_id(from);
  int dst = n.net_id(to);
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> count(n.n_nets(), 0);
  count[dst] = 1;
  const auto& topo = n.topo_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    int id = *it;
    if (id == dst) continue;
    std::uint64_t total = 0;
    for (int c : n.consumer_ids(id)) {
      std::uint64_t add = count[c];
      total = (total > kMax - add) ? kMax : total + add;
    }
    count[id] = total;
  }
  return count[src];
}

}  // namespace camoforge

/* camoforge
 *
 * timing.hpp -- static timing analysis over an additive per-gate delay
 * model: most-critical path extraction and exact k-longest-path search
 * (best-first over partial paths with a longest-suffix bound).
 */
#pragma once

#include <algorithm>
#include <iomanip>
#include <limits>
#include <queue>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "netlist.hpp"

namespace camoforge {

/// Per-gate delays in picoseconds. Path delay is the sum of gate delays
/// along the path, multiplied by `scale`. Scale values in [0.94, 2.29]
/// match the library-calibration envelope the shipped numbers assume; any
/// positive value is accepted.
struct DelayTable {
  std::unordered_map<GateKind, double> gate_ps;
  double camo_ps = 10.0;
  double scale = 1.0;

  static constexpr double kScaleEnvelopeLo = 0.94;
  static constexpr double kScaleEnvelopeHi = 2.29;

  static DelayTable defaults() {
    DelayTable t;
    t.gate_ps = {{GateKind::And, 10.0},  {GateKind::Nand, 10.0}, {GateKind::Or, 10.0},
                 {GateKind::Nor, 10.0},  {GateKind::Xor, 10.0},  {GateKind::Xnor, 10.0},
                 {GateKind::Not, 5.0},   {GateKind::Buff, 10.0}};
    t.camo_ps = 10.0;
    t.scale = 1.0;
    return t;
  }

  bool within_calibration_envelope() const {
    return scale >= kScaleEnvelopeLo && scale <= kScaleEnvelopeHi;
  }

  void validate() const {
    for (const auto& [k, d] : gate_ps)
      if (d < 0) throw Error("timing", std::string("negative delay for ") + to_string(k));
    if (camo_ps <= 0) throw Error("timing", "camo delay must be > 0");
    if (scale <= 0) throw Error("timing", "scale must be > 0");
  }

  double delay_of(GateKind k) const {
    if (k == GateKind::Input) return 0.0;
    if (k == GateKind::Camo) return camo_ps;
    auto it = gate_ps.find(k);
    if (it == gate_ps.end())
      throw Error("timing", std::string("missing delay entry for gate kind ") + to_string(k));
    return it->second;
  }
};

/// A primary-input-to-primary-output path as a net-name sequence.
struct TimedPath {
  std::vector<std::string> nets;
  double delay_ps = 0.0;
};

struct PathReport {
  std::vector<TimedPath> paths;  // descending delay, lexicographic tie-break
  double critical_delay_ps = 0.0;
  double topk_sum_ps = 0.0;
  int k = 0;
};

namespace detail {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Longest raw (unscaled) completion delay from each net to any primary
/// output, including the net's own gate delay. -inf where no PO is reachable.
inline std::vector<double> longest_suffix(const Netlist& n, const DelayTable& t) {
  std::vector<double> suffix(n.n_nets(), kNegInf);
  const auto& topo = n.topo_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    int id = *it;
    double w = t.delay_of(n.kind(id));
    double best = n.is_po_net(id) ? 0.0 : kNegInf;
    for (int c : n.consumer_ids(id)) best = std::max(best, suffix[c]);
    if (best != kNegInf) suffix[id] = w + best;
  }
  return suffix;
}

/// Rank of each net when ordered by name; used for lexicographic tie-breaks.
inline std::vector<int> name_ranks(const Netlist& n) {
  std::vector<int> ids(n.n_nets());
  for (int i = 0; i < n.n_nets(); ++i) ids[i] = i;
  std::sort(ids.begin(), ids.end(),
            [&](int a, int b) { return n.net_name(a) < n.net_name(b); });
  std::vector<int> rank(n.n_nets());
  for (int i = 0; i < n.n_nets(); ++i) rank[ids[i]] = i;
  return rank;
}

inline bool lex_less(const std::vector<int>& a, const std::vector<int>& b,
                     const std::vector<int>& rank) {
  std::size_t m = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < m; ++i) {
    if (rank[a[i]] != rank[b[i]]) return rank[a[i]] < rank[b[i]];
  }
  return a.size() < b.size();
}

}  // namespace detail

/// The k largest-delay PI->PO paths (all of them if the circuit has fewer).
/// Exact: partial paths are expanded best-first, bounded by the longest
/// completion suffix, so the i-th emitted path is the i-th longest. Ties are
/// resolved toward the lexicographically smallest net-name sequence.
inline PathReport top_k_paths(const Netlist& n, const DelayTable& t, int k) {
  if (k < 1) throw Error("timing", "k must be >= 1");
  t.validate();
  const std::vector<double> suffix = detail::longest_suffix(n, t);
  const std::vector<int> rank = detail::name_ranks(n);

  struct Entry {
    double bound;            // raw delay of the best completion of this prefix
    double raw;              // raw delay accumulated so far (own gates included)
    bool complete;
    std::vector<int> nets;
  };
  struct Cmp {
    const std::vector<int>* rank;
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.bound != b.bound) return a.bound < b.bound;  // max-heap on bound
      return detail::lex_less(b.nets, a.nets, *rank);    // then lexicographically smallest first
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Cmp> pq(Cmp{&rank});

  for (int pi = 0; pi < n.n_pis(); ++pi) {
    if (suffix[pi] == detail::kNegInf) continue;
    pq.push(Entry{suffix[pi], 0.0, false, {pi}});
  }

  PathReport report;
  report.k = k;
  while (!pq.empty() && static_cast<int>(report.paths.size()) < k) {
    Entry e = pq.top();
    pq.pop();
    int cur = e.nets.back();
    if (e.complete) {
      TimedPath p;
      p.delay_ps = e.raw * t.scale;
      p.nets.reserve(e.nets.size());
      for (int id : e.nets) p.nets.push_back(n.net_name(id));
      report.paths.push_back(std::move(p));
      continue;
    }
    if (n.is_po_net(cur)) {
      Entry done = e;
      done.complete = true;
      done.bound = e.raw;
      pq.push(std::move(done));
    }
    for (int c : n.consumer_ids(cur)) {
      if (suffix[c] == detail::kNegInf) continue;
      Entry ext;
      ext.raw = e.raw + t.delay_of(n.kind(c));
      ext.bound = e.raw + suffix[c];
      ext.complete = false;
      ext.nets = e.nets;
      ext.nets.push_back(c);
      pq.push(std::move(ext));
    }
  }

  if (report.paths.empty())
    throw Error("timing", "netlist has no primary-input-to-primary-output path");
  report.critical_delay_ps = report.paths.front().delay_ps;
  for (const TimedPath& p : report.paths) report.topk_sum_ps += p.delay_ps;
  return report;
}

/// One maximum-delay PI->PO path (ties: lexicographically smallest sequence).
inline TimedPath critical_path(const Netlist& n, const DelayTable& t) {
  return top_k_paths(n, t, 1).paths.front();
}

/// Maximum-delay path ending at the given primary-output net.
inline TimedPath critical_path_to(const Netlist& n, const DelayTable& t, std::string_view po) {
  t.validate();
  int dst = n.net_id(po);
  if (!n.is_po_net(dst)) throw Error("timing", "net '" + std::string(po) + "' is not a primary output");
  // Longest prefix delay ending at each net, own gate included.
  std::vector<double> prefix(n.n_nets(), detail::kNegInf);
  for (int id : n.topo_order()) {
    double w = t.delay_of(n.kind(id));
    if (!n.is_gate(id)) {
      prefix[id] = 0.0;
      continue;
    }
    double best = detail::kNegInf;
    for (int f : n.fanin_ids(id)) best = std::max(best, prefix[f]);
    if (best != detail::kNegInf) prefix[id] = best + w;
  }
  if (prefix[dst] == detail::kNegInf)
    throw Error("timing", "no path from a primary input to '" + std::string(po) + "'");
  std::vector<int> rev{dst};
  int cur = dst;
  while (n.is_gate(cur)) {
    double need = prefix[cur] - t.delay_of(n.kind(cur));
    int pick = -1;
    for (int f : n.fanin_ids(cur)) {
      if (prefix[f] != need) continue;
      if (pick == -1 || n.net_name(f) < n.net_name(pick)) pick = f;
    }
    rev.push_back(pick);
    cur = pick;
  }
  TimedPath p;
  p.delay_ps = prefix[dst] * t.scale;
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) p.nets.push_back(n.net_name(*it));
  return p;
}

struct DelayOverhead {
  double critical_pct = 0.0;
  double topk_pct = 0.0;
};

/// Percentage increases of the critical delay and the top-k delay sum.
inline DelayOverhead delay_overhead(const PathReport& before, const PathReport& after) {
  if (before.k != after.k) throw Error("timing", "delay_overhead: reports have different k");
  if (before.critical_delay_ps <= 0 || before.topk_sum_ps <= 0)
    throw Error("timing", "delay_overhead: baseline delays must be > 0");
  DelayOverhead o;
  o.critical_pct = (after.critical_delay_ps - before.critical_delay_ps) / before.critical_delay_ps * 100.0;
  o.topk_pct = (after.topk_sum_ps - before.topk_sum_ps) / before.topk_sum_ps * 100.0;
  return o;
}

/// CSV export: rank, delay_ps, arrow-joined net sequence.
inline std::string path_report_csv(const PathReport& r) {
  std::ostringstream out;
  out << "rank,delay_ps,path\n";
  out << std::setprecision(10);
  for (std::size_t i = 0; i < r.paths.size(); ++i) {
    out << (i + 1) << "," << r.paths[i].delay_ps << ",";
    for (std::size_t j = 0; j < r.paths[i].nets.size(); ++j) {
      if (j) out << "->";
      out << r.paths[i].nets[j];
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace camoforge

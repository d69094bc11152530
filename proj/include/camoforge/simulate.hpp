/* camoforge
 *
 * simulate.hpp -- levelized logic evaluation of (encrypted) netlists,
 * encryption-probability estimation over vector sets, key equivalence
 * checking, and the benchmark sweep driver.
 *
 * Evaluation is 64-vector word-parallel. CAMO gates are resolved through
 * the FeFET device model: blocks are programmed from the key bits with
 * write pulses, and each block's pass/invert behaviour is read off both
 * pass-transistor branches at the read voltage (reads are nonvolatile, so
 * conduction is resolved once per run and reused across vectors).
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "device.hpp"
#include "netlist.hpp"
#include "placement.hpp"
#include "timing.hpp"

namespace camoforge {

/// Ordered key bits, one per CAMO block; 1 programs the block as an
/// inverter, 0 as a buffer. Bit i maps to the i-th CAMO gate in netlist
/// declaration order (equal to insert_blocks' block_ids order).
struct KeyBits {
  std::vector<std::uint8_t> bits;

  static KeyBits all_buffer(std::size_t n) { return KeyBits{std::vector<std::uint8_t>(n, 0)}; }
  static KeyBits all_inverter(std::size_t n) { return KeyBits{std::vector<std::uint8_t>(n, 1)}; }

  static KeyBits complement(const KeyBits& k) {
    KeyBits out = k;
    for (auto& b : out.bits) b ^= 1;
    return out;
  }

  /// Uniform random nonzero key (a wrong key must differ from the all-buffer
  /// correct key).
  static KeyBits random_wrong(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    KeyBits k;
    k.bits.assign(n, 0);
    if (n == 0) return k;
    do {
      for (auto& b : k.bits) b = static_cast<std::uint8_t>(rng() & 1);
    } while (std::all_of(k.bits.begin(), k.bits.end(), [](std::uint8_t b) { return b == 0; }));
    return k;
  }

  std::string to_string() const {
    std::string s;
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
  }

  std::size_t size() const { return bits.size(); }
};

/// Input stimulus: exhaustive over up to 24 inputs, or seeded random.
/// Vectors are exposed 64 at a time as one word per primary input
/// (lane l of word w is vector w*64+l).
class VectorSet {
public:
  static constexpr int kMaxExhaustivePis = 24;

  static VectorSet exhaustive(int width) {
    if (width < 0 || width > kMaxExhaustivePis)
      throw Error("simulate", "exhaustive vectors limited to " +
                                  std::to_string(kMaxExhaustivePis) + " inputs");
    VectorSet v;
    v.width_ = width;
    v.n_ = std::int64_t(1) << width;
    v.exhaustive_ = true;
    return v;
  }

  static VectorSet random(int width, std::int64_t n, std::uint64_t seed) {
    if (n < 1) throw Error("simulate", "vector count must be >= 1");
    VectorSet v;
    v.width_ = width;
    v.n_ = n;
    v.exhaustive_ = false;
    v.seed_ = seed;
    std::int64_t words = v.n_words();
    v.words_.assign(static_cast<std::size_t>(width), std::vector<std::uint64_t>(words, 0));
    std::mt19937_64 rng(seed);
    for (std::int64_t vec = 0; vec < n; ++vec) {
      for (int i = 0; i < width; ++i) {
        if (rng() & 1)
          v.words_[static_cast<std::size_t>(i)][vec >> 6] |= std::uint64_t(1) << (vec & 63);
      }
    }
    return v;
  }

  int width() const { return width_; }
  std::int64_t size() const { return n_; }
  bool is_exhaustive() const { return exhaustive_; }
  std::uint64_t seed() const { return seed_; }
  std::int64_t n_words() const { return (n_ + 63) >> 6; }

  /// Lanes beyond size() in the last word are zero; callers mask with
  /// valid_mask().
  std::uint64_t word(std::int64_t w, int pi) const {
    if (!exhaustive_) return words_[static_cast<std::size_t>(pi)][w];
    // Exhaustive patterns are computable: low input bits alternate inside a
    // word, higher bits are constant per word.
    static constexpr std::uint64_t kPattern[6] = {
        0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
        0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
    std::uint64_t out;
    if (pi < 6)
      out = kPattern[pi];
    else
      out = ((static_cast<std::uint64_t>(w) >> (pi - 6)) & 1) ? ~std::uint64_t(0) : 0;
    if (w == n_words() - 1) out &= valid_mask(w);
    return out;
  }

  std::uint64_t valid_mask(std::int64_t w) const {
    std::int64_t used = n_ - (w << 6);
    if (used >= 64) return ~std::uint64_t(0);
    return (std::uint64_t(1) << used) - 1;
  }

  bool bit(std::int64_t vec, int pi) const { return (word(vec >> 6, pi) >> (vec & 63)) & 1; }

private:
  int width_ = 0;
  std::int64_t n_ = 0;
  bool exhaustive_ = false;
  std::uint64_t seed_ = 0;
  std::vector<std::vector<std::uint64_t>> words_;
};

/// Prepared evaluator over one (netlist, key) pair. Blocks are programmed in
/// the constructor via device write pulses; the word path reuses the branch
/// conduction reads, the scalar path goes through EncryptionBlock::output
/// on every call.
class Evaluator {
public:
  Evaluator(const Netlist& n, const KeyBits& key, OperatingPoint op = {}, FeFetParams params = {})
      : netlist_(&n), op_(op) {
    if (key.size() != static_cast<std::size_t>(n.n_camo()))
      throw Error("simulate", "key length " + std::to_string(key.size()) +
                                  " does not match CAMO gate count " + std::to_string(n.n_camo()));
    check_operating_point(params, op);
    blocks_.reserve(key.size());
    camo_inverts_.assign(static_cast<std::size_t>(n.n_nets()), 0);
    camo_block_index_.assign(static_cast<std::size_t>(n.n_nets()), -1);
    for (std::size_t i = 0; i < key.size(); ++i) {
      EncryptionBlock b(params);
      b.program(key.bits[i] != 0, op_);
      // Resolve pass/invert by reading both branches once; valid because
      // reads never disturb the programmed state.
      bool upper_on = b.upper().conducts(op_.v_read_v);
      bool lower_on = b.lower().conducts(op_.v_read_v);
      if (upper_on == lower_on)
        throw Error("simulate", "block " + n.net_name(n.camo_ids()[i]) + " is unresolved");
      int id = n.camo_ids()[i];
      camo_inverts_[static_cast<std::size_t>(id)] = upper_on ? 1 : 0;
      camo_block_index_[static_cast<std::size_t>(id)] = static_cast<int>(i);
      blocks_.push_back(std::move(b));
    }
  }

  const Netlist& netlist() const { return *netlist_; }

  /// Evaluate one input vector (bit i feeds primary input i). CAMO gates
  /// route through the device model per call.
  std::vector<bool> eval(const std::vector<bool>& input) const {
    const Netlist& n = *netlist_;
    if (static_cast<int>(input.size()) != n.n_pis())
      throw Error("simulate", "input vector width " + std::to_string(input.size()) +
                                  " != number of primary inputs " + std::to_string(n.n_pis()));
    std::vector<std::uint8_t> value(static_cast<std::size_t>(n.n_nets()), 0);
    for (int i = 0; i < n.n_pis(); ++i) value[static_cast<std::size_t>(i)] = input[static_cast<std::size_t>(i)];
    for (int id : n.topo_order()) {
      if (!n.is_gate(id)) continue;
      const auto& fin = n.fanin_ids(id);
      bool out = false;
      switch (n.kind(id)) {
        case GateKind::And:
        case GateKind::Nand: {
          out = true;
          for (int f : fin) out = out && value[static_cast<std::size_t>(f)];
          if (n.kind(id) == GateKind::Nand) out = !out;
          break;
        }
        case GateKind::Or:
        case GateKind::Nor: {
          out = false;
          for (int f : fin) out = out || value[static_cast<std::size_t>(f)];
          if (n.kind(id) == GateKind::Nor) out = !out;
          break;
        }
        case GateKind::Xor:
        case GateKind::Xnor: {
          out = false;
          for (int f : fin) out = out != static_cast<bool>(value[static_cast<std::size_t>(f)]);
          if (n.kind(id) == GateKind::Xnor) out = !out;
          break;
        }
        case GateKind::Not:
          out = !value[static_cast<std::size_t>(fin[0])];
          break;
        case GateKind::Buff:
          out = value[static_cast<std::size_t>(fin[0])];
          break;
        case GateKind::Camo: {
          const EncryptionBlock& b = blocks_[static_cast<std::size_t>(
              camo_block_index_[static_cast<std::size_t>(id)])];
          out = b.output(value[static_cast<std::size_t>(fin[0])], op_);
          break;
        }
        case GateKind::Input:
          break;
      }
      value[static_cast<std::size_t>(id)] = out;
    }
    std::vector<bool> out;
    out.reserve(n.po_ids().size());
    for (int po : n.po_ids()) out.push_back(value[static_cast<std::size_t>(po)]);
    return out;
  }

  /// Evaluate 64 vectors at once. `pi_words[i]` feeds primary input i;
  /// `po_words` receives one word per primary output.
  void eval_words(const std::vector<std::uint64_t>& pi_words,
                  std::vector<std::uint64_t>& po_words) const {
    const Netlist& n = *netlist_;
    std::vector<std::uint64_t> value(static_cast<std::size_t>(n.n_nets()), 0);
    for (int i = 0; i < n.n_pis(); ++i) value[static_cast<std::size_t>(i)] = pi_words[static_cast<std::size_t>(i)];
    for (int id : n.topo_order()) {
      if (!n.is_gate(id)) continue;
      const auto& fin = n.fanin_ids(id);
      std::uint64_t out = 0;
      switch (n.kind(id)) {
        case GateKind::And:
        case GateKind::Nand: {
          out = ~std::uint64_t(0);
          for (int f : fin) out &= value[static_cast<std::size_t>(f)];
          if (n.kind(id) == GateKind::Nand) out = ~out;
          break;
        }
        case GateKind::Or:
        case GateKind::Nor: {
          for (int f : fin) out |= value[static_cast<std::size_t>(f)];
          if (n.kind(id) == GateKind::Nor) out = ~out;
          break;
        }
        case GateKind::Xor:
        case GateKind::Xnor: {
          for (int f : fin) out ^= value[static_cast<std::size_t>(f)];
          if (n.kind(id) == GateKind::Xnor) out = ~out;
          break;
        }
        case GateKind::Not:
          out = ~value[static_cast<std::size_t>(fin[0])];
          break;
        case GateKind::Buff:
          out = value[static_cast<std::size_t>(fin[0])];
          break;
        case GateKind::Camo:
          out = camo_inverts_[static_cast<std::size_t>(id)]
                    ? ~value[static_cast<std::size_t>(fin[0])]
                    : value[static_cast<std::size_t>(fin[0])];
          break;
        case GateKind::Input:
          break;
      }
      value[static_cast<std::size_t>(id)] = out;
    }
    po_words.resize(n.po_ids().size());
    for (std::size_t k = 0; k < n.po_ids().size(); ++k)
      po_words[k] = value[static_cast<std::size_t>(n.po_ids()[k])];
  }

private:
  const Netlist* netlist_;
  OperatingPoint op_;
  std::vector<EncryptionBlock> blocks_;
  std::vector<std::uint8_t> camo_inverts_;  // by net id
  std::vector<int> camo_block_index_;       // by net id
};

/// Single-vector evaluation with the blocks programmed per key bit.
inline std::vector<bool> eval(const Netlist& n, const KeyBits& key, const std::vector<bool>& input,
                              OperatingPoint op = {}, FeFetParams params = {}) {
  return Evaluator(n, key, op, std::move(params)).eval(input);
}

struct EncryptionResult {
  std::int64_t n_vectors = 0;
  std::int64_t n_mismatched = 0;
  double probability = 0.0;
  std::vector<std::int64_t> per_output_flip_counts;
};

namespace detail {

inline void check_same_interface(const Netlist& a, const Netlist& b) {
  if (a.primary_inputs() != b.primary_inputs() || a.primary_outputs() != b.primary_outputs())
    throw Error("simulate", "netlist interface mismatch (primary inputs/outputs differ)");
}

struct MismatchCounts {
  std::int64_t mismatched = 0;
  std::vector<std::int64_t> per_output;
  std::int64_t first_mismatch = -1;  // vector index, -1 if none
};

/// Compare the two evaluators over a word range [w_begin, w_end).
inline MismatchCounts compare_range(const Evaluator& original, const Evaluator& encrypted,
                                    const VectorSet& vectors, std::int64_t w_begin,
                                    std::int64_t w_end) {
  const Netlist& n = original.netlist();
  MismatchCounts out;
  out.per_output.assign(n.po_ids().size(), 0);
  std::vector<std::uint64_t> pi_words(static_cast<std::size_t>(n.n_pis()));
  std::vector<std::uint64_t> po_a, po_b;
  for (std::int64_t w = w_begin; w < w_end; ++w) {
    for (int i = 0; i < n.n_pis(); ++i) pi_words[static_cast<std::size_t>(i)] = vectors.word(w, i);
    original.eval_words(pi_words, po_a);
    encrypted.eval_words(pi_words, po_b);
    std::uint64_t mask = vectors.valid_mask(w);
    std::uint64_t any = 0;
    for (std::size_t k = 0; k < po_a.size(); ++k) {
      std::uint64_t diff = (po_a[k] ^ po_b[k]) & mask;
      any |= diff;
      out.per_output[k] += std::popcount(diff);
    }
    out.mismatched += std::popcount(any);
    if (any && out.first_mismatch < 0)
      out.first_mismatch = (w << 6) + std::countr_zero(any);
  }
  return out;
}

}  // namespace detail

/// Fraction of vectors on which any primary output of the (wrongly keyed)
/// encrypted netlist differs from the original. Deterministic given the
/// vector seed; independent of worker count.
inline EncryptionResult encryption_probability(const Netlist& original, const Netlist& encrypted,
                                               const KeyBits& key, const VectorSet& vectors,
                                               OperatingPoint op = {}, FeFetParams params = {},
                                               int n_workers = 0) {
  detail::check_same_interface(original, encrypted);
  Evaluator ev_orig(original, KeyBits::all_buffer(static_cast<std::size_t>(original.n_camo())), op, params);
  Evaluator ev_enc(encrypted, key, op, params);

  std::int64_t words = vectors.n_words();
  if (n_workers <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    n_workers = hw == 0 ? 1 : static_cast<int>(hw);
  }
  n_workers = static_cast<int>(std::min<std::int64_t>(n_workers, std::max<std::int64_t>(words, 1)));

  std::vector<detail::MismatchCounts> parts(static_cast<std::size_t>(n_workers));
  if (n_workers == 1) {
    parts[0] = detail::compare_range(ev_orig, ev_enc, vectors, 0, words);
  } else {
    std::vector<std::future<detail::MismatchCounts>> futures;
    std::int64_t chunk = (words + n_workers - 1) / n_workers;
    for (int t = 0; t < n_workers; ++t) {
      std::int64_t b = t * chunk;
      std::int64_t e = std::min(words, b + chunk);
      futures.push_back(std::async(std::launch::async, [&, b, e] {
        return detail::compare_range(ev_orig, ev_enc, vectors, b, e);
      }));
    }
    for (int t = 0; t < n_workers; ++t) parts[static_cast<std::size_t>(t)] = futures[static_cast<std::size_t>(t)].get();
  }

  EncryptionResult r;
  r.n_vectors = vectors.size();
  r.per_output_flip_counts.assign(original.po_ids().size(), 0);
  for (const auto& p : parts) {
    r.n_mismatched += p.mismatched;
    for (std::size_t k = 0; k < p.per_output.size(); ++k)
      r.per_output_flip_counts[k] += p.per_output[k];
  }
  r.probability = r.n_vectors ? static_cast<double>(r.n_mismatched) / static_cast<double>(r.n_vectors) : 0.0;
  return r;
}

struct EquivalenceResult {
  bool equivalent = false;
  std::int64_t counterexample_index = -1;
  std::vector<bool> counterexample;  // input assignment, one bit per PI
};

/// True iff the encrypted netlist under `key` matches the original on every
/// vector of the set; otherwise reports the first differing vector.
inline EquivalenceResult equivalence_check(const Netlist& original, const Netlist& encrypted,
                                           const KeyBits& key, const VectorSet& vectors,
                                           OperatingPoint op = {}, FeFetParams params = {}) {
  detail::check_same_interface(original, encrypted);
  Evaluator ev_orig(original, KeyBits::all_buffer(static_cast<std::size_t>(original.n_camo())), op, params);
  Evaluator ev_enc(encrypted, key, op, params);
  detail::MismatchCounts c = detail::compare_range(ev_orig, ev_enc, vectors, 0, vectors.n_words());
  EquivalenceResult r;
  r.equivalent = c.mismatched == 0;
  if (!r.equivalent) {
    r.counterexample_index = c.first_mismatch;
    for (int i = 0; i < original.n_pis(); ++i)
      r.counterexample.push_back(vectors.bit(c.first_mismatch, i));
  }
  return r;
}

enum class WrongKey : std::uint8_t { AllInvert, Complement, Random };

inline const char* to_string(WrongKey w) {
  switch (w) {
    case WrongKey::AllInvert: return "all-invert";
    case WrongKey::Complement: return "complement";
    case WrongKey::Random: return "random";
  }
  return "?";
}

inline std::optional<WrongKey> wrong_key_from_string(std::string_view s) {
  if (s == "all-invert" || s == "all_invert") return WrongKey::AllInvert;
  if (s == "complement") return WrongKey::Complement;
  if (s == "random") return WrongKey::Random;
  return std::nullopt;
}

/// The correct key is all-buffer (blocks splice onto wires), so the
/// complement convention coincides with all-invert; both are kept for the
/// record. Random draws a nonzero key from the run seed.
inline KeyBits make_wrong_key(WrongKey convention, std::size_t n_blocks, std::uint64_t seed) {
  switch (convention) {
    case WrongKey::AllInvert: return KeyBits::all_inverter(n_blocks);
    case WrongKey::Complement: return KeyBits::complement(KeyBits::all_buffer(n_blocks));
    case WrongKey::Random: return KeyBits::random_wrong(n_blocks, seed);
  }
  return KeyBits::all_inverter(n_blocks);
}

struct SweepRequest {
  PlacementStrategy strategy = PlacementStrategy::NoncriticalSpread;
  std::vector<int> n_blocks = {1, 2, 3, 4, 5, 6, 7};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::int64_t n_vectors = 10000;
  std::uint64_t vector_seed = 42;
  WrongKey wrong_key = WrongKey::AllInvert;
  int k_paths = 100;
  std::optional<int> level;  // for the level strategy
  DelayTable delays = DelayTable::defaults();
  OperatingPoint op;
  FeFetParams fefet;
};

struct SweepRow {
  std::string circuit;
  PlacementStrategy strategy = PlacementStrategy::NoncriticalSpread;
  int n_blocks = 0;
  std::int64_t seed = -1;  // -1 on aggregate rows
  bool is_mean = false;
  std::int64_t n_vectors = 0;
  double probability = 0.0;
  double critical_delay_ps = 0.0;
  double critical_pct = 0.0;
  double top100_sum_ps = 0.0;
  double top100_pct = 0.0;
};

/// One sweep cell: place, insert, key wrongly, measure probability and
/// timing overheads against the original report.
inline SweepRow sweep_run(const std::string& name, const Netlist& netlist,
                          const PathReport& base_timing, int n_blocks, std::uint64_t seed,
                          const SweepRequest& req) {
  SweepRow row;
  row.circuit = name;
  row.strategy = req.strategy;
  row.n_blocks = n_blocks;
  row.seed = static_cast<std::int64_t>(seed);
  row.n_vectors = req.n_vectors;
  if (n_blocks == 0) {
    row.critical_delay_ps = base_timing.critical_delay_ps;
    row.top100_sum_ps = base_timing.topk_sum_ps;
    return row;
  }
  PlacementPlan plan =
      plan_placement(netlist, base_timing, req.strategy, n_blocks, seed, req.level);
  InsertResult ins = insert_blocks(netlist, plan);
  KeyBits wrong = make_wrong_key(req.wrong_key, ins.block_ids.size(), seed);
  VectorSet vectors = VectorSet::random(netlist.n_pis(), req.n_vectors, req.vector_seed);
  EncryptionResult enc =
      encryption_probability(netlist, ins.netlist, wrong, vectors, req.op, req.fefet);
  PathReport after = top_k_paths(ins.netlist, req.delays, req.k_paths);
  DelayOverhead ovh = delay_overhead(base_timing, after);
  row.probability = enc.probability;
  row.critical_delay_ps = after.critical_delay_ps;
  row.critical_pct = ovh.critical_pct;
  row.top100_sum_ps = after.topk_sum_ps;
  row.top100_pct = ovh.topk_pct;
  return row;
}

/// Full sweep over circuits x block counts x seeds, with one aggregated
/// mean row appended per (circuit, n_blocks). Rows are emitted in a
/// deterministic order.
inline std::vector<SweepRow> sweep(const std::vector<std::pair<std::string, Netlist>>& circuits,
                                   const SweepRequest& req) {
  std::vector<SweepRow> rows;
  for (const auto& [name, netlist] : circuits) {
    PathReport base = top_k_paths(netlist, req.delays, req.k_paths);
    for (int nb : req.n_blocks) {
      SweepRow mean;
      mean.circuit = name;
      mean.strategy = req.strategy;
      mean.n_blocks = nb;
      mean.is_mean = true;
      mean.n_vectors = req.n_vectors;
      int count = 0;
      for (std::uint64_t seed : req.seeds) {
        SweepRow r = sweep_run(name, netlist, base, nb, seed, req);
        mean.probability += r.probability;
        mean.critical_delay_ps += r.critical_delay_ps;
        mean.critical_pct += r.critical_pct;
        mean.top100_sum_ps += r.top100_sum_ps;
        mean.top100_pct += r.top100_pct;
        ++count;
        rows.push_back(std::move(r));
      }
      if (count > 0) {
        mean.probability /= count;
        mean.critical_delay_ps /= count;
        mean.critical_pct /= count;
        mean.top100_sum_ps /= count;
        mean.top100_pct /= count;
      }
      rows.push_back(std::move(mean));
    }
  }
  return rows;
}

/// Stable CSV schema shared by the sweep command and the acceptance runs.
inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "circuit,strategy,n_blocks,seed,n_vectors,probability,critical_delay_ps,critical_pct,"
         "top100_sum_ps,top100_pct\n";
  out << std::setprecision(10);
  for (const SweepRow& r : rows) {
    out << r.circuit << "," << to_string(r.strategy) << "," << r.n_blocks << ",";
    if (r.is_mean)
      out << "mean";
    else
      out << r.seed;
    out << "," << r.n_vectors << "," << r.probability << "," << r.critical_delay_ps << ","
        << r.critical_pct << "," << r.top100_sum_ps << "," << r.top100_pct << "\n";
  }
  return out.str();
}

struct LevelSweepRow {
  int level = 0;
  std::string driver;
  double probability = 0.0;     // whole-vector miscompare probability
  double po_flip_probability = 0.0;  // flip rate of the reference path's output
};

/// Walk a single inverter block from the output end of `path` toward its
/// input, one level at a time, and record the encryption probability at
/// each level.
inline std::vector<LevelSweepRow> level_sweep(const Netlist& netlist, const TimedPath& path,
                                              const VectorSet& vectors, OperatingPoint op = {},
                                              FeFetParams params = {}) {
  PathReport ref;
  ref.paths.push_back(path);
  ref.critical_delay_ps = path.delay_ps;
  ref.topk_sum_ps = path.delay_ps;
  ref.k = 1;
  int max_level = static_cast<int>(path.nets.size());  // gate edges + output tap
  std::vector<LevelSweepRow> rows;
  // The reference output's index, for the per-output flip column.
  std::size_t po_index = 0;
  for (std::size_t k = 0; k < netlist.primary_outputs().size(); ++k)
    if (netlist.primary_outputs()[k] == path.nets.back()) po_index = k;
  for (int level = 1; level <= max_level; ++level) {
    PlacementPlan plan = plan_placement(netlist, ref, PlacementStrategy::LevelAt, 1,
                                        /*seed=*/0, level);
    InsertResult ins = insert_blocks(netlist, plan);
    EncryptionResult enc = encryption_probability(netlist, ins.netlist,
                                                  KeyBits::all_inverter(1), vectors, op, params);
    LevelSweepRow row;
    row.level = level;
    row.driver = plan.sites.front().driver;
    row.probability = enc.probability;
    row.po_flip_probability =
        static_cast<double>(enc.per_output_flip_counts[po_index]) / static_cast<double>(enc.n_vectors);
    rows.push_back(row);
  }
  return rows;
}

inline std::string level_sweep_csv(const std::string& circuit, const std::vector<LevelSweepRow>& rows) {
  std::ostringstream out;
  out << "circuit,level,driver,probability,po_flip_probability\n";
  out << std::setprecision(10);
  for (const LevelSweepRow& r : rows)
    out << circuit << "," << r.level << "," << r.driver << "," << r.probability << ","
        << r.po_flip_probability << "\n";
  return out.str();
}

}  // namespace camoforge

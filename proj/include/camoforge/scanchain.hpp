/* camoforge
 *
 * scanchain.hpp -- key distribution through reused scan flipflops and the
 * FeFET programming protocols: the two-step scheme (erase everything to
 * HVT, then selectively write LVT under scan-gated selectors) and the
 * one-step alternative that needs negative-swing scan outputs. Runs record
 * an event trace of clocks, line biases and device state transitions.
 */
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "device.hpp"
#include "netlist.hpp"
#include "simulate.hpp"

namespace camoforge {

/// One scan flipflop; q_bar mirrors !q after every clock.
struct ScanCell {
  bool q = false;
  bool q_bar = true;
  std::string attached_block;
};

struct ScanChain {
  std::vector<ScanCell> cells;
  // One-step programming needs flipflops whose logic-zero scan output is
  // biased at a negative voltage.
  bool negative_zero_bias = false;
};

inline ScanChain make_chain(const std::vector<std::string>& block_ids,
                            bool negative_zero_bias = false) {
  ScanChain c;
  c.negative_zero_bias = negative_zero_bias;
  for (const std::string& id : block_ids) c.cells.push_back(ScanCell{false, true, id});
  return c;
}

/// Serial scan shift. The key is streamed last-bit-first, so after a full
/// load (n_clocks == chain length) cell i holds bit i; after k clocks the
/// first k bits sit in the first k cells. Zero clocks leave the chain
/// untouched.
inline void shift_key(ScanChain& chain, const KeyBits& key, int n_clocks) {
  if (n_clocks < 0) throw Error("scanchain", "clock count must be >= 0");
  if (static_cast<int>(key.size()) < n_clocks)
    throw Error("scanchain", "key has " + std::to_string(key.size()) + " bits, need at least " +
                                 std::to_string(n_clocks));
  for (int clk = 0; clk < n_clocks; ++clk) {
    bool in_bit = key.bits[static_cast<std::size_t>(n_clocks - 1 - clk)] != 0;
    for (std::size_t i = chain.cells.size(); i-- > 1;) {
      chain.cells[i].q = chain.cells[i - 1].q;
      chain.cells[i].q_bar = !chain.cells[i].q;
    }
    if (!chain.cells.empty()) {
      chain.cells[0].q = in_bit;
      chain.cells[0].q_bar = !in_bit;
    }
  }
}

enum class Phase : std::uint8_t { Shift, ProgStep1, ProgStep2, ProgOneStep, Logic };

inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::Shift: return "SHIFT";
    case Phase::ProgStep1: return "PROG_STEP1";
    case Phase::ProgStep2: return "PROG_STEP2";
    case Phase::ProgOneStep: return "PROG_ONESTEP";
    case Phase::Logic: return "LOGIC";
  }
  return "?";
}

/// Line bias per phase. The prose fixes the roles (write rails on L1/L2,
/// selector enables on L3..L5); the numeric values below are the shipped
/// defaults and are configurable.
using LineVoltages = std::map<std::string, double>;

inline LineVoltages default_bias(Phase p, const OperatingPoint& op) {
  switch (p) {
    case Phase::Shift:
      return {{"L1", 0}, {"L2", 0}, {"L3", 0}, {"L4", 0}, {"L5", 0}};
    case Phase::ProgStep1:  // erase: negative write rails, selectors forced on via L3
      return {{"L1", -op.v_write_v}, {"L2", -op.v_write_v}, {"L3", op.v_write_v}, {"L4", 0}, {"L5", 0}};
    case Phase::ProgStep2:  // selective write: positive rails, scan-gated enables
      return {{"L1", op.v_write_v}, {"L2", op.v_write_v}, {"L3", 0},
              {"L4", op.v_write_v}, {"L5", op.v_write_v}};
    case Phase::ProgOneStep:  // complementary rail pairs L1&L4 / L2&L3
      return {{"L1", op.v_write_v}, {"L2", -op.v_write_v}, {"L3", op.v_write_v},
              {"L4", -op.v_write_v}, {"L5", 0}};
    case Phase::Logic:
      return {{"L1", op.v_read_v}, {"L2", op.v_read_v}, {"L3", 0},
              {"L4", op.v_read_v}, {"L5", op.v_read_v}};
  }
  return {};
}

struct TraceEvent {
  double t_ns = 0.0;
  std::string signal;
  std::variant<double, std::string> value;
};

struct PhaseSpan {
  Phase phase = Phase::Shift;
  double t_start_ns = 0.0;
  double t_end_ns = 0.0;
  LineVoltages lines;
};

struct EventTrace {
  std::vector<PhaseSpan> phases;
  std::vector<TraceEvent> events;
};

namespace detail {

struct TraceRecorder {
  EventTrace* trace = nullptr;
  double now_ns = 0.0;

  void begin_phase(Phase p, double duration_ns, const LineVoltages& lines) {
    if (!trace) {
      now_ns += duration_ns;
      return;
    }
    PhaseSpan span{p, now_ns, now_ns + duration_ns, lines};
    for (const auto& [line, volts] : lines)
      trace->events.push_back(TraceEvent{now_ns, line, volts});
    trace->phases.push_back(std::move(span));
    now_ns += duration_ns;
  }

  void event(double t_ns, const std::string& signal, std::variant<double, std::string> value) {
    if (trace) trace->events.push_back(TraceEvent{t_ns, signal, std::move(value)});
  }
};

inline void require_sizes(const ScanChain& chain, const std::vector<EncryptionBlock>& blocks) {
  if (chain.cells.size() != blocks.size())
    throw Error("scanchain", "chain has " + std::to_string(chain.cells.size()) +
                                 " cells but " + std::to_string(blocks.size()) + " blocks");
}

inline std::string block_name(const ScanChain& chain, std::size_t i) {
  const std::string& id = chain.cells[i].attached_block;
  return id.empty() ? "block" + std::to_string(i) : id;
}

inline void pulse_checked(FeFetDevice& dev, double amplitude_v, double width_ns,
                          VthState expect, const std::string& block, const char* leg) {
  dev.apply_pulse(amplitude_v, width_ns);
  if (dev.state() != expect)
    throw Error("scanchain", "programming failure at block '" + block + "': " + leg +
                                 " did not reach " + to_string(expect) +
                                 " (write pulse below the switching boundary)");
}

}  // namespace detail

/// F1 is the upper / inverted-input branch device, F2 the lower / true
/// branch, so a scan output of 1 programs (F1=LVT, F2=HVT): inverter mode.
inline FeFetDevice& block_f1(EncryptionBlock& b) { return b.upper(); }
inline FeFetDevice& block_f2(EncryptionBlock& b) { return b.lower(); }

/// Step 1 of the two-step protocol: every FeFET is erased to HVT with the
/// negative write rails while the selectors are forced on. Key-independent.
inline void program_step1_erase(const ScanChain& chain, std::vector<EncryptionBlock>& blocks,
                                const OperatingPoint& op) {
  detail::require_sizes(chain, blocks);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string name = detail::block_name(chain, i);
    detail::pulse_checked(block_f1(blocks[i]), -op.v_write_v, op.t_write_ns, VthState::Hvt, name, "F1");
    detail::pulse_checked(block_f2(blocks[i]), -op.v_write_v, op.t_write_ns, VthState::Hvt, name, "F2");
  }
}

/// Step 2: positive rails, selectors gated by the scan outputs. S_out=1
/// turns the F1 selector on, writing F1 to LVT while F2 keeps its HVT
/// state; S_out=0 does the complement.
inline void program_step2_write(const ScanChain& chain, std::vector<EncryptionBlock>& blocks,
                                const OperatingPoint& op) {
  detail::require_sizes(chain, blocks);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string name = detail::block_name(chain, i);
    if (chain.cells[i].q)
      detail::pulse_checked(block_f1(blocks[i]), op.v_write_v, op.t_write_ns, VthState::Lvt, name, "F1");
    else
      detail::pulse_checked(block_f2(blocks[i]), op.v_write_v, op.t_write_ns, VthState::Lvt, name, "F2");
  }
}

/// Two-step programming: erase-all then selective write. Every block ends
/// in complementary states matching the loaded key bits.
inline void program_two_step(const ScanChain& chain, std::vector<EncryptionBlock>& blocks,
                             const OperatingPoint& op) {
  program_step1_erase(chain, blocks, op);
  program_step2_write(chain, blocks, op);
}

/// One-step programming: scan-gated selector pairs route complementary
/// write rails to F1/F2 simultaneously. Needs negative-swing scan cells.
/// Final states match program_two_step for the same key.
inline void program_one_step(const ScanChain& chain, std::vector<EncryptionBlock>& blocks,
                             const OperatingPoint& op) {
  if (!chain.negative_zero_bias)
    throw Error("scanchain",
                "one-step programming requires scan cells with negative-swing zero outputs");
  detail::require_sizes(chain, blocks);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string name = detail::block_name(chain, i);
    bool bit = chain.cells[i].q;
    detail::pulse_checked(block_f1(blocks[i]), bit ? op.v_write_v : -op.v_write_v, op.t_write_ns,
                          bit ? VthState::Lvt : VthState::Hvt, name, "F1");
    detail::pulse_checked(block_f2(blocks[i]), bit ? -op.v_write_v : op.v_write_v, op.t_write_ns,
                          bit ? VthState::Hvt : VthState::Lvt, name, "F2");
  }
}

/// A full shift + program + logic-mode run with an event trace. The chain
/// and blocks are owned by the run; programming can be repeated with a new
/// key (run-time reconfiguration).
class ProgrammingRun {
public:
  ProgrammingRun(ScanChain chain, std::vector<EncryptionBlock> blocks, OperatingPoint op = {},
                 double scan_clk_period_ns = 10.0)
      : chain_(std::move(chain)), blocks_(std::move(blocks)), op_(op),
        clk_period_ns_(scan_clk_period_ns) {
    detail::require_sizes(chain_, blocks_);
    rec_.trace = &trace_;
  }

  ProgrammingRun(const ProgrammingRun&) = delete;
  ProgrammingRun& operator=(const ProgrammingRun&) = delete;

  /// SHIFT phase: full serial load, one clock per cell.
  void shift(const KeyBits& key) {
    int n = static_cast<int>(chain_.cells.size());
    if (static_cast<int>(key.size()) < n)
      throw Error("scanchain", "key has " + std::to_string(key.size()) +
                                   " bits, need at least " + std::to_string(n));
    double t0 = rec_.now_ns;
    rec_.begin_phase(Phase::Shift, clk_period_ns_ * n, default_bias(Phase::Shift, op_));
    for (int clk = 0; clk < n; ++clk) {
      double t = t0 + clk_period_ns_ * (clk + 1);
      bool in_bit = key.bits[static_cast<std::size_t>(n - 1 - clk)] != 0;
      rec_.event(t, "s_clk", 1.0);
      rec_.event(t, "s_in", in_bit ? 1.0 : 0.0);
    }
    shift_key(chain_, key, n);
    for (std::size_t i = 0; i < chain_.cells.size(); ++i)
      rec_.event(rec_.now_ns, "s_out[" + std::to_string(i) + "]", chain_.cells[i].q ? 1.0 : 0.0);
  }

  void program_two_step() {
    run_phase(Phase::ProgStep1, [&] { program_step1_erase(chain_, blocks_, op_); });
    run_phase(Phase::ProgStep2, [&] { program_step2_write(chain_, blocks_, op_); });
  }

  void program_one_step() {
    run_phase(Phase::ProgOneStep, [&] { camoforge::program_one_step(chain_, blocks_, op_); });
  }

  /// LOGIC phase: read voltages on the write rails and selector lines.
  void enter_logic_mode() {
    rec_.begin_phase(Phase::Logic, clk_period_ns_, default_bias(Phase::Logic, op_));
  }

  const EventTrace& trace() const { return trace_; }
  const ScanChain& chain() const { return chain_; }
  const std::vector<EncryptionBlock>& blocks() const { return blocks_; }
  std::vector<EncryptionBlock>& blocks() { return blocks_; }

  std::vector<BlockMode> modes() const {
    std::vector<BlockMode> m;
    m.reserve(blocks_.size());
    for (const auto& b : blocks_) m.push_back(b.mode());
    return m;
  }

private:
  template <typename Body>
  void run_phase(Phase p, Body body) {
    std::vector<std::pair<VthState, VthState>> before;
    before.reserve(blocks_.size());
    for (const auto& b : blocks_) before.emplace_back(b.upper().state(), b.lower().state());
    double t0 = rec_.now_ns;
    rec_.begin_phase(p, op_.t_write_ns, default_bias(p, op_));
    body();
    // Transitions land at the end of the write pulse, after the biases.
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      const std::string name = detail::block_name(chain_, i);
      if (blocks_[i].upper().state() != before[i].first)
        rec_.event(t0 + op_.t_write_ns, name + ".F1", std::string(to_string(blocks_[i].upper().state())));
      if (blocks_[i].lower().state() != before[i].second)
        rec_.event(t0 + op_.t_write_ns, name + ".F2", std::string(to_string(blocks_[i].lower().state())));
    }
  }

  ScanChain chain_;
  std::vector<EncryptionBlock> blocks_;
  OperatingPoint op_;
  double clk_period_ns_;
  EventTrace trace_;
  detail::TraceRecorder rec_;
};

}  // namespace camoforge

/* camoforge
 *
 * device.hpp -- behavioral FeFET model: nonvolatile threshold state with a
 * write-pulse switching boundary, read-voltage conduction, the two-FeFET
 * buffer/inverter encryption block, and threshold-variation Monte Carlo.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "netlist.hpp"  // Error

namespace camoforge {

enum class VthState : std::uint8_t { Unprogrammed, Lvt, Hvt };

inline const char* to_string(VthState s) {
  switch (s) {
    case VthState::Unprogrammed: return "UNPROGRAMMED";
    case VthState::Lvt: return "LVT";
    case VthState::Hvt: return "HVT";
  }
  return "?";
}

/// One point of the polarization-switching boundary: a pulse at or above
/// `amplitude_v` switches the state if it is at least `min_width_ns` wide.
struct SwitchingPoint {
  double amplitude_v = 0.0;
  double min_width_ns = 0.0;
};

/// Static FeFET parameters. Defaults: 1.2 V memory window (0.5/1.7 V
/// thresholds) bracketing the 1.1 V read voltage, and a step boundary
/// anchored at (4 V, 20 ns); the lower-amplitude entries are placeholders,
/// see the device config docs.
struct FeFetParams {
  double vth_low_v = 0.5;
  double vth_high_v = 1.7;
  std::vector<SwitchingPoint> boundary = {{4.0, 20.0}, {3.5, 200.0}, {3.0, 2000.0}};

  double memory_window_v() const { return vth_high_v - vth_low_v; }

  void validate() const {
    if (memory_window_v() <= 0) throw Error("device", "memory window must be > 0");
    for (std::size_t i = 0; i + 1 < boundary.size(); ++i) {
      if (boundary[i].amplitude_v <= boundary[i + 1].amplitude_v)
        throw Error("device", "switching boundary must be sorted by descending amplitude");
      if (boundary[i].min_width_ns >= boundary[i + 1].min_width_ns)
        throw Error("device", "switching boundary min_width must decrease as amplitude increases");
    }
  }
};

/// Nonvolatile threshold-programmable transistor. Reading never mutates
/// state; programming pulses below the switching boundary are silent no-ops.
class FeFetDevice {
public:
  explicit FeFetDevice(FeFetParams params = {}, VthState initial = VthState::Unprogrammed)
      : params_(std::move(params)), state_(initial) {
    params_.validate();
  }

  VthState state() const { return state_; }
  const FeFetParams& params() const { return params_; }

  /// Apply a gate write pulse. Positive amplitudes at or above the step
  /// boundary set LVT, negative ones set HVT; anything below leaves the
  /// state unchanged.
  void apply_pulse(double amplitude_v, double width_ns) {
    if (width_ns <= 0) throw Error("device", "pulse width must be > 0");
    if (!switches(std::fabs(amplitude_v), width_ns)) return;
    state_ = amplitude_v > 0 ? VthState::Lvt : VthState::Hvt;
  }

  /// Current threshold under the programmed state.
  double threshold_v() const {
    switch (state_) {
      case VthState::Lvt: return params_.vth_low_v;
      case VthState::Hvt: return params_.vth_high_v;
      default: throw Error("device", "threshold of an unprogrammed device is indeterminate");
    }
  }

  /// True iff a gate voltage above the current threshold turns the channel on.
  bool conducts(double v_gate_v) const { return v_gate_v > threshold_v(); }

private:
  bool switches(double abs_amplitude_v, double width_ns) const {
    for (const SwitchingPoint& p : params_.boundary) {
      if (abs_amplitude_v >= p.amplitude_v) return width_ns >= p.min_width_ns;
    }
    return false;
  }

  FeFetParams params_;
  VthState state_;
};

/// Bias points for programming and logic-mode operation.
struct OperatingPoint {
  double v_read_v = 1.1;
  double v_in_high_v = 0.8;
  double v_write_v = 4.0;
  double t_write_ns = 500.0;
};

/// A usable operating point must read between the two thresholds. A write
/// voltage below the switching boundary is representable; it surfaces as a
/// programming failure when actually used.
inline void check_operating_point(const FeFetParams& params, const OperatingPoint& op) {
  if (!(params.vth_low_v < op.v_read_v && op.v_read_v < params.vth_high_v))
    throw Error("device", "read voltage must lie strictly between vth_low and vth_high");
}

enum class BlockMode : std::uint8_t { Buffer, Inverter, Unresolved };

inline const char* to_string(BlockMode m) {
  switch (m) {
    case BlockMode::Buffer: return "buffer";
    case BlockMode::Inverter: return "inverter";
    case BlockMode::Unresolved: return "unresolved";
  }
  return "?";
}

/// Two complementary FeFET pass transistors around an inverter. The upper
/// device (T1/F1) gates the inverted-input branch, the lower one (T2/F2)
/// the true-input branch, so upper-conducting means inverter behaviour.
class EncryptionBlock {
public:
  explicit EncryptionBlock(FeFetParams params = {})
      : upper_(params), lower_(std::move(params)) {}

  FeFetDevice& upper() { return upper_; }
  FeFetDevice& lower() { return lower_; }
  const FeFetDevice& upper() const { return upper_; }
  const FeFetDevice& lower() const { return lower_; }

  /// Derived mode; evaluation goes through output(), not this.
  BlockMode mode() const {
    if (upper_.state() == VthState::Hvt && lower_.state() == VthState::Lvt)
      return BlockMode::Buffer;
    if (upper_.state() == VthState::Lvt && lower_.state() == VthState::Hvt)
      return BlockMode::Inverter;
    return BlockMode::Unresolved;
  }

  /// Resolve the output by reading both pass transistors at the read
  /// voltage: the conducting branch drives the output. Exactly one branch
  /// must conduct, otherwise the output floats (or is contended).
  bool output(bool input, const OperatingPoint& op) const {
    bool upper_on = upper_.conducts(op.v_read_v);
    bool lower_on = lower_.conducts(op.v_read_v);
    if (upper_on == lower_on)
      throw Error("device", upper_on ? "contended block output: both branches conduct"
                                     : "floating block output: no branch conducts");
    return lower_on ? input : !input;
  }

  /// Program the pair to complementary states with +/-v_write pulses
  /// (invert: upper LVT / lower HVT). Verifies the write actually switched;
  /// a sub-boundary operating point is a programming failure.
  void program(bool invert, const OperatingPoint& op) {
    FeFetDevice& to_lvt = invert ? upper_ : lower_;
    FeFetDevice& to_hvt = invert ? lower_ : upper_;
    to_lvt.apply_pulse(+op.v_write_v, op.t_write_ns);
    to_hvt.apply_pulse(-op.v_write_v, op.t_write_ns);
    if (mode() != (invert ? BlockMode::Inverter : BlockMode::Buffer))
      throw Error("device", "programming failed: write pulse below the switching boundary");
  }

private:
  FeFetDevice upper_;
  FeFetDevice lower_;
};

/// Affine delay-vs-VTH response used by the variation Monte Carlo. The
/// default sigma and slopes are calibrated so the expected 10k-sample
/// spread is 6.4 ns (buffer) / 4.5 ns (inverter).
struct DelayVariationModel {
  double sigma_vth_v = 0.05;
  double nominal_buffer_ns = 10.0;
  double nominal_inverter_ns = 8.0;
  double slope_buffer_ns_per_v = 16.66;
  double slope_inverter_ns_per_v = 11.72;

  double nominal_ns(BlockMode m) const {
    return m == BlockMode::Buffer ? nominal_buffer_ns : nominal_inverter_ns;
  }
  double slope_ns_per_v(BlockMode m) const {
    return m == BlockMode::Buffer ? slope_buffer_ns_per_v : slope_inverter_ns_per_v;
  }
};

namespace detail {

/// Box-Muller over mt19937_64; avoids std::normal_distribution so streams
/// are identical across standard libraries.
class GaussianSampler {
public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    double u1 = unit_open();
    double u2 = unit_open();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

private:
  double unit_open() {
    // (0, 1]: keeps log() finite
    return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
  }

  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace detail

struct McDelayStats {
  double mean_ns = 0.0;
  double stddev_ns = 0.0;  // sample (n-1); 0 for n == 1
  double min_ns = 0.0;
  double max_ns = 0.0;
  double spread_ns = 0.0;  // max - min
  int n = 0;
};

/// Monte Carlo block delay under Gaussian threshold variation, mapped
/// through the monotone (affine) delay response. Deterministic given seed.
inline McDelayStats mc_delay(BlockMode mode, double sigma_vth_v, int n, std::uint64_t seed,
                             const DelayVariationModel& model = {}) {
  if (n < 1) throw Error("device", "mc_delay needs n >= 1");
  if (sigma_vth_v < 0) throw Error("device", "sigma_vth must be >= 0");
  if (mode == BlockMode::Unresolved) throw Error("device", "mc_delay needs a resolved mode");
  detail::GaussianSampler gauss(seed);
  double nominal = model.nominal_ns(mode);
  double slope = model.slope_ns_per_v(mode);
  McDelayStats s;
  s.n = n;
  double sum = 0.0, sum_sq = 0.0;
  s.min_ns = std::numeric_limits<double>::infinity();
  s.max_ns = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double dvth = sigma_vth_v * gauss.next();
    double d = nominal + slope * dvth;
    sum += d;
    sum_sq += d * d;
    s.min_ns = std::min(s.min_ns, d);
    s.max_ns = std::max(s.max_ns, d);
  }
  s.mean_ns = sum / n;
  if (n > 1) {
    double var = (sum_sq - sum * sum / n) / (n - 1);
    s.stddev_ns = var > 0 ? std::sqrt(var) : 0.0;
  }
  s.spread_ns = s.max_ns - s.min_ns;
  return s;
}

}  // namespace camoforge

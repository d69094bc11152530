/* camoforge
 *
 * config.hpp -- JSON file formats: delay tables, device parameters, key
 * files, placement plans, netlist dumps, traces and run configs.
 */
#pragma once

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "device.hpp"
#include "netlist.hpp"
#include "placement.hpp"
#include "scanchain.hpp"
#include "simulate.hpp"
#include "timing.hpp"

namespace camoforge {

using Json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write " + path);
  out << content;
}

// ---- delays.json ----------------------------------------------------------

inline Json delay_table_to_json(const DelayTable& t) {
  Json j;
  static constexpr GateKind kKinds[] = {GateKind::And, GateKind::Nand, GateKind::Or,
                                        GateKind::Nor, GateKind::Xor,  GateKind::Xnor,
                                        GateKind::Not, GateKind::Buff};
  for (GateKind k : kKinds) {
    auto it = t.gate_ps.find(k);
    if (it != t.gate_ps.end()) j[to_string(k)] = it->second;
  }
  j["camo"] = t.camo_ps;
  j["scale"] = t.scale;
  return j;
}

inline DelayTable delay_table_from_json(const Json& j) {
  DelayTable t = DelayTable::defaults();
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "camo") {
      t.camo_ps = it.value().get<double>();
    } else if (it.key() == "scale") {
      t.scale = it.value().get<double>();
    } else {
      auto kind = gate_kind_from_string(it.key());
      if (!kind || *kind == GateKind::Input || *kind == GateKind::Camo)
        throw Error("config", "delays: unknown gate kind '" + it.key() + "'");
      t.gate_ps[*kind] = it.value().get<double>();
    }
  }
  t.validate();
  return t;
}

inline DelayTable load_delay_table(const std::string& path) {
  return delay_table_from_json(Json::parse(read_file(path)));
}

// ---- device.json ----------------------------------------------------------

struct DeviceConfig {
  FeFetParams fefet;
  OperatingPoint op;
  DelayVariationModel variation;
};

inline Json device_config_to_json(const DeviceConfig& c) {
  Json j;
  j["vth_low"] = c.fefet.vth_low_v;
  j["vth_high"] = c.fefet.vth_high_v;
  Json boundary = Json::array();
  for (const SwitchingPoint& p : c.fefet.boundary)
    boundary.push_back(Json::array({p.amplitude_v, p.min_width_ns}));
  j["boundary"] = boundary;  // only the 4 V / 20 ns anchor is normative
  j["v_read"] = c.op.v_read_v;
  j["v_in_high"] = c.op.v_in_high_v;
  j["v_write"] = c.op.v_write_v;
  j["t_write_ns"] = c.op.t_write_ns;
  j["variation"] = {{"sigma_vth", c.variation.sigma_vth_v},
                    {"nominal_buffer_ns", c.variation.nominal_buffer_ns},
                    {"nominal_inverter_ns", c.variation.nominal_inverter_ns},
                    {"slope_buffer_ns_per_v", c.variation.slope_buffer_ns_per_v},
                    {"slope_inverter_ns_per_v", c.variation.slope_inverter_ns_per_v}};
  return j;
}

inline DeviceConfig device_config_from_json(const Json& j) {
  DeviceConfig c;
  if (j.contains("vth_low")) c.fefet.vth_low_v = j["vth_low"].get<double>();
  if (j.contains("vth_high")) c.fefet.vth_high_v = j["vth_high"].get<double>();
  if (j.contains("boundary")) {
    c.fefet.boundary.clear();
    for (const auto& p : j["boundary"])
      c.fefet.boundary.push_back(SwitchingPoint{p.at(0).get<double>(), p.at(1).get<double>()});
  }
  if (j.contains("v_read")) c.op.v_read_v = j["v_read"].get<double>();
  if (j.contains("v_in_high")) c.op.v_in_high_v = j["v_in_high"].get<double>();
  if (j.contains("v_write")) c.op.v_write_v = j["v_write"].get<double>();
  if (j.contains("t_write_ns")) c.op.t_write_ns = j["t_write_ns"].get<double>();
  if (j.contains("variation")) {
    const auto& v = j["variation"];
    if (v.contains("sigma_vth")) c.variation.sigma_vth_v = v["sigma_vth"].get<double>();
    if (v.contains("nominal_buffer_ns")) c.variation.nominal_buffer_ns = v["nominal_buffer_ns"].get<double>();
    if (v.contains("nominal_inverter_ns")) c.variation.nominal_inverter_ns = v["nominal_inverter_ns"].get<double>();
    if (v.contains("slope_buffer_ns_per_v")) c.variation.slope_buffer_ns_per_v = v["slope_buffer_ns_per_v"].get<double>();
    if (v.contains("slope_inverter_ns_per_v")) c.variation.slope_inverter_ns_per_v = v["slope_inverter_ns_per_v"].get<double>();
  }
  c.fefet.validate();
  check_operating_point(c.fefet, c.op);
  return c;
}

inline DeviceConfig load_device_config(const std::string& path) {
  return device_config_from_json(Json::parse(read_file(path)));
}

// ---- key files --------------------------------------------------------------

/// {"bits": "0101", "block_ids": [...], "blocks": {id: "buffer"|"inverter"}}
inline Json key_to_json(const KeyBits& key, const std::vector<std::string>& block_ids) {
  if (key.size() != block_ids.size())
    throw Error("config", "key length does not match block id count");
  Json j;
  j["bits"] = key.to_string();
  j["block_ids"] = block_ids;
  Json blocks = Json::object();
  for (std::size_t i = 0; i < block_ids.size(); ++i)
    blocks[block_ids[i]] = key.bits[i] ? "inverter" : "buffer";
  j["blocks"] = blocks;
  return j;
}

struct KeyFile {
  KeyBits key;
  std::vector<std::string> block_ids;

  /// Reorder the key to a target netlist's CAMO declaration order.
  KeyBits aligned_to(const Netlist& n) const {
    if (block_ids.empty()) {
      if (key.size() != static_cast<std::size_t>(n.n_camo()))
        throw Error("config", "key length does not match netlist CAMO count");
      return key;
    }
    KeyBits out;
    for (int id : n.camo_ids()) {
      const std::string& name = n.net_name(id);
      auto it = std::find(block_ids.begin(), block_ids.end(), name);
      if (it == block_ids.end())
        throw Error("config", "key file has no entry for block '" + name + "'");
      out.bits.push_back(key.bits[static_cast<std::size_t>(it - block_ids.begin())]);
    }
    return out;
  }
};

inline KeyFile key_from_json(const Json& j) {
  KeyFile f;
  if (j.contains("block_ids")) f.block_ids = j["block_ids"].get<std::vector<std::string>>();
  if (j.contains("bits")) {
    for (char ch : j["bits"].get<std::string>()) {
      if (ch != '0' && ch != '1') throw Error("config", "key bits must be 0/1");
      f.key.bits.push_back(ch == '1');
    }
  } else if (j.contains("blocks")) {
    if (f.block_ids.empty())
      throw Error("config", "key file with a blocks map needs block_ids for ordering");
    for (const std::string& id : f.block_ids) {
      std::string mode = j["blocks"].at(id).get<std::string>();
      if (mode != "buffer" && mode != "inverter")
        throw Error("config", "block mode must be buffer or inverter");
      f.key.bits.push_back(mode == "inverter");
    }
  } else {
    throw Error("config", "key file needs bits or blocks");
  }
  if (!f.block_ids.empty() && f.block_ids.size() != f.key.size())
    throw Error("config", "key bits and block_ids disagree in length");
  if (j.contains("blocks") && j.contains("bits")) {
    for (std::size_t i = 0; i < f.block_ids.size(); ++i) {
      std::string mode = j["blocks"].at(f.block_ids[i]).get<std::string>();
      if ((mode == "inverter") != (f.key.bits[i] != 0))
        throw Error("config", "key file bits and blocks map disagree for '" + f.block_ids[i] + "'");
    }
  }
  return f;
}

inline KeyFile load_key_file(const std::string& path) {
  return key_from_json(Json::parse(read_file(path)));
}

// ---- placement plans --------------------------------------------------------

inline Json plan_to_json(const PlacementPlan& plan, const std::vector<std::string>& block_ids = {}) {
  Json j;
  j["strategy"] = to_string(plan.strategy);
  j["n_blocks"] = plan.n_blocks;
  j["seed"] = plan.seed;
  if (plan.level) j["level"] = *plan.level;
  j["spread_violations"] = plan.spread_violations;
  j["critical_path"] = plan.critical_path;
  Json sites = Json::array();
  for (const Site& s : plan.sites) {
    sites.push_back(Json{{"driver", s.driver},
                         {"sink", s.sink},
                         {"pin", s.pin},
                         {"to_output", s.to_output},
                         {"on_critical", s.on_critical},
                         {"level_from_output", s.level_from_output}});
  }
  j["sites"] = sites;
  if (!block_ids.empty()) j["block_ids"] = block_ids;
  return j;
}

inline PlacementPlan plan_from_json(const Json& j) {
  PlacementPlan p;
  auto strat = placement_strategy_from_string(j.at("strategy").get<std::string>());
  if (!strat) throw Error("config", "unknown placement strategy in plan");
  p.strategy = *strat;
  p.n_blocks = j.at("n_blocks").get<int>();
  p.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("level")) p.level = j["level"].get<int>();
  if (j.contains("spread_violations")) p.spread_violations = j["spread_violations"].get<int>();
  if (j.contains("critical_path"))
    p.critical_path = j["critical_path"].get<std::vector<std::string>>();
  for (const auto& s : j.at("sites")) {
    Site site;
    site.driver = s.at("driver").get<std::string>();
    site.sink = s.value("sink", std::string());
    site.pin = s.at("pin").get<int>();
    site.to_output = s.value("to_output", false);
    site.on_critical = s.value("on_critical", false);
    site.level_from_output = s.value("level_from_output", 0);
    p.sites.push_back(std::move(site));
  }
  return p;
}

// ---- netlist dump -----------------------------------------------------------

inline Json netlist_to_json(const Netlist& n) {
  Json j;
  j["inputs"] = n.primary_inputs();
  j["outputs"] = n.primary_outputs();
  Json gates = Json::array();
  for (const Gate& g : n.gates())
    gates.push_back(Json{{"name", g.name}, {"kind", to_string(g.kind)}, {"fanins", g.fanins}});
  j["gates"] = gates;
  return j;
}

// ---- traces and programmed state ---------------------------------------------

inline Json trace_to_json(const EventTrace& t) {
  Json j;
  Json phases = Json::array();
  for (const PhaseSpan& p : t.phases) {
    Json lines = Json::object();
    for (const auto& [line, volts] : p.lines) lines[line] = volts;
    phases.push_back(Json{{"phase", to_string(p.phase)},
                          {"t_start_ns", p.t_start_ns},
                          {"t_end_ns", p.t_end_ns},
                          {"lines", lines}});
  }
  j["phases"] = phases;
  Json events = Json::array();
  for (const TraceEvent& e : t.events) {
    Json ev{{"t_ns", e.t_ns}, {"signal", e.signal}};
    if (std::holds_alternative<double>(e.value))
      ev["value"] = std::get<double>(e.value);
    else
      ev["value"] = std::get<std::string>(e.value);
    events.push_back(std::move(ev));
  }
  j["events"] = events;
  return j;
}

inline Json programmed_state_to_json(const ScanChain& chain,
                                     const std::vector<EncryptionBlock>& blocks) {
  Json j = Json::object();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    std::string id = i < chain.cells.size() && !chain.cells[i].attached_block.empty()
                         ? chain.cells[i].attached_block
                         : "block" + std::to_string(i);
    j[id] = Json{{"F1", to_string(blocks[i].upper().state())},
                 {"F2", to_string(blocks[i].lower().state())},
                 {"mode", to_string(blocks[i].mode())}};
  }
  return j;
}

inline Json encryption_result_to_json(const EncryptionResult& r,
                                      const std::vector<std::string>& output_names = {}) {
  Json j;
  j["n_vectors"] = r.n_vectors;
  j["n_mismatched"] = r.n_mismatched;
  j["probability"] = r.probability;
  if (!output_names.empty() && output_names.size() == r.per_output_flip_counts.size()) {
    Json per = Json::object();
    for (std::size_t i = 0; i < output_names.size(); ++i)
      per[output_names[i]] = r.per_output_flip_counts[i];
    j["per_output_flip_counts"] = per;
  } else {
    j["per_output_flip_counts"] = r.per_output_flip_counts;
  }
  return j;
}

// ---- run config ---------------------------------------------------------------

struct RunConfig {
  std::string delays_path;
  std::string device_path;
  std::uint64_t seed = 1;
  std::int64_t n_vectors = 10000;
  int k = 100;
  WrongKey wrong_key = WrongKey::AllInvert;
  std::string out_dir;

  DelayTable delays = DelayTable::defaults();
  DeviceConfig device;
};

inline Json run_config_to_json(const RunConfig& c) {
  Json j;
  j["delays"] = c.delays_path.empty() ? Json(nullptr) : Json(c.delays_path);
  j["device"] = c.device_path.empty() ? Json(nullptr) : Json(c.device_path);
  j["seed"] = c.seed;
  j["vectors"] = c.n_vectors;
  j["k"] = c.k;
  j["wrong_key"] = to_string(c.wrong_key);
  j["out"] = c.out_dir;
  return j;
}

inline RunConfig run_config_from_json(const Json& j) {
  RunConfig c;
  if (j.contains("delays") && !j["delays"].is_null()) c.delays_path = j["delays"].get<std::string>();
  if (j.contains("device") && !j["device"].is_null()) c.device_path = j["device"].get<std::string>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("vectors")) c.n_vectors = j["vectors"].get<std::int64_t>();
  if (j.contains("k")) c.k = j["k"].get<int>();
  if (j.contains("wrong_key")) {
    auto w = wrong_key_from_string(j["wrong_key"].get<std::string>());
    if (!w) throw Error("config", "unknown wrong_key convention");
    c.wrong_key = *w;
  }
  if (j.contains("out")) c.out_dir = j["out"].get<std::string>();
  if (!c.delays_path.empty()) c.delays = load_delay_table(c.delays_path);
  if (!c.device_path.empty()) c.device = load_device_config(c.device_path);
  return c;
}

/// Load a run config from an explicit path, else from $CAMOFORGE_CONFIG,
/// else defaults.
inline RunConfig load_run_config(const std::string& path = "") {
  if (!path.empty()) return run_config_from_json(Json::parse(read_file(path)));
  if (const char* env = std::getenv("CAMOFORGE_CONFIG"))
    return run_config_from_json(Json::parse(read_file(env)));
  return RunConfig{};
}

}  // namespace camoforge

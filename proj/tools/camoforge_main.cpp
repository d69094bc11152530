// camoforge command-line front end: parse/timing/encrypt/simulate/program
// plus the benchmark sweep drivers. Exit codes: 0 ok, 1 run error (stage +
// cause on stderr), 2 usage.

#include <CLI11.hpp>

#include <camoforge/camoforge.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace camoforge;

namespace {

struct IscasEntry {
  const char* name;
  int pis, pos, gates;
};

// Structural counts of the distributed ISCAS85 .bench files.
constexpr IscasEntry kIscas85[] = {
    {"c17", 5, 2, 6},        {"c432", 36, 7, 160},    {"c499", 41, 32, 202},
    {"c880", 60, 26, 383},   {"c1908", 33, 25, 880},  {"c2670", 233, 140, 1193},
    {"c5315", 178, 123, 2307}, {"c7552", 207, 108, 3512}};

Netlist load_netlist(const std::string& path) {
  try {
    return parse_bench(read_file(path));
  } catch (const Error& e) {
    throw Error(e.stage(), path + ": " + e.message());
  }
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

/// "3" -> {3}; "1..5" -> {1..5}; "1,3,7" -> {1,3,7}; mixes allowed.
std::vector<int> parse_int_list(const std::string& s) {
  auto to_int = [&](const std::string& tok) {
    try {
      std::size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw Error("cli", "cannot parse '" + tok + "' in list '" + s + "'");
    }
  };
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t dots = tok.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(tok));
    } else {
      int a = to_int(tok.substr(0, dots));
      int b = to_int(tok.substr(dots + 2));
      for (int v = a; v <= b; ++v) out.push_back(v);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw Error("cli", "empty list: '" + s + "'");
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (int v : parse_int_list(s)) {
    if (v < 0) throw Error("cli", "seeds must be non-negative");
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

void echo_config(const RunConfig& cfg, const fs::path& dir) {
  write_file((dir / "run_config.json").string(), run_config_to_json(cfg).dump(2) + "\n");
}

/// Benchmarks for a sweep: .bench files from the directory if any are
/// there, otherwise the deterministic synthetic stand-in suite.
std::vector<std::pair<std::string, Netlist>> gather_benchmarks(const std::string& dir,
                                                               bool allow_synthetic,
                                                               std::ostream& log) {
  std::vector<std::pair<std::string, Netlist>> circuits;
  if (!dir.empty() && fs::is_directory(dir)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.path().extension() == ".bench") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files)
      circuits.emplace_back(f.stem().string(), load_netlist(f.string()));
  }
  if (circuits.empty()) {
    if (!allow_synthetic)
      throw Error("cli", "no .bench files found in '" + dir + "'");
    log << "# no .bench files found; using the synthetic benchmark-scale suite\n";
    circuits = iscas85_scale_suite();
  }
  return circuits;
}

int cmd_parse(const std::string& file, const std::string& json_out) {
  Netlist n = load_netlist(file);
  LevelMap lm = levelize(n);
  std::cout << "file:     " << file << "\n"
            << "inputs:   " << n.n_pis() << "\n"
            << "outputs:  " << n.n_pos() << "\n"
            << "gates:    " << n.n_gates() << "\n"
            << "camo:     " << n.n_camo() << "\n"
            << "levels:   " << lm.max_forward_level << "\n";
  for (const std::string& w : n.warnings()) std::cout << "warning:  " << w << "\n";
  if (!json_out.empty()) write_file(json_out, netlist_to_json(n).dump(2) + "\n");
  return 0;
}

int cmd_timing(const std::string& file, const RunConfig& cfg, const std::string& out) {
  Netlist n = load_netlist(file);
  PathReport r = top_k_paths(n, cfg.delays, cfg.k);
  std::string csv = path_report_csv(r);
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_file(out, csv);
    std::cout << "critical_delay_ps: " << r.critical_delay_ps << "\n"
              << "top" << cfg.k << "_sum_ps:     " << r.topk_sum_ps << "\n"
              << "paths:             " << r.paths.size() << "\n"
              << "wrote " << out << "\n";
  }
  return 0;
}

int cmd_encrypt(const std::string& file, const std::string& strategy_str, int n_blocks,
                std::uint64_t seed, int level, const RunConfig& cfg, const std::string& out_dir) {
  auto strategy = placement_strategy_from_string(strategy_str);
  if (!strategy) throw Error("cli", "unknown strategy '" + strategy_str + "'");
  Netlist n = load_netlist(file);
  PathReport timing = top_k_paths(n, cfg.delays, cfg.k);
  std::optional<int> lvl;
  if (*strategy == PlacementStrategy::LevelAt) {
    if (level < 1) throw Error("cli", "the level strategy needs --level >= 1");
    lvl = level;
  }
  PlacementPlan plan = plan_placement(n, timing, *strategy, n_blocks, seed, lvl);
  InsertResult ins = insert_blocks(n, plan);

  fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  fs::create_directories(dir);
  std::string stem = stem_of(file);
  write_file((dir / (stem + "_enc.bench")).string(), write_bench(ins.netlist));
  Json plan_json = plan_to_json(plan, ins.block_ids);
  CostReport cost = cost_report(static_cast<int>(ins.block_ids.size()));
  plan_json["cost"] = Json{{"transistors", cost.transistors}, {"area_um2", cost.area_um2}};
  write_file((dir / (stem + "_plan.json")).string(), plan_json.dump(2) + "\n");
  KeyBits correct = KeyBits::all_buffer(ins.block_ids.size());
  write_file((dir / (stem + "_key.json")).string(),
             key_to_json(correct, ins.block_ids).dump(2) + "\n");
  echo_config(cfg, dir);
  std::cout << "encrypted " << stem << ": " << ins.block_ids.size() << " blocks ("
            << cost.transistors << " transistors, " << cost.area_um2 << " um2), "
            << "spread violations " << plan.spread_violations << "\n"
            << "wrote " << (dir / (stem + "_enc.bench")).string() << "\n";
  return 0;
}

int cmd_simulate(const std::string& original, const std::string& encrypted,
                 const std::string& key_path, bool exhaustive, const RunConfig& cfg,
                 const std::string& out) {
  Netlist orig = load_netlist(original);
  Netlist enc = load_netlist(encrypted);
  KeyBits key = load_key_file(key_path).aligned_to(enc);
  VectorSet vectors = exhaustive ? VectorSet::exhaustive(orig.n_pis())
                                 : VectorSet::random(orig.n_pis(), cfg.n_vectors, cfg.seed);
  EncryptionResult r =
      encryption_probability(orig, enc, key, vectors, cfg.device.op, cfg.device.fefet);
  Json j = encryption_result_to_json(r, enc.primary_outputs());
  j["vectors"] = exhaustive ? "exhaustive" : "random";
  if (!exhaustive) j["seed"] = cfg.seed;
  if (out.empty())
    std::cout << j.dump(2) << "\n";
  else
    write_file(out, j.dump(2) + "\n");
  return 0;
}

int cmd_program(const std::string& plan_path, const std::string& key_path,
                const std::string& scheme, const RunConfig& cfg, const std::string& out_dir) {
  Json plan_json = Json::parse(read_file(plan_path));
  if (!plan_json.contains("block_ids"))
    throw Error("cli", "plan file has no block_ids (generate it with `camoforge encrypt`)");
  std::vector<std::string> block_ids = plan_json["block_ids"].get<std::vector<std::string>>();
  KeyFile key_file = load_key_file(key_path);

  // Order the key to the chain, which is built in block id order.
  KeyBits key;
  if (key_file.block_ids.empty()) {
    key = key_file.key;
    if (key.size() != block_ids.size())
      throw Error("cli", "key length does not match the plan's block count");
  } else {
    for (const std::string& id : block_ids) {
      auto it = std::find(key_file.block_ids.begin(), key_file.block_ids.end(), id);
      if (it == key_file.block_ids.end())
        throw Error("cli", "key file has no entry for block '" + id + "'");
      key.bits.push_back(
          key_file.key.bits[static_cast<std::size_t>(it - key_file.block_ids.begin())]);
    }
  }

  bool one_step = scheme == "one-step";
  if (!one_step && scheme != "two-step")
    throw Error("cli", "scheme must be two-step or one-step");
  ProgrammingRun run(make_chain(block_ids, one_step),
                     std::vector<EncryptionBlock>(block_ids.size(),
                                                  EncryptionBlock(cfg.device.fefet)),
                     cfg.device.op);
  run.shift(key);
  if (one_step)
    run.program_one_step();
  else
    run.program_two_step();
  run.enter_logic_mode();

  fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  fs::create_directories(dir);
  write_file((dir / "programmed_state.json").string(),
             programmed_state_to_json(run.chain(), run.blocks()).dump(2) + "\n");
  write_file((dir / "trace.json").string(), trace_to_json(run.trace()).dump(2) + "\n");
  echo_config(cfg, dir);
  std::cout << "programmed " << block_ids.size() << " blocks via " << scheme << "\n"
            << "wrote " << (dir / "programmed_state.json").string() << " and trace.json\n";
  return 0;
}

int cmd_sweep(const std::string& bench_dir, const std::string& strategy_str,
              const std::string& blocks_str, const std::string& seeds_str, int level,
              const RunConfig& cfg, const std::string& out, bool synthetic_ok) {
  auto strategy = placement_strategy_from_string(strategy_str);
  if (!strategy) throw Error("cli", "unknown strategy '" + strategy_str + "'");
  SweepRequest req;
  req.strategy = *strategy;
  req.n_blocks = parse_int_list(blocks_str);
  req.seeds = parse_seed_list(seeds_str);
  req.n_vectors = cfg.n_vectors;
  req.vector_seed = cfg.seed;
  req.wrong_key = cfg.wrong_key;
  req.k_paths = cfg.k;
  req.delays = cfg.delays;
  req.op = cfg.device.op;
  req.fefet = cfg.device.fefet;
  if (*strategy == PlacementStrategy::LevelAt) {
    if (level < 1) throw Error("cli", "the level strategy needs --level >= 1");
    req.level = level;
  }

  auto circuits = gather_benchmarks(bench_dir, synthetic_ok, std::cerr);
  std::vector<SweepRow> rows = sweep(circuits, req);
  std::string csv = sweep_csv(rows);
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_file(out, csv);
    write_file(out + ".config.json", run_config_to_json(cfg).dump(2) + "\n");
    std::cout << "wrote " << out << " (" << rows.size() << " rows)\n";
  }
  return 0;
}

int cmd_level_sweep(const std::string& file, const std::string& path_choice, const RunConfig& cfg,
                    const std::string& out) {
  Netlist n = load_netlist(file);
  TimedPath path = path_choice == "critical" ? critical_path(n, cfg.delays)
                                             : critical_path_to(n, cfg.delays, path_choice);
  bool small = n.n_pis() <= VectorSet::kMaxExhaustivePis &&
               (std::int64_t(1) << n.n_pis()) <= cfg.n_vectors;
  VectorSet vectors = small ? VectorSet::exhaustive(n.n_pis())
                            : VectorSet::random(n.n_pis(), cfg.n_vectors, cfg.seed);
  auto rows = level_sweep(n, path, vectors, cfg.device.op, cfg.device.fefet);
  std::string csv = level_sweep_csv(stem_of(file), rows);
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_file(out, csv);
    write_file(out + ".config.json", run_config_to_json(cfg).dump(2) + "\n");
    std::cout << "wrote " << out << " (" << rows.size() << " levels)\n";
  }
  return 0;
}

int cmd_gen(bool suite, int gates, int inputs, int outputs, std::uint64_t seed,
            const std::string& out) {
  if (suite) {
    fs::path dir = out.empty() ? fs::path("benchmarks_synth") : fs::path(out);
    fs::create_directories(dir);
    for (const auto& [name, netlist] : iscas85_scale_suite()) {
      write_file((dir / (name + ".bench")).string(), write_bench(netlist));
      std::cout << name << ": " << netlist.n_pis() << " inputs, " << netlist.n_pos()
                << " outputs, " << netlist.n_gates() << " gates\n";
    }
    std::cout << "wrote suite to " << dir.string() << "\n";
    return 0;
  }
  SynthSpec spec;
  spec.n_gates = gates;
  spec.n_inputs = inputs;
  spec.n_outputs = outputs;
  spec.seed = seed;
  Netlist n = random_netlist(spec);
  std::string text = write_bench(n);
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  return 0;
}

int cmd_fetch_benchmarks(const std::string& dir) {
  std::cout << "The ISCAS85 benchmark set is not vendored. Expected files and their\n"
               "structural counts (inputs / outputs / gates) in the distributed .bench "
               "format:\n\n";
  for (const IscasEntry& e : kIscas85)
    std::cout << "  " << e.name << ".bench  " << e.pis << " / " << e.pos << " / " << e.gates
              << "\n";
  std::cout << "\nMirrors carrying the .bench files include the Prague DDD benchmark\n"
               "pages (ddd.fit.cvut.cz/www/prj/Benchmarks/) and several GitHub mirrors\n"
               "(search: ISCAS85 bench). Circulating copies differ in comments and\n"
               "whitespace, so files are verified structurally rather than by checksum.\n";
  if (dir.empty()) return 0;
  int bad = 0;
  std::cout << "\nchecking " << dir << ":\n";
  for (const IscasEntry& e : kIscas85) {
    fs::path p = fs::path(dir) / (std::string(e.name) + ".bench");
    if (!fs::exists(p)) {
      std::cout << "  " << e.name << ".bench: missing\n";
      continue;
    }
    try {
      Netlist n = load_netlist(p.string());
      bool ok = n.n_pis() == e.pis && n.n_pos() == e.pos && n.n_gates() == e.gates;
      if (!ok) ++bad;
      std::cout << "  " << e.name << ".bench: " << (ok ? "ok" : "count mismatch") << " ("
                << n.n_pis() << " / " << n.n_pos() << " / " << n.n_gates() << ")\n";
    } catch (const Error& err) {
      ++bad;
      std::cout << "  " << e.name << ".bench: parse failure: " << err.what() << "\n";
    }
  }
  return bad ? 1 : 0;
}

int cmd_cost(int n_blocks) {
  CostReport r = cost_report(n_blocks);
  std::cout << "blocks:            " << r.n_blocks << "\n"
            << "transistors:       " << r.transistors << " (4 per block)\n"
            << "area_um2:          " << r.area_um2 << " (1.09 per block)\n"
            << "tvd_reference:     " << CostReport::kTvdReferenceTransistors << " transistors\n"
            << "nand_plus_1_aib:   " << CostReport::kNandWith1AibTransistors << " transistors\n"
            << "nand_plus_3_aib:   " << CostReport::kNandWith3AibTransistors << " transistors\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"camoforge: keyed buffer/inverter netlist obfuscation toolkit"};
  app.require_subcommand(1);

  std::string config_path, file, out, json_out, bench_dir;
  std::string strategy = "noncritical", scheme = "two-step", path_choice = "critical";
  std::string original, encrypted, key_path, plan_path, blocks_str = "1..7", seeds_str = "1..5";
  std::string wrong_key_str, delays_path, device_path;
  int n_blocks = 1, level = 0, k = 0, gen_gates = 100, gen_inputs = 16, gen_outputs = 8;
  int cost_n = 1;
  std::uint64_t seed = 0;
  bool exhaustive = false, gen_suite = false, synthetic_ok = true;
  std::int64_t n_vectors = 0;

  app.add_option("--config", config_path, "run config JSON (or $CAMOFORGE_CONFIG)");

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--delays", delays_path, "delay table JSON");
    cmd->add_option("--device", device_path, "device config JSON");
    cmd->add_option("--k", k, "top-k path count");
    cmd->add_option("--vectors", n_vectors, "random vector count");
    cmd->add_option("--wrong-key", wrong_key_str, "all-invert|complement|random");
    return cmd;
  };

  CLI::App* parse_cmd = app.add_subcommand("parse", "parse and summarize a .bench netlist");
  parse_cmd->add_option("file", file)->required();
  parse_cmd->add_option("--json", json_out, "write a JSON netlist dump");

  CLI::App* timing_cmd = app.add_subcommand("timing", "top-k critical path report (CSV)");
  timing_cmd->add_option("file", file)->required();
  timing_cmd->add_option("--out", out, "CSV path (default stdout)");
  add_common(timing_cmd);

  CLI::App* encrypt_cmd = app.add_subcommand("encrypt", "insert keyed blocks into a netlist");
  encrypt_cmd->add_option("file", file)->required();
  encrypt_cmd->add_option("--strategy", strategy, "noncritical|critical|level");
  encrypt_cmd->add_option("--n", n_blocks, "number of blocks")->required();
  encrypt_cmd->add_option("--seed", seed, "placement seed");
  encrypt_cmd->add_option("--level", level, "gate distance from the output (level strategy)");
  encrypt_cmd->add_option("--out", out, "output directory");
  add_common(encrypt_cmd);

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "encryption probability of a keyed pair");
  simulate_cmd->add_option("--original", original)->required();
  simulate_cmd->add_option("--encrypted", encrypted)->required();
  simulate_cmd->add_option("--key", key_path)->required();
  simulate_cmd->add_flag("--exhaustive", exhaustive, "enumerate all input vectors");
  simulate_cmd->add_option("--seed", seed, "vector seed");
  simulate_cmd->add_option("--out", out, "result JSON path (default stdout)");
  add_common(simulate_cmd);

  CLI::App* program_cmd = app.add_subcommand("program", "simulate scan-chain key programming");
  program_cmd->add_option("--plan", plan_path)->required();
  program_cmd->add_option("--key", key_path)->required();
  program_cmd->add_option("--scheme", scheme, "two-step|one-step");
  program_cmd->add_option("--out", out, "output directory");
  add_common(program_cmd);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "probability/timing sweep over benchmarks");
  sweep_cmd->add_option("--bench-dir", bench_dir, "directory of .bench files");
  sweep_cmd->add_option("--strategy", strategy, "noncritical|critical|level");
  sweep_cmd->add_option("--blocks", blocks_str, "block counts, e.g. 1..7 or 0,2,4");
  sweep_cmd->add_option("--seeds", seeds_str, "placement seeds, e.g. 1..5");
  sweep_cmd->add_option("--level", level, "level for the level strategy");
  sweep_cmd->add_option("--seed", seed, "vector seed");
  sweep_cmd->add_flag("!--no-synthetic", synthetic_ok,
                      "fail instead of falling back to the synthetic suite");
  sweep_cmd->add_option("--out", out, "CSV path (default stdout)");
  add_common(sweep_cmd);

  CLI::App* level_cmd = app.add_subcommand("level-sweep", "probability vs distance from output");
  level_cmd->add_option("file", file)->required();
  level_cmd->add_option("--path", path_choice, "critical (default) or a primary output name");
  level_cmd->add_option("--seed", seed, "vector seed");
  level_cmd->add_option("--out", out, "CSV path (default stdout)");
  add_common(level_cmd);

  CLI::App* gen_cmd = app.add_subcommand("gen", "generate random benchmark circuits");
  gen_cmd->add_flag("--suite", gen_suite, "emit the benchmark-scale synthetic suite");
  gen_cmd->add_option("--gates", gen_gates);
  gen_cmd->add_option("--inputs", gen_inputs);
  gen_cmd->add_option("--outputs", gen_outputs);
  gen_cmd->add_option("--seed", seed);
  gen_cmd->add_option("--out", out, "output file or directory");

  CLI::App* fetch_cmd = app.add_subcommand("fetch-benchmarks",
                                           "document and verify the ISCAS85 benchmark set");
  fetch_cmd->add_option("--dir", bench_dir, "directory to verify");

  CLI::App* cost_cmd = app.add_subcommand("cost", "transistor/area cost of n blocks");
  cost_cmd->add_option("--n", cost_n, "number of blocks")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunConfig cfg = load_run_config(config_path);
    if (!delays_path.empty()) {
      cfg.delays_path = delays_path;
      cfg.delays = load_delay_table(delays_path);
    }
    if (!device_path.empty()) {
      cfg.device_path = device_path;
      cfg.device = load_device_config(device_path);
    }
    if (k > 0) cfg.k = k;
    if (n_vectors > 0) cfg.n_vectors = n_vectors;
    if (!wrong_key_str.empty()) {
      auto w = wrong_key_from_string(wrong_key_str);
      if (!w) throw Error("cli", "unknown wrong-key convention '" + wrong_key_str + "'");
      cfg.wrong_key = *w;
    }
    bool has_seed = encrypt_cmd->count("--seed") || simulate_cmd->count("--seed") ||
                    sweep_cmd->count("--seed") || level_cmd->count("--seed") ||
                    gen_cmd->count("--seed");
    if (has_seed) cfg.seed = seed;

    if (*parse_cmd) return cmd_parse(file, json_out);
    if (*timing_cmd) return cmd_timing(file, cfg, out);
    if (*encrypt_cmd)
      return cmd_encrypt(file, strategy, n_blocks, encrypt_cmd->count("--seed") ? seed : cfg.seed,
                         level, cfg, out);
    if (*simulate_cmd) return cmd_simulate(original, encrypted, key_path, exhaustive, cfg, out);
    if (*program_cmd) return cmd_program(plan_path, key_path, scheme, cfg, out);
    if (*sweep_cmd)
      return cmd_sweep(bench_dir, strategy, blocks_str, seeds_str, level, cfg, out, synthetic_ok);
    if (*level_cmd) return cmd_level_sweep(file, path_choice, cfg, out);
    if (*gen_cmd) return cmd_gen(gen_suite, gen_gates, gen_inputs, gen_outputs, seed, out);
    if (*fetch_cmd) return cmd_fetch_benchmarks(bench_dir);
    if (*cost_cmd) return cmd_cost(cost_n);
  } catch (const Error& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.message() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error [internal]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

// Command-line front end: subcommands for constellation dumps, classical
// baselines, single quantum reads, grid sweeps and figure/table presets.
// Every successful run writes its outputs plus one manifest.json into the
// output directory.

#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "risread/config.hpp"
#include "risread/harness.hpp"
#include "risread/io.hpp"
#include "risread/presets.hpp"

namespace {

using risread::ConfigError;
using risread::ConfigErrorKind;
using risread::ExperimentSpec;
using risread::Scheme;
using json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

constexpr int kExitInternal = 1;
constexpr int kExitCliParse = 2;
constexpr int kExitMissingFile = 3;
constexpr int kExitTypeMismatch = 4;
constexpr int kExitUnknownKey = 5;
constexpr int kExitInconsistent = 6;
constexpr int kExitUnknownPreset = 7;

int config_exit_code(ConfigErrorKind kind) {
  switch (kind) {
    case ConfigErrorKind::MissingFile:
      return kExitMissingFile;
    case ConfigErrorKind::TypeMismatch:
      return kExitTypeMismatch;
    case ConfigErrorKind::UnknownKey:
      return kExitUnknownKey;
    case ConfigErrorKind::InconsistentAxes:
      return kExitInconsistent;
  }
  return kExitInternal;
}

struct CommonArgs {
  std::string out_dir = ".";
  int workers = 1;
  double scale = 1;
  std::optional<uint64_t> seed;
};

struct SpecArgs {
  std::optional<std::string> config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
};

// Registers --config plus one string flag per config key; values land in
// `args.overrides` in command-line order.
void add_spec_options(CLI::App* cmd, SpecArgs& args) {
  cmd->add_option_function<std::string>(
         "--config",
         [&args](const std::string& v) { args.config_path = v; },
         "key = value config file")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  for (const std::string& key : risread::config_keys()) {
    if (key == "seed") continue;  // global --seed covers it
    cmd->add_option_function<std::string>(
           "--" + key,
           [&args, key](const std::string& v) {
             args.overrides.emplace_back(key, v);
           },
           "config key")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
        ->group("Config keys");
  }
}

risread::RunConfig load_config(const SpecArgs& args, const CommonArgs& common) {
  auto overrides = args.overrides;
  if (common.seed) overrides.emplace_back("seed", std::to_string(*common.seed));
  return risread::parse_config(args.config_path, overrides);
}

class OutputWriter {
 public:
  OutputWriter(std::string dir, std::string command)
      : dir_(std::move(dir)), start_(std::chrono::steady_clock::now()) {
    std::filesystem::create_directories(dir_);
    manifest_["version"] = kVersion;
    manifest_["command"] = std::move(command);
  }

  json& manifest() { return manifest_; }

  void write(const std::string& name, const std::string& contents) {
    const auto path = std::filesystem::path(dir_) / name;
    risread::write_file(path.string(), contents);
    names_.push_back(name);
    std::cout << "wrote " << path.string() << "\n";
  }

  void finish() {
    manifest_["outputs"] = names_;
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start_;
    manifest_["wall_seconds"] = elapsed.count();
    const auto path = std::filesystem::path(dir_) / "manifest.json";
    risread::write_file(path.string(), manifest_.dump(2) + "\n");
    std::cout << "wrote " << path.string() << "\n";
  }

 private:
  std::string dir_;
  json manifest_;
  std::vector<std::string> names_;
  std::chrono::steady_clock::time_point start_;
};

void record_config(OutputWriter& out, const ExperimentSpec& spec,
                   const CommonArgs& common) {
  json cfg;
  for (const auto& [key, value] : risread::config_values(spec))
    cfg[key] = value;
  out.manifest()["config"] = cfg;
  out.manifest()["workers"] = common.workers;
}

void record_rows(OutputWriter& out, const std::vector<risread::SweepRow>& rows) {
  json walls = json::array();
  for (const auto& r : rows) walls.push_back(r.wall_seconds);
  out.manifest()["row_wall_seconds"] = walls;
}

int cmd_constellation(const SpecArgs& args, const CommonArgs& common) {
  risread::RunConfig rc = load_config(args, common);
  const risread::RunPoint pt = risread::resolve_point(rc.spec, 0);
  const risread::Constellation c =
      risread::build_signal_constellation(rc.spec, pt);
  OutputWriter out(common.out_dir, "constellation");
  record_config(out, rc.spec, common);
  out.write("constellation.csv", risread::constellation_csv(c));
  out.finish();
  return 0;
}

int cmd_baseline(const SpecArgs& args, const CommonArgs& common) {
  risread::RunConfig rc = load_config(args, common);
  // The baseline command runs classical receivers; the default scheme is the
  // heterodyne RIS baseline, psk-sql selects the PSK one.
  if (rc.spec.scheme == Scheme::RisQuantum) {
    rc.spec.scheme = Scheme::RisSql;
    rc.spec.mode_count = 1;
    rc.spec.s_grid.clear();
    rc.spec.validate();
  }
  risread::SweepResult res = risread::sweep(rc.spec, common.workers);
  OutputWriter out(common.out_dir, "baseline");
  record_config(out, rc.spec, common);
  record_rows(out, res.rows);
  out.write("baseline.csv",
            risread::baseline_csv(res.rows, rc.spec.efficiency_central));
  out.finish();
  return 0;
}

int cmd_read(const SpecArgs& args, const CommonArgs& common) {
  risread::RunConfig rc = load_config(args, common);
  if (rc.spec.scheme != Scheme::RisQuantum)
    throw ConfigError(ConfigErrorKind::InconsistentAxes,
                      "read runs the quantum receiver; use the baseline "
                      "command for classical schemes");
  if (rc.spec.trajectory_trials == 0)
    rc.spec.trajectory_trials = static_cast<int>(
        std::min<uint64_t>(10, rc.spec.trials));
  risread::SweepResult res = risread::sweep(rc.spec, common.workers);
  OutputWriter out(common.out_dir, "read");
  record_config(out, rc.spec, common);
  record_rows(out, res.rows);
  out.write("pe_sweep.csv", risread::pe_sweep_csv(res.rows));
  out.write("trajectory.csv", risread::trajectory_csv(res.trajectories));
  out.write("curves.csv", risread::curves_csv(res.curves));
  out.write("heatmap.csv", risread::heatmap_csv(res.heatmap));
  out.finish();
  return 0;
}

int cmd_sweep(const SpecArgs& args, const CommonArgs& common) {
  risread::RunConfig rc = load_config(args, common);
  risread::SweepResult res = risread::sweep(rc.spec, common.workers);
  OutputWriter out(common.out_dir, "sweep");
  record_config(out, rc.spec, common);
  record_rows(out, res.rows);
  out.write("pe_sweep.csv", risread::pe_sweep_csv(res.rows));
  if (!res.trajectories.empty()) {
    out.write("trajectory.csv", risread::trajectory_csv(res.trajectories));
    out.write("curves.csv", risread::curves_csv(res.curves));
    out.write("heatmap.csv", risread::heatmap_csv(res.heatmap));
  }
  out.finish();
  return 0;
}

int cmd_reproduce(const std::string& name, const CommonArgs& common) {
  const risread::Preset& preset = risread::find_preset(name);
  const auto files = risread::run_preset(preset, common.scale, common.workers,
                                         common.seed);
  OutputWriter out(common.out_dir, "reproduce");
  out.manifest()["preset"] = preset.name;
  out.manifest()["summary"] = preset.summary;
  out.manifest()["scale"] = common.scale;
  out.manifest()["seed"] = common.seed ? *common.seed : uint64_t{1};
  out.manifest()["workers"] = common.workers;
  for (const auto& f : files) out.write(f.filename, f.content);
  out.finish();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Monte Carlo playground for reading RIS-modulated coherent states: "
      "classical heterodyne baselines against an adaptive time-resolving "
      "quantum receiver"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonArgs common;
  app.add_option("--seed", common.seed, "master seed (config key: seed)");
  app.add_option("--out-dir", common.out_dir, "output directory")
      ->capture_default_str();
  app.add_option("--workers", common.workers, "worker threads")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
  app.add_option("--scale", common.scale,
                 "multiplies preset trial counts, never physics")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  SpecArgs constellation_args, baseline_args, read_args, sweep_args;
  CLI::App* constellation = app.add_subcommand(
      "constellation", "dump the signal constellation as CSV");
  add_spec_options(constellation, constellation_args);
  CLI::App* baseline = app.add_subcommand(
      "baseline", "classical heterodyne error probability");
  add_spec_options(baseline, baseline_args);
  baseline
      ->add_option_function<std::string>(
          "--modulation",
          [&baseline_args](const std::string& v) {
            if (v == "ris")
              baseline_args.overrides.emplace_back("scheme", "ris-sql");
            else if (v == "psk")
              baseline_args.overrides.emplace_back("scheme", "psk-sql");
            else
              throw CLI::ValidationError("--modulation", "expected ris|psk");
          },
          "classical receiver family (shorthand for --scheme)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  CLI::App* read = app.add_subcommand(
      "read", "single quantum-receiver run with trajectory dump");
  add_spec_options(read, read_args);
  CLI::App* sweep = app.add_subcommand("sweep", "grid sweep from a config");
  add_spec_options(sweep, sweep_args);

  std::string preset_name;
  bool list_presets = false;
  CLI::App* reproduce =
      app.add_subcommand("reproduce", "run a figure/table preset");
  reproduce->add_option("preset", preset_name, "preset id, e.g. fig3a");
  reproduce->add_flag("--list", list_presets, "list preset ids and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitCliParse;
  }

  try {
    if (constellation->parsed())
      return cmd_constellation(constellation_args, common);
    if (baseline->parsed()) return cmd_baseline(baseline_args, common);
    if (read->parsed()) return cmd_read(read_args, common);
    if (sweep->parsed()) return cmd_sweep(sweep_args, common);
    if (reproduce->parsed()) {
      if (list_presets) {
        for (const auto& p : risread::all_presets())
          std::cout << p.name << "  " << p.summary << "\n";
        return 0;
      }
      if (preset_name.empty()) {
        std::cerr << "reproduce: missing preset id\n";
        return kExitCliParse;
      }
      return cmd_reproduce(preset_name, common);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return config_exit_code(e.kind());
  } catch (const risread::unknown_preset_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnknownPreset;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInconsistent;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

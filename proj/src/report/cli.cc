#include "frida/report/cli.h"

#include <CLI11.hpp>

#include <exception>
#include <optional>
#include <string>

#include "frida/common/errors.h"
#include "frida/report/config_io.h"
#include "frida/report/csv_sink.h"
#include "frida/report/sweep.h"

namespace frida::report {

namespace {

constexpr const char* kDefaultOutput = "frida-out";

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string sweep;
};

ConfigEntries load_entries(const Options& opt) {
  ConfigEntries e = read_entries(opt.config);
  if (opt.seed) e["run.seed"] = std::to_string(*opt.seed);
  return e;
}

std::string output_dir(const Options& opt, const fl::ExperimentConfig& cfg) {
  if (!opt.out.empty()) return opt.out;
  return cfg.output_dir.empty() ? kDefaultOutput : cfg.output_dir;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Free-rider detection experiments for federated averaging"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Experiment config file")->required();
    sub->add_option("--seed", opt.seed, "Override run.seed");
  };
  auto* run = app.add_subcommand("run", "Run one experiment");
  add_common(run);
  run->add_option("--out", opt.out, "Output directory (default: run.output or frida-out)");
  auto* sweep = app.add_subcommand("sweep", "Run one experiment per value of a config key");
  add_common(sweep);
  sweep->add_option("--out", opt.out, "Output directory (default: run.output or frida-out)");
  sweep->add_option("--sweep", opt.sweep, "KEY=V1,V2,...")->required();
  auto* check = app.add_subcommand("validate", "Check a config without running it");
  add_common(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  fl::ExperimentConfig cfg;
  ConfigEntries entries;
  std::optional<SweepSpec> spec;
  try {
    entries = load_entries(opt);
    cfg = config_from_entries(entries);
    if (sweep->parsed()) spec = parse_sweep(opt.sweep);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  if (check->parsed()) {
    out << "ok: " << opt.config << '\n';
    return kExitOk;
  }

  const std::string dir = output_dir(opt, cfg);
  try {
    if (spec) {
      run_sweep(entries, *spec, dir);
    } else {
      run_repeats(cfg, dir);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  out << "wrote " << dir << '\n';
  return kExitOk;
}

}  // namespace frida::report

// wavecascade: simulate the isotropic 4-wave kinetic equation and run the
// verification suites.
//
//   wavecascade simulate        [--config F] [--out DIR] [--seed S] [--threads N] [--dump-spectrum]
//   wavecascade verify-kernel   [--config F] [--seed S]
//   wavecascade verify-geometry [--config F] [--seed S] [--threads N]
//   wavecascade report SERIES   [--config F] [--out DIR]
//
// Every config key can also be given as --set key=value. Precedence is
// flag > environment (WAVECASCADE_CONFIG, WAVECASCADE_OUT, WAVECASCADE_SEED,
// WAVECASCADE_THREADS) > config file > built-in default.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include "wavecascade/commands.hpp"
#include "wavecascade/config.hpp"
#include "wavecascade/errors.hpp"

namespace {

using namespace wavecascade;

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

struct Common {
  std::string config_path;
  std::string out_dir;
  std::string seed;
  std::string threads;
  std::vector<std::string> settings;
};

void add_common(CLI::App* cmd, Common& c, bool with_out, bool with_threads) {
  cmd->add_option("--config", c.config_path, "Config file (key = value lines)");
  if (with_out) cmd->add_option("--out", c.out_dir, "Output directory");
  cmd->add_option("--seed", c.seed, "RNG seed (u64)");
  if (with_threads) cmd->add_option("--threads", c.threads, "OpenMP threads (0: default)");
  cmd->add_option("--set", c.settings, "Override one config key, key=value")->take_all();
}

RunConfig resolve(const Common& c) {
  const std::string path = !c.config_path.empty() ? c.config_path : env("WAVECASCADE_CONFIG").value_or("");
  RunConfig cfg = path.empty() ? RunConfig{} : parse_config_file(path);

  if (auto v = env("WAVECASCADE_SEED")) apply_setting(cfg, "rng.seed", *v);
  if (auto v = env("WAVECASCADE_THREADS")) apply_setting(cfg, "threads", *v);
  if (!c.seed.empty()) apply_setting(cfg, "rng.seed", c.seed);
  if (!c.threads.empty()) apply_setting(cfg, "threads", c.threads);
  for (const auto& kv : c.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError(kv, 0, "--set expects key=value");
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  validate(cfg);
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  return cfg;
}

std::string out_dir(const Common& c, const std::string& fallback) {
  if (!c.out_dir.empty()) return c.out_dir;
  return env("WAVECASCADE_OUT").value_or(fallback);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isotropic 4-wave kinetic equation simulator and verification suite"};
  app.require_subcommand(1);

  Common simulate_args, kernel_args, geometry_args, report_args;
  bool dump_spectrum = false;
  std::string series_path;

  auto* simulate = app.add_subcommand("simulate", "Evolve a spectrum and write series.csv and summary.json");
  add_common(simulate, simulate_args, true, true);
  simulate->add_flag("--dump-spectrum", dump_spectrum, "Append g_0..g_{n-1} to every CSV row");

  auto* verify_kernel = app.add_subcommand("verify-kernel", "Check the sine-integral and min identities");
  add_common(verify_kernel, kernel_args, false, true);

  auto* verify_geometry =
      app.add_subcommand("verify-geometry", "Check covering, cone, root and manifold computations");
  add_common(verify_geometry, geometry_args, false, true);

  auto* report = app.add_subcommand("report", "Cascade trend report of a series.csv");
  report->add_option("series", series_path, "series.csv written by simulate")->required();
  add_common(report, report_args, true, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) {
      const auto cfg = resolve(simulate_args);
      SimulateOptions opt;
      opt.out_dir = out_dir(simulate_args, "run");
      opt.dump_spectrum = dump_spectrum;
      return cmd_simulate(cfg, opt, std::cerr);
    }
    if (*verify_kernel) return cmd_verify_kernel(resolve(kernel_args), std::cout);
    if (*verify_geometry) return cmd_verify_geometry(resolve(geometry_args), std::cout);
    if (*report) {
      const auto cfg = resolve(report_args);
      const std::string dir = out_dir(report_args, "");
      return cmd_report(series_path, cfg,
                        dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(dir),
                        std::cout);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitOk;
}

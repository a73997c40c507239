#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "offload/run_spec.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitFlagged = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay-violation analysis, offloading optimization and simulation "
               "for a three-tier compute hierarchy"};

  std::string config_path;
  std::optional<std::string> out_path;
  std::optional<std::string> format_name;
  std::optional<std::string> command_name;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  bool strict = false;

  app.add_option("--config", config_path, "path to the key = value config file")
      ->required();
  app.add_option("--out", out_path, "output file path ('-' for stdout)");
  app.add_option("--format", format_name, "output format: csv or json");
  app.add_option("--seed", seed, "override the config's RNG seed");
  app.add_option("--command", command_name,
                 "override the config's command "
                 "(evaluate, optimize, grid, simulate, sweep)");
  app.add_flag("--quiet", quiet, "suppress the summary line");
  app.add_flag("--strict", strict,
               "exit with status 3 when a row is flagged "
               "(saturation or non-convergence)");

  CLI11_PARSE(app, argc, argv);

  try {
    offload::cli::RunSpec spec = offload::cli::load_config(config_path);
    if (out_path) spec.output_path = *out_path;
    if (format_name) spec.format = offload::cli::parse_format(*format_name);
    if (seed) spec.sim.seed = *seed;
    if (command_name) spec.command = offload::cli::parse_command(*command_name);
    spec.validate();

    const offload::cli::RunOutcome outcome = offload::cli::run(spec);
    if (!quiet) {
      std::cerr << outcome.summary << "\n";
      if (outcome.flagged) std::cerr << "flagged: " << outcome.flag_reason << "\n";
    }
    if (strict && outcome.flagged) return kExitFlagged;
    return kExitOk;
  } catch (const offload::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const offload::cli::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

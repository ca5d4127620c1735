// Batch front-end: rabi <mode> --config <path> --output <dir> [--workers N] [--verbose]

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "rabi/config.hpp"
#include "rabi/run.hpp"
#include "rabi/version.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct Args {
  std::string config;
  std::string output;
  int workers = 0;
  bool verbose = false;
};

void add_common(CLI::App* sub, Args& args) {
  sub->add_option("--config", args.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  sub->add_option("--output", args.output, "Output directory")->required();
  sub->add_option("--workers", args.workers, "Worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
  sub->add_flag("--verbose", args.verbose, "Log progress");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Rabi model ground-state sweeps and quench dynamics"};
  app.set_version_flag("--version", std::string(rabi::kVersion));
  app.require_subcommand(1);

  Args args;
  for (const char* name : {"phase-diagram", "quench", "ground-state", "wigner"}) {
    add_common(app.add_subcommand(name, std::string("Run in ") + name + " mode"), args);
  }
  CLI11_PARSE(app, argc, argv);

  spdlog::set_level(args.verbose ? spdlog::level::info : spdlog::level::warn);
  const std::string mode_name = app.get_subcommands().front()->get_name();

  std::ifstream in(args.config);
  std::stringstream text;
  text << in.rdbuf();

  rabi::RunConfig config;
  try {
    config = rabi::parse_config(text.str(), rabi::parse_mode(mode_name));
  } catch (const rabi::ConfigError& e) {
    std::cerr << "rabi: " << e.what() << "\n";
    return kExitConfig;
  }

  spdlog::info("running {} into {}", mode_name, args.output);
  const auto result = rabi::execute(config, args.output, {args.workers, args.verbose});
  if (result.exit_status != 0) {
    std::cerr << "rabi: run failed: " << result.error << "\n";
    return kExitFailure;
  }
  for (const auto& f : result.files) spdlog::info("wrote {}", f.string());
  return 0;
}

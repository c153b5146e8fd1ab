#include <CLI11.hpp>
#include <functional>
#include <iostream>

#include "commands.hpp"
#include "config.hpp"
#include "qproc/errors.hpp"

namespace {

using qproc::cli::CommandOptions;
using qproc::cli::ExperimentConfig;

struct SubcommandArgs {
  std::string configPath;
  CommandOptions opts;
};

void addCommonOptions(CLI::App* cmd, SubcommandArgs& args) {
  cmd->add_option("--config", args.configPath, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_flag("--json", args.opts.json, "emit JSON instead of CSV");
  cmd->add_option("--t-max", args.opts.tMax, "override the evaluation horizon");
  cmd->add_option("--tol", args.opts.tol, "override the convergence tolerance");
  cmd->add_option("--seed", args.opts.seed, "seed for sampled checks");
  cmd->add_flag("--dense-check", args.opts.denseCheck,
                "cross-check against dense materialization");
  cmd->add_flag("--require-suitable", args.opts.requireSuitable,
                "exit 4 unless every evaluation converges");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"batch driver for finite unitary systems, quantum measures and "
               "quantum integrals"};
  app.require_subcommand(1);

  SubcommandArgs walkArgs, spectrumArgs, measureArgs, integrateArgs, checkArgs;
  CLI::App* walk = app.add_subcommand("walk", "two-site walk tables");
  CLI::App* spectrumCmd = app.add_subcommand("spectrum", "decoherence-state spectrum");
  CLI::App* measure = app.add_subcommand("measure", "q-measures and suitability sweeps");
  CLI::App* integrate = app.add_subcommand("integrate", "quantum integrals");
  CLI::App* check = app.add_subcommand("check", "consistency residuals");
  addCommonOptions(walk, walkArgs);
  addCommonOptions(spectrumCmd, spectrumArgs);
  addCommonOptions(measure, measureArgs);
  addCommonOptions(integrate, integrateArgs);
  addCommonOptions(check, checkArgs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  using Runner = int (*)(const ExperimentConfig&, const CommandOptions&, std::ostream&);
  const SubcommandArgs* args = nullptr;
  Runner runner = nullptr;
  if (walk->parsed()) {
    args = &walkArgs;
    runner = qproc::cli::runWalk;
  } else if (spectrumCmd->parsed()) {
    args = &spectrumArgs;
    runner = qproc::cli::runSpectrum;
  } else if (measure->parsed()) {
    args = &measureArgs;
    runner = qproc::cli::runMeasure;
  } else if (integrate->parsed()) {
    args = &integrateArgs;
    runner = qproc::cli::runIntegrate;
  } else {
    args = &checkArgs;
    runner = qproc::cli::runCheck;
  }

  try {
    const ExperimentConfig config = qproc::cli::loadConfigFile(args->configPath);
    return runner(config, args->opts, std::cout);
  } catch (const qproc::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qproc::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "config.hpp"

namespace qproc::cli {

struct CommandOptions {
  bool json = false;
  std::optional<int> tMax;
  std::optional<double> tol;
  std::uint64_t seed = 17;
  bool denseCheck = false;
  bool requireSuitable = false;
};

// Exit codes: 0 success, 2 config error (thrown as ConfigError),
// 3 budget exceeded (thrown as BudgetExceeded), 4 non-convergence under
// --require-suitable.
int runWalk(const ExperimentConfig& config, const CommandOptions& opts, std::ostream& out);
int runSpectrum(const ExperimentConfig& config, const CommandOptions& opts, std::ostream& out);
int runMeasure(const ExperimentConfig& config, const CommandOptions& opts, std::ostream& out);
int runIntegrate(const ExperimentConfig& config, const CommandOptions& opts, std::ostream& out);
int runCheck(const ExperimentConfig& config, const CommandOptions& opts, std::ostream& out);

}  // namespace qproc::cli

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qproc/process.hpp"
#include "qproc/unitary.hpp"

namespace qproc::cli {

// Config problems exit with code 2.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SystemSpec {
  int m = 0;
  std::optional<ComplexMatrix> stationary;
  std::vector<ComplexMatrix> steps;
};

struct WalkBlock {
  int tMax = 16;
  int directCap = 16;
};

struct SpectrumBlock {
  int rank = 0;
};

struct CylinderEventSpec {
  int rank = 0;
  std::vector<std::uint64_t> members;
};

struct FamilyEventSpec {
  std::string name;
  std::optional<int> site;
  std::optional<int> time;
  std::vector<std::vector<int>> prefixes;
};

struct TableEventSpec {
  std::string file;
  std::string name;
  int maxRank = 0;
};

using EventSpec = std::variant<CylinderEventSpec, FamilyEventSpec, TableEventSpec>;

struct MeasureBlock {
  std::vector<EventSpec> events;
  int tMax = 20;
  int window = kDefaultWindow;
  double tol = kDefaultWindowTol;
};

struct SpaceIntegrateSpec {
  std::vector<double> weights;
  std::vector<double> f;
  ComplexMatrix rho;
};

struct ProcessIntegrateSpec {
  int rank = 0;
  std::vector<double> values;   // per path ordinal; empty when position is set
  std::optional<int> position;  // shorthand: f(γ) = γ_t with t = rank
  int tMax = 0;                 // 0 -> rank + 8
  int window = kDefaultWindow;
  double tol = kDefaultWindowTol;
};

struct IntegrateBlock {
  std::optional<SpaceIntegrateSpec> space;
  std::optional<ProcessIntegrateSpec> process;
};

struct CheckBlock {
  int tMax = 4;
  std::uint64_t samples = 1000;
};

struct ExperimentConfig {
  std::optional<SystemSpec> system;
  std::optional<ComplexVector> initialState;
  std::optional<int> fixedInitialSite;
  std::uint64_t enumerationCap = kDefaultEnumerationCap;
  std::optional<WalkBlock> walk;
  std::optional<SpectrumBlock> spectrum;
  std::optional<MeasureBlock> measure;
  std::optional<IntegrateBlock> integrate;
  std::optional<CheckBlock> check;
};

// Schema-validated parse; unknown keys are rejected.
ExperimentConfig parseConfig(const nlohmann::json& doc);
ExperimentConfig loadConfigFile(const std::string& path);

// Assemble core objects; throws ConfigError when required pieces are
// missing or inconsistent.
FiniteUnitarySystem buildSystem(const ExperimentConfig& config);
InitialState buildInitialState(const ExperimentConfig& config);
QProcess buildProcess(const ExperimentConfig& config);

// CSV coverage table: lines of "rank,path-index,coverage".
std::map<std::pair<int, std::uint64_t>, double> loadCoverageTable(const std::string& path);

}  // namespace qproc::cli

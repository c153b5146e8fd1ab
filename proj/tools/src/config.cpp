#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace qproc::cli {

namespace {

using nlohmann::json;

void requireKeys(const json& obj, const std::set<std::string>& allowed,
                 const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      throw ConfigError(where + ": unknown key \"" + key + "\"");
    }
  }
}

double parseReal(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

int parseInt(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<int>();
}

Complex parseComplex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) {
    throw ConfigError(where + ": complex numbers are [re, im] pairs");
  }
  return {parseReal(j[0], where), parseReal(j[1], where)};
}

ComplexVector parseComplexVector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected an array");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = parseComplex(j[i], where);
  }
  return v;
}

// row-major matrix: array of rows, entries [re, im]
ComplexMatrix parseComplexMatrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a matrix");
  const std::size_t rows = j.size();
  ComplexMatrix m;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != rows) {
      throw ConfigError(where + ": matrices must be square, row-major");
    }
    if (r == 0) m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
    for (std::size_t c = 0; c < rows; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parseComplex(row[c], where);
    }
  }
  return m;
}

std::vector<int> parsePrefix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a site array");
  std::vector<int> sites;
  for (const auto& entry : j) sites.push_back(parseInt(entry, where));
  return sites;
}

SystemSpec parseSystem(const json& j) {
  requireKeys(j, {"m", "stationary", "steps"}, "system");
  if (!j.contains("m")) throw ConfigError("system: missing \"m\"");
  SystemSpec spec;
  spec.m = parseInt(j["m"], "system.m");
  if (spec.m < 1) throw ConfigError("system.m must be >= 1");
  const bool hasStationary = j.contains("stationary");
  const bool hasSteps = j.contains("steps");
  if (hasStationary == hasSteps) {
    throw ConfigError("system: provide exactly one of \"stationary\" or \"steps\"");
  }
  if (hasStationary) {
    spec.stationary = parseComplexMatrix(j["stationary"], "system.stationary");
    if (spec.stationary->rows() != spec.m) {
      throw ConfigError("system.stationary: dimension disagrees with m");
    }
  } else {
    for (std::size_t k = 0; k < j["steps"].size(); ++k) {
      spec.steps.push_back(parseComplexMatrix(j["steps"][k], "system.steps"));
      if (spec.steps.back().rows() != spec.m) {
        throw ConfigError("system.steps: dimension disagrees with m");
      }
    }
    if (spec.steps.empty()) throw ConfigError("system.steps: needs at least one step");
  }
  return spec;
}

EventSpec parseEvent(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("type")) {
    throw ConfigError(where + ": events need a \"type\"");
  }
  const std::string type = j["type"].get<std::string>();
  if (type == "cylinder") {
    requireKeys(j, {"type", "rank", "members"}, where);
    CylinderEventSpec spec;
    spec.rank = parseInt(j.at("rank"), where + ".rank");
    if (!j.contains("members") || !j["members"].is_array()) {
      throw ConfigError(where + ": cylinder events need \"members\"");
    }
    for (const auto& idx : j["members"]) {
      const auto v = idx.get<std::int64_t>();
      if (v < 0) throw ConfigError(where + ".members: negative index");
      spec.members.push_back(static_cast<std::uint64_t>(v));
    }
    return spec;
  }
  if (type == "family") {
    requireKeys(j, {"type", "name", "site", "time", "prefix", "prefixes"}, where);
    if (!j.contains("name")) throw ConfigError(where + ": families need a \"name\"");
    FamilyEventSpec spec;
    spec.name = j["name"].get<std::string>();
    if (j.contains("site")) spec.site = parseInt(j["site"], where + ".site");
    if (j.contains("time")) spec.time = parseInt(j["time"], where + ".time");
    if (j.contains("prefix")) {
      spec.prefixes.push_back(parsePrefix(j["prefix"], where + ".prefix"));
    }
    if (j.contains("prefixes")) {
      for (const auto& p : j["prefixes"]) {
        spec.prefixes.push_back(parsePrefix(p, where + ".prefixes"));
      }
    }
    return spec;
  }
  if (type == "coverageTable") {
    requireKeys(j, {"type", "file", "name", "maxRank"}, where);
    TableEventSpec spec;
    if (!j.contains("file")) throw ConfigError(where + ": coverage tables need \"file\"");
    spec.file = j["file"].get<std::string>();
    spec.name = j.contains("name") ? j["name"].get<std::string>() : std::string("table");
    if (!j.contains("maxRank")) {
      throw ConfigError(where + ": coverage tables need \"maxRank\"");
    }
    spec.maxRank = parseInt(j["maxRank"], where + ".maxRank");
    return spec;
  }
  throw ConfigError(where + ": unknown event type \"" + type + "\"");
}

}  // namespace

ExperimentConfig parseConfig(const json& doc) {
  requireKeys(doc,
              {"system", "initialState", "fixedInitialSite", "enumerationCap", "walk",
               "spectrum", "measure", "integrate", "check"},
              "config");
  ExperimentConfig config;
  if (doc.contains("system")) config.system = parseSystem(doc["system"]);
  if (doc.contains("initialState")) {
    config.initialState = parseComplexVector(doc["initialState"], "initialState");
  }
  if (doc.contains("fixedInitialSite")) {
    config.fixedInitialSite = parseInt(doc["fixedInitialSite"], "fixedInitialSite");
  }
  if (doc.contains("enumerationCap")) {
    const auto cap = doc["enumerationCap"].get<std::int64_t>();
    if (cap < 1) throw ConfigError("enumerationCap must be positive");
    config.enumerationCap = static_cast<std::uint64_t>(cap);
  }

  if (doc.contains("walk")) {
    requireKeys(doc["walk"], {"tMax", "directCap"}, "walk");
    WalkBlock block;
    if (doc["walk"].contains("tMax")) block.tMax = parseInt(doc["walk"]["tMax"], "walk.tMax");
    if (doc["walk"].contains("directCap")) {
      block.directCap = parseInt(doc["walk"]["directCap"], "walk.directCap");
    }
    if (block.tMax < 0) throw ConfigError("walk.tMax must be >= 0");
    config.walk = block;
  }

  if (doc.contains("spectrum")) {
    requireKeys(doc["spectrum"], {"rank"}, "spectrum");
    if (!doc["spectrum"].contains("rank")) throw ConfigError("spectrum: missing rank");
    SpectrumBlock block;
    block.rank = parseInt(doc["spectrum"]["rank"], "spectrum.rank");
    if (block.rank < 0) throw ConfigError("spectrum.rank must be >= 0");
    config.spectrum = block;
  }

  if (doc.contains("measure")) {
    const json& m = doc["measure"];
    requireKeys(m, {"events", "tMax", "window", "tol"}, "measure");
    if (!m.contains("events") || !m["events"].is_array() || m["events"].empty()) {
      throw ConfigError("measure: needs a nonempty \"events\" array");
    }
    MeasureBlock block;
    for (std::size_t k = 0; k < m["events"].size(); ++k) {
      block.events.push_back(
          parseEvent(m["events"][k], "measure.events[" + std::to_string(k) + "]"));
    }
    if (m.contains("tMax")) block.tMax = parseInt(m["tMax"], "measure.tMax");
    if (m.contains("window")) block.window = parseInt(m["window"], "measure.window");
    if (m.contains("tol")) block.tol = parseReal(m["tol"], "measure.tol");
    if (block.window < 2) throw ConfigError("measure.window must be >= 2");
    config.measure = block;
  }

  if (doc.contains("integrate")) {
    const json& block = doc["integrate"];
    requireKeys(block,
                {"space", "f", "rho", "rank", "values", "position", "tMax", "window",
                 "tol"},
                "integrate");
    IntegrateBlock parsed;
    if (block.contains("space")) {
      requireKeys(block["space"], {"weights"}, "integrate.space");
      if (!block["space"].contains("weights")) {
        throw ConfigError("integrate.space: missing weights");
      }
      SpaceIntegrateSpec spec;
      for (const auto& w : block["space"]["weights"]) {
        spec.weights.push_back(parseReal(w, "integrate.space.weights"));
      }
      if (!block.contains("f")) throw ConfigError("integrate: space mode needs \"f\"");
      for (const auto& v : block["f"]) spec.f.push_back(parseReal(v, "integrate.f"));
      if (!block.contains("rho")) throw ConfigError("integrate: space mode needs \"rho\"");
      spec.rho = parseComplexMatrix(block["rho"], "integrate.rho");
      parsed.space = std::move(spec);
    } else if (block.contains("rank") || block.contains("position")) {
      ProcessIntegrateSpec spec;
      if (block.contains("position")) {
        spec.position = parseInt(block["position"], "integrate.position");
        spec.rank = *spec.position;
      }
      if (block.contains("rank")) spec.rank = parseInt(block["rank"], "integrate.rank");
      if (spec.rank < 0) throw ConfigError("integrate.rank must be >= 0");
      if (block.contains("values")) {
        if (spec.position) {
          throw ConfigError("integrate: give either \"values\" or \"position\"");
        }
        for (const auto& v : block["values"]) {
          spec.values.push_back(parseReal(v, "integrate.values"));
        }
      } else if (!spec.position) {
        throw ConfigError("integrate: process mode needs \"values\" or \"position\"");
      }
      spec.tMax = block.contains("tMax") ? parseInt(block["tMax"], "integrate.tMax")
                                         : spec.rank + 8;
      if (block.contains("window")) {
        spec.window = parseInt(block["window"], "integrate.window");
      }
      if (block.contains("tol")) spec.tol = parseReal(block["tol"], "integrate.tol");
      parsed.process = std::move(spec);
    } else {
      throw ConfigError("integrate: needs either \"space\" or \"rank\"/\"position\"");
    }
    config.integrate = parsed;
  }

  if (doc.contains("check")) {
    requireKeys(doc["check"], {"tMax", "samples"}, "check");
    CheckBlock block;
    if (doc["check"].contains("tMax")) {
      block.tMax = parseInt(doc["check"]["tMax"], "check.tMax");
    }
    if (doc["check"].contains("samples")) {
      const auto s = doc["check"]["samples"].get<std::int64_t>();
      if (s < 1) throw ConfigError("check.samples must be positive");
      block.samples = static_cast<std::uint64_t>(s);
    }
    config.check = block;
  }

  return config;
}

ExperimentConfig loadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parseConfig(doc);
}

FiniteUnitarySystem buildSystem(const ExperimentConfig& config) {
  if (!config.system) throw ConfigError("this command needs a \"system\" block");
  try {
    if (config.system->stationary) {
      return FiniteUnitarySystem::stationary(*config.system->stationary);
    }
    return FiniteUnitarySystem::fromSteps(config.system->steps);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("system: ") + e.what());
  }
}

InitialState buildInitialState(const ExperimentConfig& config) {
  if (!config.initialState) throw ConfigError("this command needs \"initialState\"");
  try {
    return InitialState(*config.initialState);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("initialState: ") + e.what());
  }
}

QProcess buildProcess(const ExperimentConfig& config) {
  const FiniteUnitarySystem sys = buildSystem(config);
  const InitialState psi = buildInitialState(config);
  if (psi.dim() != sys.dim()) {
    throw ConfigError("initialState dimension disagrees with system.m");
  }
  try {
    return QProcess(sys, psi, config.fixedInitialSite, config.enumerationCap);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("process: ") + e.what());
  }
}

std::map<std::pair<int, std::uint64_t>, double> loadCoverageTable(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open coverage table: " + path);
  std::map<std::pair<int, std::uint64_t>, double> entries;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string rankField, indexField, coverageField;
    if (!std::getline(row, rankField, ',') || !std::getline(row, indexField, ',') ||
        !std::getline(row, coverageField)) {
      throw ConfigError(path + ":" + std::to_string(lineNo) +
                        ": expected rank,path-index,coverage");
    }
    try {
      const int rank = std::stoi(rankField);
      const std::uint64_t index = std::stoull(indexField);
      const double coverage = std::stod(coverageField);
      entries[{rank, index}] = coverage;
    } catch (const std::exception&) {
      throw ConfigError(path + ":" + std::to_string(lineNo) + ": malformed row");
    }
  }
  return entries;
}

}  // namespace qproc::cli

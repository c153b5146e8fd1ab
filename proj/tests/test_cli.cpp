#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"

using namespace qproc;
using namespace qproc::cli;
using nlohmann::json;

namespace {

const char* kWalkSystem = R"({
  "m": 2,
  "stationary": [
    [[0.7071067811865476, 0], [0, 0.7071067811865476]],
    [[0, 0.7071067811865476], [0.7071067811865476, 0]]
  ]
})";

json walkConfigJson() {
  json doc;
  doc["system"] = json::parse(kWalkSystem);
  doc["initialState"] = {{1, 0}, {0, 0}};
  doc["fixedInitialSite"] = 0;
  return doc;
}

struct RunResult {
  int exitCode;
  std::string output;
};

RunResult runBinary(const std::string& args) {
  const std::string cmd = std::string(QPROC_BIN) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string output;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) {
    output.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

std::filesystem::path writeTempFile(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("config parser rejects unknown keys") {
  json doc = walkConfigJson();
  doc["surprise"] = 1;
  CHECK_THROWS_AS(parseConfig(doc), ConfigError);

  json nested = walkConfigJson();
  nested["system"]["extra"] = true;
  CHECK_THROWS_AS(parseConfig(nested), ConfigError);

  json walkBlock = walkConfigJson();
  walkBlock["walk"] = {{"tMax", 4}, {"oops", 1}};
  CHECK_THROWS_AS(parseConfig(walkBlock), ConfigError);
}

TEST_CASE("config parser validates shapes") {
  json doc = walkConfigJson();
  doc["system"]["stationary"] = {{{1, 0}}, {{0, 1}}};  // not square
  CHECK_THROWS_AS(parseConfig(doc), ConfigError);

  json badComplex = walkConfigJson();
  badComplex["initialState"] = {{1, 0, 0}, {0, 0}};
  CHECK_THROWS_AS(parseConfig(badComplex), ConfigError);

  json bothSystems = walkConfigJson();
  bothSystems["system"]["steps"] = {json::parse(kWalkSystem)["stationary"]};
  CHECK_THROWS_AS(parseConfig(bothSystems), ConfigError);

  // a valid config round-trips into core objects
  const ExperimentConfig config = parseConfig(walkConfigJson());
  const QProcess proc = buildProcess(config);
  CHECK(proc.m() == 2);
  CHECK(proc.fixedInitialSite() == 0);
}

TEST_CASE("non-unitary systems are config errors") {
  json doc = walkConfigJson();
  doc["system"]["stationary"] = {{{1, 0}, {0, 0}}, {{0, 0}, {0.5, 0}}};
  const ExperimentConfig config = parseConfig(doc);
  CHECK_THROWS_AS(buildSystem(config), ConfigError);
}

TEST_CASE("walk command emits the exact period-4 table") {
  json doc = walkConfigJson();
  doc["walk"] = {{"tMax", 8}, {"directCap", 8}};
  const ExperimentConfig config = parseConfig(doc);

  std::ostringstream out;
  const int code = runWalk(config, CommandOptions{}, out);
  CHECK(code == 0);

  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line ==
        "t,G_re,G_im,F_re,F_im,mu_E_exact,mu_E,mu_G_exact,mu_G,"
        "mu_E_direct,mu_G_direct,abs_diff_E,abs_diff_G,nu_E");
  std::getline(lines, line);
  CHECK(line.rfind("0,0,0,1,0,0,0,1,1,", 0) == 0);
  std::getline(lines, line);
  CHECK(line.rfind("1,0,1,1,0,1/2,0.5,1/2,0.5,", 0) == 0);
  std::getline(lines, line);
  CHECK(line.rfind("2,0,2,0,0,1,1,0,0,", 0) == 0);
  std::getline(lines, line);
  CHECK(line.rfind("3,0,2,-2,0,1/2,0.5,1/2,0.5,", 0) == 0);

  // byte-identical on a second run
  std::ostringstream again;
  runWalk(config, CommandOptions{}, again);
  CHECK(out.str() == again.str());
}

TEST_CASE("walk command leaves fast columns empty off the canonical system") {
  json doc = walkConfigJson();
  const double s = 0.7071067811865476;
  doc["system"]["stationary"] = {{{s, 0}, {s, 0}}, {{s, 0}, {-s, 0}}};
  doc["walk"] = {{"tMax", 2}, {"directCap", 2}};
  const ExperimentConfig config = parseConfig(doc);
  std::ostringstream out;
  CHECK(runWalk(config, CommandOptions{}, out) == 0);
  std::istringstream lines(out.str());
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(row.rfind("0,,,,,,,,,", 0) == 0);  // no G/F, no exact columns

  CommandOptions jsonOpts;
  jsonOpts.json = true;
  std::ostringstream jsonOut;
  runWalk(config, jsonOpts, jsonOut);
  const json parsed = json::parse(jsonOut.str());
  CHECK(parsed["fastPath"] == false);
  CHECK(parsed["rows"][1]["muEDirect"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("walk command rejects non-two-site systems") {
  json doc = walkConfigJson();
  doc["system"] = {{"m", 3},
                   {"stationary", {{{1, 0}, {0, 0}, {0, 0}},
                                   {{0, 0}, {1, 0}, {0, 0}},
                                   {{0, 0}, {0, 0}, {1, 0}}}}};
  doc["initialState"] = {{1, 0}, {0, 0}, {0, 0}};
  doc.erase("fixedInitialSite");
  const ExperimentConfig config = parseConfig(doc);
  std::ostringstream out;
  CHECK_THROWS_AS(runWalk(config, CommandOptions{}, out), ConfigError);
}

TEST_CASE("measure command reports families and cylinders") {
  json doc = walkConfigJson();
  doc["measure"] = {{"events",
                     {{{"type", "family"}, {"name", "visitsSite"}, {"site", 0}},
                      {{"type", "cylinder"}, {"rank", 2}, {"members", {1, 3}}}}},
                    {"tMax", 12}};
  const ExperimentConfig config = parseConfig(doc);
  CommandOptions opts;
  opts.json = true;
  std::ostringstream out;
  CHECK(runMeasure(config, opts, out) == 0);
  const json parsed = json::parse(out.str());
  REQUIRE(parsed["rows"].size() == 2);
  CHECK(parsed["rows"][0]["limit"].get<double>() == doctest::Approx(1.0));
  CHECK(parsed["rows"][0]["verdict"] == "suitable");
  CHECK(parsed["rows"][1]["limit"].get<double>() == doctest::Approx(1.0));
  CHECK(parsed["rows"][1]["nuClassical"]["num"] == 1);
  CHECK(parsed["rows"][1]["nuClassical"]["den"] == 2);
}

TEST_CASE("integrate command in space mode cross-checks the tail sum") {
  json doc;
  doc["integrate"] = {{"space", {{"weights", {0.25, 0.25, 0.25, 0.25}}}},
                      {"f", {1.0, -0.5, 2.0, 0.0}},
                      {"rho",
                       {{{0.5, 0}, {0, 0}, {0, 0}, {0, 0}},
                        {{0, 0}, {0.5, 0}, {0, 0}, {0, 0}},
                        {{0, 0}, {0, 0}, {0, 0}, {0, 0}},
                        {{0, 0}, {0, 0}, {0, 0}, {0, 0}}}}};
  const ExperimentConfig config = parseConfig(doc);
  CommandOptions opts;
  opts.json = true;
  std::ostringstream out;
  CHECK(runIntegrate(config, opts, out) == 0);
  const json parsed = json::parse(out.str());
  CHECK(parsed["absDiff"].get<double>() <= 1e-10);
  // diagonal ρ on the orthonormal basis: tr(ρ f̂) = Σ ρ_ii f̂_ii
  // with f̂_ii = ν_i f(i) on the diagonal: 0.5·0.25·1 + 0.5·0.25·(-0.5)
  CHECK(parsed["qIntegral"].get<double>() == doctest::Approx(0.0625).epsilon(1e-10));
}

TEST_CASE("integrate command in process mode matches the walk table") {
  json doc = walkConfigJson();
  doc["integrate"] = {{"position", 6}};
  const ExperimentConfig config = parseConfig(doc);
  CommandOptions opts;
  opts.json = true;
  std::ostringstream out;
  CHECK(runIntegrate(config, opts, out) == 0);
  const json parsed = json::parse(out.str());
  CHECK(parsed["integral"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(parsed["verdict"] == "suitable");
}

TEST_CASE("binary end to end: exit codes and determinism") {
  const auto goodCfg =
      writeTempFile("qproc_walk_ok.json",
                    walkConfigJson().dump() /* no walk block: defaults apply */);
  const auto first = runBinary("walk --config " + goodCfg.string() + " --t-max 8");
  CHECK(first.exitCode == 0);
  const auto second = runBinary("walk --config " + goodCfg.string() + " --t-max 8");
  CHECK(second.output == first.output);
  CHECK(first.output.find("2,0,2,0,0,1,1,0,0,") != std::string::npos);

  // exit 2: schema violation
  json bad = walkConfigJson();
  bad["unknownKey"] = 1;
  const auto badCfg = writeTempFile("qproc_walk_bad.json", bad.dump());
  CHECK(runBinary("walk --config " + badCfg.string()).exitCode == 2);

  // exit 2: missing required block
  const auto noBlock = writeTempFile("qproc_no_block.json", walkConfigJson().dump());
  CHECK(runBinary("spectrum --config " + noBlock.string()).exitCode == 2);

  // exit 3: enumeration budget
  json tiny = walkConfigJson();
  tiny["enumerationCap"] = 16;
  tiny["spectrum"] = {{"rank", 10}};
  const auto tinyCfg = writeTempFile("qproc_tiny_cap.json", tiny.dump());
  CHECK(runBinary("spectrum --config " + tinyCfg.string()).exitCode == 3);

  // exit 4: non-convergent coverage table under --require-suitable
  std::string tableBody = "# rank,path-index,coverage\n";
  for (int rank = 1; rank <= 9; rank += 2) {
    for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << (rank + 1)); ++idx) {
      tableBody += std::to_string(rank) + "," + std::to_string(idx) + ",1\n";
    }
  }
  const auto tablePath = writeTempFile("qproc_flicker.csv", tableBody);
  json flicker = walkConfigJson();
  flicker["measure"] = {{"events",
                         {{{"type", "coverageTable"},
                           {"file", tablePath.string()},
                           {"name", "flicker"},
                           {"maxRank", 9}}}},
                        {"tMax", 9}};
  const auto flickerCfg = writeTempFile("qproc_flicker.json", flicker.dump());
  CHECK(runBinary("measure --config " + flickerCfg.string() + " --require-suitable")
            .exitCode == 4);
  // without the flag the verdict is reported but the run succeeds
  const auto soft = runBinary("measure --config " + flickerCfg.string());
  CHECK(soft.exitCode == 0);
  CHECK(soft.output.find("not-converged") != std::string::npos);

  // check subcommand runs with defaults
  const auto check = runBinary("check --config " + goodCfg.string() + " --t-max 3");
  CHECK(check.exitCode == 0);
  CHECK(check.output.find("rank,pairs_checked,exhaustive,max_residual") == 0);
}

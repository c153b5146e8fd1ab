#include "commands.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cstdio>
#include <ostream>
#include <vector>

#include "qproc/quantization.hpp"
#include "qproc/walk.hpp"

namespace qproc::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

json rationalJson(const Rational& r) {
  return json{{"num", r.num()}, {"den", r.den()}, {"value", r.toDouble()}};
}

const char* verdictName(SuitabilityVerdict v) {
  switch (v) {
    case SuitabilityVerdict::Suitable: return "suitable";
    case SuitabilityVerdict::NotConverged: return "not-converged";
    default: return "budget-exhausted";
  }
}

const char* kindName(EventKind k) {
  switch (k) {
    case EventKind::Cylinder: return "cylinder";
    case EventKind::Tail: return "tail";
    case EventKind::Countable: return "countable";
    default: return "complement";
  }
}

bool matchesCanonicalTwoSiteWalk(const ExperimentConfig& config) {
  if (!config.system || config.system->m != 2 || !config.system->stationary) return false;
  if (!config.initialState || config.initialState->size() != 2) return false;
  if (!config.fixedInitialSite || *config.fixedInitialSite != 0) return false;
  const ComplexMatrix canonical = twoSiteHopUnitary();
  if ((*config.system->stationary - canonical).cwiseAbs().maxCoeff() > 1e-12) {
    return false;
  }
  ComplexVector e0(2);
  e0 << Complex(1.0, 0.0), Complex(0.0, 0.0);
  return (*config.initialState - e0).cwiseAbs().maxCoeff() <= 1e-12;
}

FamilyPtr familyFromSpec(const FamilyEventSpec& spec, int m) {
  auto needSite = [&]() {
    if (!spec.site) throw ConfigError("family \"" + spec.name + "\" needs \"site\"");
    return *spec.site;
  };
  auto needTime = [&]() {
    if (!spec.time) throw ConfigError("family \"" + spec.name + "\" needs \"time\"");
    return *spec.time;
  };
  auto paths = [&]() {
    if (spec.prefixes.empty()) {
      throw ConfigError("family \"" + spec.name + "\" needs prefix data");
    }
    std::vector<NPath> out;
    for (const auto& p : spec.prefixes) out.emplace_back(p);
    return out;
  };
  try {
    if (spec.name == "visitsSite") return visitsSite(m, needSite());
    if (spec.name == "neverVisitsSite") return neverVisitsSite(m, needSite());
    if (spec.name == "firstVisitAt") return firstVisitAt(m, needSite(), needTime());
    if (spec.name == "positionAt") return positionAt(m, needTime(), needSite());
    if (spec.name == "singleton") {
      auto p = paths();
      if (p.size() != 1) throw ConfigError("singleton takes exactly one prefix");
      return singletonPath(m, std::move(p.front()));
    }
    if (spec.name == "countable") return countableSet(m, paths());
    if (spec.name == "complementOfCountable") return complementOfCountable(m, paths());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("family \"" + spec.name + "\": " + e.what());
  }
  throw ConfigError("unknown family \"" + spec.name + "\"");
}

}  // namespace

int runWalk(const ExperimentConfig& config, const CommandOptions& opts, std::ostream& out) {
  if (!config.system || !config.initialState) {
    throw ConfigError("walk needs \"system\" and \"initialState\"");
  }
  if (config.system->m != 2) throw ConfigError("walk needs a two-site system");
  const WalkBlock block = config.walk.value_or(WalkBlock{});
  const int tMax = opts.tMax.value_or(block.tMax);
  if (tMax < 0) throw ConfigError("walk tMax must be >= 0");
  const bool fastPath = matchesCanonicalTwoSiteWalk(config);

  const QProcess proc = buildProcess(config);
  json rows = json::array();
  std::vector<std::string> csv;
  for (int t = 0; t <= tMax; ++t) {
    std::optional<double> muEDirect, muGDirect;
    if (t <= block.directCap &&
        proc.domain(t).size() <= config.enumerationCap) {
      muEDirect = directPositionMeasure(proc, t, 1);
      muGDirect = directPositionMeasure(proc, t, 0);
    }
    std::string line = std::to_string(t);
    json row{{"t", t}};
    if (fastPath) {
      const GFPair gf = gfRecursion(t);
      const Rational muE = walkSiteOneMeasure(t);
      const Rational muG = walkSiteZeroMeasure(t);
      const Rational nuE = (t == 0) ? Rational(0) : Rational(1, 2);
      line += "," + std::to_string(gf.g.re) + "," + std::to_string(gf.g.im) + "," +
              std::to_string(gf.f.re) + "," + std::to_string(gf.f.im);
      line += "," + muE.str() + "," + fmt(muE.toDouble());
      line += "," + muG.str() + "," + fmt(muG.toDouble());
      line += (muEDirect ? "," + fmt(*muEDirect) : ",");
      line += (muGDirect ? "," + fmt(*muGDirect) : ",");
      line += (muEDirect ? "," + fmt(std::abs(muE.toDouble() - *muEDirect)) : ",");
      line += (muGDirect ? "," + fmt(std::abs(muG.toDouble() - *muGDirect)) : ",");
      line += "," + nuE.str();
      row["G"] = {gf.g.re, gf.g.im};
      row["F"] = {gf.f.re, gf.f.im};
      row["muE"] = rationalJson(muE);
      row["muG"] = rationalJson(muG);
      row["nuE"] = rationalJson(nuE);
      if (muEDirect) row["muEDirect"] = *muEDirect;
      if (muGDirect) row["muGDirect"] = *muGDirect;
    } else {
      line += ",,,,";       // no G/F columns off the canonical system
      line += ",,";         // no exact muE
      line += ",,";         // no exact muG
      line += (muEDirect ? "," + fmt(*muEDirect) : ",");
      line += (muGDirect ? "," + fmt(*muGDirect) : ",");
      line += ",,";         // no diffs
      line += ",";          // no nu column
      if (muEDirect) row["muEDirect"] = *muEDirect;
      if (muGDirect) row["muGDirect"] = *muGDirect;
    }
    rows.push_back(std::move(row));
    csv.push_back(std::move(line));
  }

  if (opts.json) {
    json doc{{"command", "walk"}, {"fastPath", fastPath}, {"tMax", tMax},
             {"directCap", block.directCap}, {"rows", rows}};
    out << doc.dump(2) << "\n";
  } else {
    out << "t,G_re,G_im,F_re,F_im,mu_E_exact,mu_E,mu_G_exact,mu_G,"
           "mu_E_direct,mu_G_direct,abs_diff_E,abs_diff_G,nu_E\n";
    for (const auto& line : csv) out << line << "\n";
  }
  return 0;
}

int runSpectrum(const ExperimentConfig& config, const CommandOptions& opts,
                std::ostream& out) {
  if (!config.spectrum) throw ConfigError("spectrum needs a \"spectrum\" block");
  const QProcess proc = buildProcess(config);
  const int rank = config.spectrum->rank;
  const auto state = proc.state(rank);
  const SpectralDecomposition spec = spectrum(*state);

  std::optional<double> denseLambdaGap;
  std::optional<double> denseResidual;
  if (opts.denseCheck) {
    const ComplexMatrix dense = denseMatrix(*state);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(dense);
    std::vector<double> nonzero;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
      if (solver.eigenvalues()(k) > 1e-12) nonzero.push_back(solver.eigenvalues()(k));
    }
    std::vector<double> reported;
    for (const auto& pair : spec.pairs) reported.push_back(pair.eigenvalue);
    std::sort(nonzero.begin(), nonzero.end());
    std::sort(reported.begin(), reported.end());
    double gap = 0.0;
    if (nonzero.size() != reported.size()) {
      gap = std::numeric_limits<double>::infinity();
    } else {
      for (std::size_t k = 0; k < nonzero.size(); ++k) {
        gap = std::max(gap, std::abs(nonzero[k] - reported[k]));
      }
    }
    double residual = 0.0;
    for (const auto& pair : spec.pairs) {
      ComplexVector v = ComplexVector::Zero(dense.rows());
      for (std::size_t k = 0; k < pair.supportOrdinals.size(); ++k) {
        v(static_cast<Eigen::Index>(pair.supportOrdinals[k])) =
            pair.values(static_cast<Eigen::Index>(k));
      }
      residual = std::max(residual,
                          (dense * v - pair.eigenvalue * v).cwiseAbs().maxCoeff());
    }
    denseLambdaGap = gap;
    denseResidual = residual;
  }

  if (opts.json) {
    json pairs = json::array();
    for (const auto& pair : spec.pairs) {
      pairs.push_back({{"site", pair.finalSite},
                       {"lambda", pair.eigenvalue},
                       {"supportSize", pair.supportOrdinals.size()}});
    }
    json doc{{"command", "spectrum"}, {"rank", rank}, {"pairs", pairs},
             {"lambdaSum", spec.eigenvalueSum()},
             {"dimension", state->domain().size()}};
    if (denseLambdaGap) {
      doc["denseCheck"] = {{"maxLambdaGap", *denseLambdaGap},
                           {"maxEigenResidual", *denseResidual}};
    }
    out << doc.dump(2) << "\n";
  } else {
    out << "site,lambda,support_size\n";
    for (const auto& pair : spec.pairs) {
      out << pair.finalSite << "," << fmt(pair.eigenvalue) << ","
          << pair.supportOrdinals.size() << "\n";
    }
    out << "sum," << fmt(spec.eigenvalueSum()) << "," << state->domain().size() << "\n";
    if (denseLambdaGap) {
      out << "dense_check," << fmt(*denseLambdaGap) << "," << fmt(*denseResidual)
          << "\n";
    }
  }
  return 0;
}

int runMeasure(const ExperimentConfig& config, const CommandOptions& opts,
               std::ostream& out) {
  if (!config.measure) throw ConfigError("measure needs a \"measure\" block");
  const QProcess proc = buildProcess(config);
  const MeasureBlock& block = *config.measure;
  const int tMax = opts.tMax.value_or(block.tMax);
  const double tol = opts.tol.value_or(block.tol);

  bool allSuitable = true;
  json rows = json::array();
  std::vector<std::string> csv;
  for (std::size_t k = 0; k < block.events.size(); ++k) {
    std::string name;
    std::string kind;
    SuitabilityReport rep;
    std::optional<Rational> nu;

    if (const auto* cyl = std::get_if<CylinderEventSpec>(&block.events[k])) {
      CylinderEvent event = [&] {
        try {
          return CylinderEvent::fromIndices(proc.domain(cyl->rank), cyl->members);
        } catch (const std::invalid_argument& e) {
          throw ConfigError("measure.events[" + std::to_string(k) + "]: " + e.what());
        }
      }();
      name = "cylinder@" + std::to_string(cyl->rank);
      kind = "cylinder";
      nu = event.classicalMeasure();
      rep = evaluateSuitability(proc, event, std::max(tMax, cyl->rank + block.window),
                                block.window, tol);
    } else if (const auto* fam = std::get_if<FamilyEventSpec>(&block.events[k])) {
      const FamilyPtr family = familyFromSpec(*fam, proc.m());
      name = family->name();
      kind = kindName(family->kind());
      nu = family->classicalMeasure();
      rep = evaluateSuitability(proc, *family, tMax, block.window, tol);
    } else {
      const auto& table = std::get<TableEventSpec>(block.events[k]);
      const FamilyPtr family = [&] {
        try {
          return coverageTableFamily(proc.m(), table.name,
                                     loadCoverageTable(table.file), table.maxRank);
        } catch (const std::invalid_argument& e) {
          throw ConfigError("measure.events[" + std::to_string(k) + "]: " + e.what());
        }
      }();
      name = table.name;
      kind = "table";
      rep = evaluateSuitability(proc, *family, tMax, block.window, tol);
    }

    allSuitable = allSuitable && rep.verdict == SuitabilityVerdict::Suitable;
    std::string line = name + "," + kind + ",";
    line += rep.limit ? fmt(*rep.limit) : "";
    line += std::string(",") + verdictName(rep.verdict);
    line += "," + fmt(rep.trailingSpread);
    line += "," + (nu ? nu->str() : "");
    csv.push_back(std::move(line));

    json row{{"event", name},
             {"kind", kind},
             {"verdict", verdictName(rep.verdict)},
             {"trailingSpread", rep.trailingSpread},
             {"firstRank", rep.firstRank},
             {"values", rep.values}};
    if (rep.limit) row["limit"] = *rep.limit;
    if (nu) row["nuClassical"] = rationalJson(*nu);
    rows.push_back(std::move(row));
  }

  if (opts.json) {
    json doc{{"command", "measure"}, {"tMax", tMax}, {"window", block.window},
             {"tol", tol}, {"rows", rows}};
    out << doc.dump(2) << "\n";
  } else {
    out << "event,kind,value,verdict,trailing_spread,nu_classical\n";
    for (const auto& line : csv) out << line << "\n";
  }
  if (opts.requireSuitable && !allSuitable) return 4;
  return 0;
}

int runIntegrate(const ExperimentConfig& config, const CommandOptions& opts,
                 std::ostream& out) {
  if (!config.integrate) throw ConfigError("integrate needs an \"integrate\" block");

  if (config.integrate->space) {
    const auto& spec = *config.integrate->space;
    if (spec.f.size() != spec.weights.size()) {
      throw ConfigError("integrate: \"f\" and space weights must have equal length");
    }
    try {
      const DiscreteMeasureSpace space(spec.weights);
      if (space.size() != static_cast<int>(spec.weights.size())) {
        throw ConfigError("integrate: zero-weight points are not representable here");
      }
      Eigen::VectorXd values(static_cast<Eigen::Index>(spec.f.size()));
      for (std::size_t i = 0; i < spec.f.size(); ++i) {
        values(static_cast<Eigen::Index>(i)) = spec.f[i];
      }
      const RandomVariable f(values);
      const StateOperator rho(spec.rho);
      const double viaTrace = qIntegral(rho, space, f);
      const double viaTail = tailSumIntegral(rho, space, f);
      if (opts.json) {
        json doc{{"command", "integrate"}, {"mode", "space"},
                 {"qIntegral", viaTrace}, {"tailSum", viaTail},
                 {"absDiff", std::abs(viaTrace - viaTail)}};
        out << doc.dump(2) << "\n";
      } else {
        out << "q_integral,tail_sum,abs_diff\n";
        out << fmt(viaTrace) << "," << fmt(viaTail) << ","
            << fmt(std::abs(viaTrace - viaTail)) << "\n";
      }
      return 0;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("integrate: ") + e.what());
    }
  }

  const auto& spec = *config.integrate->process;
  const QProcess proc = buildProcess(config);
  const PathDomain domain = proc.domain(spec.rank);
  Eigen::VectorXd values(static_cast<Eigen::Index>(domain.size()));
  if (spec.position) {
    for (std::uint64_t ord = 0; ord < domain.size(); ++ord) {
      values(static_cast<Eigen::Index>(ord)) = domain.finalSiteOf(ord);
    }
  } else {
    if (spec.values.size() != domain.size()) {
      throw ConfigError("integrate.values: expected " + std::to_string(domain.size()) +
                        " entries for rank " + std::to_string(spec.rank));
    }
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
      values(static_cast<Eigen::Index>(i)) = spec.values[i];
    }
  }
  const int tMax = opts.tMax.value_or(spec.tMax);
  const double tol = opts.tol.value_or(spec.tol);
  const auto rep = processIntegral(proc, spec.rank, RandomVariable(values), tMax,
                                   spec.window, tol);
  if (opts.json) {
    json doc{{"command", "integrate"}, {"mode", "process"}, {"rank", spec.rank},
             {"tMax", tMax}, {"verdict", verdictName(rep.verdict)},
             {"trailingSpread", rep.trailingSpread}, {"values", rep.values}};
    if (rep.limit) doc["integral"] = *rep.limit;
    out << doc.dump(2) << "\n";
  } else {
    out << "rank,integral,verdict,trailing_spread\n";
    out << spec.rank << "," << (rep.limit ? fmt(*rep.limit) : "") << ","
        << verdictName(rep.verdict) << "," << fmt(rep.trailingSpread) << "\n";
  }
  if (opts.requireSuitable && rep.verdict != SuitabilityVerdict::Suitable) return 4;
  return 0;
}

int runCheck(const ExperimentConfig& config, const CommandOptions& opts,
             std::ostream& out) {
  const CheckBlock block = config.check.value_or(CheckBlock{});
  const QProcess proc = buildProcess(config);
  const int tMax = opts.tMax.value_or(block.tMax);
  if (tMax < 0) throw ConfigError("check tMax must be >= 0");

  json rows = json::array();
  std::vector<std::string> csv;
  for (int t = 0; t <= tMax; ++t) {
    const auto rep = verifyConsistency(proc, t, block.samples, opts.seed);
    csv.push_back(std::to_string(t) + "," + std::to_string(rep.pairsChecked) + "," +
                  (rep.exhaustive ? "1" : "0") + "," + fmt(rep.maxResidual));
    rows.push_back({{"rank", t},
                    {"pairsChecked", rep.pairsChecked},
                    {"exhaustive", rep.exhaustive},
                    {"maxResidual", rep.maxResidual}});
  }
  if (opts.json) {
    json doc{{"command", "check"}, {"tMax", tMax}, {"samples", block.samples},
             {"seed", opts.seed}, {"rows", rows}};
    out << doc.dump(2) << "\n";
  } else {
    out << "rank,pairs_checked,exhaustive,max_residual\n";
    for (const auto& line : csv) out << line << "\n";
  }
  return 0;
}

}  // namespace qproc::cli

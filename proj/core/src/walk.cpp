#include "qproc/walk.hpp"

#include <cmath>
#include <stdexcept>

#include "qproc/pathspace.hpp"

namespace qproc {

ComplexMatrix twoSiteHopUnitary() {
  ComplexMatrix u(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  u << Complex(s, 0.0), Complex(0.0, s), Complex(0.0, s), Complex(s, 0.0);
  return u;
}

QProcess twoSiteWalkProcess(std::uint64_t cap) {
  return QProcess(FiniteUnitarySystem::stationary(twoSiteHopUnitary()),
                  InitialState::basisState(2, 0), 0, cap);
}

GFPair gfRecursion(int t) {
  if (t < 0) throw std::invalid_argument("time must be >= 0");
  GFPair cur{GaussianInt{0, 0}, GaussianInt{1, 0}};  // G(0) = 0, F(0) = 1
  const GaussianInt i{0, 1};
  for (int k = 0; k < t; ++k) {
    cur = GFPair{cur.g + i * cur.f, cur.f + i * cur.g};
  }
  return cur;
}

GFPair gfClosedForm(int t) {
  if (t < 0) throw std::invalid_argument("time must be >= 0");
  const int j = t % 4;
  const int quarters = t / 4;
  GFPair seed = gfRecursion(j);
  GaussianInt scale{1, 0};
  const GaussianInt minusFour{-4, 0};
  for (int k = 0; k < quarters; ++k) scale = scale * minusFour;
  return GFPair{scale * seed.g, scale * seed.f};
}

GFPair gfFromFlipVector(int t) {
  const std::vector<int> c = twoSiteFlipVector(t);
  GFPair out{GaussianInt{0, 0}, GaussianInt{0, 0}};
  for (std::size_t j = 0; j < c.size(); ++j) {
    const GaussianInt term = iPower(c[j]);
    if (j % 2 == 0) out.f = out.f + term;
    else out.g = out.g + term;
  }
  return out;
}

Rational walkSiteOneMeasure(int t) {
  return Rational(gfRecursion(t).g.normSq(), checkedIntPow(2, t));
}

Rational walkSiteZeroMeasure(int t) {
  return Rational(gfRecursion(t).f.normSq(), checkedIntPow(2, t));
}

double directPositionMeasure(const QProcess& proc, int t, int site) {
  const auto state = proc.state(t);
  const CylinderEvent event = CylinderEvent::fromPredicate(
      state->domain(), [&](const NPath& p) { return p.sites.back() == site; });
  return qMeasure(*state, event);
}

std::vector<WalkRow> walkTable(int tMax, int directCap, std::uint64_t cap) {
  if (tMax < 0) throw std::invalid_argument("tMax must be >= 0");
  QProcess proc = twoSiteWalkProcess(cap);
  std::vector<WalkRow> rows;
  rows.reserve(static_cast<std::size_t>(tMax) + 1);
  for (int t = 0; t <= tMax; ++t) {
    WalkRow row;
    row.t = t;
    const GFPair gf = gfRecursion(t);
    row.g = gf.g;
    row.f = gf.f;
    row.muE = Rational(gf.g.normSq(), checkedIntPow(2, t));
    row.muG = Rational(gf.f.normSq(), checkedIntPow(2, t));
    row.nuE = (t == 0) ? Rational(0) : Rational(1, 2);
    if (t <= directCap && pathCount(2, t) / 2 <= cap) {
      row.muEDirect = directPositionMeasure(proc, t, 1);
      row.muGDirect = directPositionMeasure(proc, t, 0);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qproc

#pragma once

#include <cstdint>

#include "conesurf/shortest.hpp"

namespace conesurf {

struct SuiteResult {
  std::string name;
  bool pass = false;
  double metric = 0;
  std::string detail;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  double empiricalC = 0; // measured Lemma-1 clearance over the corpus
  bool allPass = true;
};

// The full invariant corpus: validation, Lemma-1 clearance (with the measured
// empirical C), Lemma-2 two-point intersections, tie symmetry, envelope
// containment, and oracle equivalence. Deterministic given the seed.
VerifyReport runVerify(std::uint64_t seed, bool faultInject, int oracleQueries = 12,
                       double epsStopScale = 1.0);

// Lemma-2 style intersection analysis of two enumerated representatives from
// one classRepresentatives/demo call (shared cell-id space).
struct IntersectionSummary {
  int isolatedInterior = 0;
  bool allIsolatedAtLargeCones = true;
};
IntersectionSummary analyzeIntersections(const Surface& s, const Representative& a,
                                         const Representative& b);

}  // namespace conesurf

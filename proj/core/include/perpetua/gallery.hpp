#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "perpetua/diagnostics.hpp"
#include "perpetua/laws.hpp"

namespace perpetua {

// ---------------------------------------------------------------------------
// Worked-example library: five built-in processes with closed-form reference
// values ("oracles") for the simulated statistics and a table of the
// condition verdicts each one is constructed to exhibit.
// ---------------------------------------------------------------------------

struct GalleryParams {
  double alpha = 0.5;  // contracting scalar, must lie in (0, 1) where used
  double beta = 2.0;   // expanding scalar, |beta| > 1 where used
  double c = 1.0;      // scalar fixed point of the E33 recursion, nonzero
};

// Closed-form reference value at step t.  `alphaPath[j-1]` is the realized
// top-frame scalar of M_j; only path-dependent entries read it, everything
// else is a pure function of t.
using GalleryOracle =
    std::function<double(int t, const std::vector<double>& alphaPath)>;

struct GalleryEntry {
  std::string id;           // E31, E32, E33, E34, or R34
  std::string description;  // one-line summary of what the entry exhibits
  GalleryParams params;
  bool exactDyadic = false;   // oracle comparisons are bitwise
  bool pathDependent = false; // oracles consume the realized scalar path
  PairLaw law;
  VectorLaw z0Law;
  GalleryOracle prodNormLogOracle;  // log ||M_t ... M_1||
  GalleryOracle wTermLogOracle;     // log |W_t|
  GalleryOracle yLogOracle;         // log Y_t (+inf at t = 1)
  std::vector<std::pair<std::string, Verdict>> expectedVerdicts;
};

std::vector<std::string> gallery_ids();

// Builds the entry for `id`, validating the parameter ranges the
// construction needs (E31/E34: 0 < alpha < 1; E32: 0 < alpha < 1 < beta;
// E33: |beta| > 1 and c != 0; R34 ignores the parameters — its scalar pair
// is pinned).  Unknown id or out-of-range parameters raise InvalidInput.
GalleryEntry build_gallery_entry(const std::string& id,
                                 const GalleryParams& params = {});

// ---------------------------------------------------------------------------
// Verification: simulate the entry, compare every recorded statistic against
// its oracle (bitwise for dyadic parameters, 1e-9 relative otherwise), then
// run the condition checkers and compare against the expected verdicts.
// An INCONCLUSIVE verdict never contradicts an expectation — it is flagged;
// HOLDS against expected FAILS (or vice versa) is a contradiction.
// ---------------------------------------------------------------------------

struct GalleryCheck {
  std::string name;
  bool passed = false;
  bool flagged = false;  // verdict came back INCONCLUSIVE: noted, not fatal
  std::string detail;
};

struct GalleryReport {
  std::string id;
  int horizonT = 0;
  int replications = 0;
  std::uint64_t seed = 0;
  std::vector<GalleryCheck> checks;
  bool allPassed = false;
  bool contradiction = false;  // some verdict check contradicted expectation
  std::string to_json() const;  // canonical (sorted keys, stable floats)
};

// Oracle comparisons run at the given horizon; the condition checkers run at
// max(horizonT, 128) and max(replications, 16) because rate estimation needs
// a longer window than oracle checking does.  Suffix statistics are required
// throughout, so horizonT obeys the simulation's suffix cap.
GalleryReport verify_gallery_entry(const GalleryEntry& entry, int horizonT,
                                   int replications, std::uint64_t seed,
                                   int threads = 1);

// ---------------------------------------------------------------------------
// Randomized search for laws where small-term probabilities decay while the
// term supremum still diverges — numerical evidence gathering only; a
// candidate list never resolves the underlying question, and every report
// says so.
// ---------------------------------------------------------------------------

struct SearchCandidate {
  int index = 0;          // draw index within the scan
  std::string lawJson;    // canonical law description (reproducible)
  double lambdaHat = 0.0; // estimated contraction rate (>= 0 for admission)
  double margin = 0.0;    // ranking score; higher = clearer separation
  ConditionReport conditionV;   // FAILS for every reported candidate
  ConditionReport conditionVI;  // HOLDS for every reported candidate
};

struct SearchReport {
  std::string disclaimer;  // fixed wording, always present
  int budget = 0;
  int evaluated = 0;  // candidates actually assessed
  int admitted = 0;   // candidates passing the rate admission screen
  std::uint64_t seed = 0;
  std::vector<SearchCandidate> candidates;  // ranked by margin, descending
  std::string to_json() const;
};

// familySpecJson is either {"fixed": [<pair-law spec>, ...]} — a finite list
// scanned in order — or {"generator": {"dim": d, "scalarMin": a,
// "scalarMax": b, "tuples": k, "z": <vector-law spec>}} — random coupled
// scalar tuples, log-uniform magnitudes, on the standard frame.  Candidates
// whose estimated rate is negative are rejected before the condition checks
// (products would collapse, which is outside the regime of interest).
// Malformed specs raise ConfigError; negative budget raises InvalidInput.
SearchReport search_open_problem(const std::string& familySpecJson, int budget,
                                 std::uint64_t seed, int threads = 1);

}  // namespace perpetua

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "perpetua/laws.hpp"
#include "perpetua/linalg.hpp"

namespace perpetua {

// suffix statistics replay every past product, an O(T^2) cost; cap the
// horizon rather than silently degrade
inline constexpr int kSuffixHorizonCap = 5000;

// default evaluation grid for tail probabilities P(Y_t > x); a finite
// surrogate for "every x > 0" — reports must carry that caveat
inline const std::vector<double> kDefaultXGrid = {1e-3, 1e-2, 1e-1, 1.0, 10.0};

struct RunConfig {
  PairLaw law;        // joint law of (M_t, Z_t)
  VectorLaw z0Law;    // law of the initial vector X_0
  int horizonT = 100;
  int replications = 1;
  bool suffixStats = false;  // compute yLog/uLog (O(T^2))
  std::uint64_t seed = 0;
};

// One time step of one replication.
//   x           X_t = M_t X_{t-1} + Z_t
//   vPartial    V_t = sum_{i<=t} (M_1 ... M_{i-1}) Z_i
//   wTermLog    log |W_t|,  W_t = (M_1 ... M_{t-1}) Z_t
//   prodNormLog log ||M_1 ... M_t||
//   yLog        log min_{k<t} |(M_k ... M_{t-1}) Z_t|   (+inf at t = 1)
//   uLog        log min_{k<t} ||M_k ... M_{t-1}||       (+inf at t = 1)
// Products of matrices are tracked in split log scale, so the log fields
// stay exact on dyadic fixtures and never overflow; x and vPartial live in
// linear scale (signed sums can cancel) and may overflow legitimately, in
// which case `overflow` is set and the run continues with IEEE sentinels.
struct RunRecord {
  int t = 0;
  Vec x;
  Vec vPartial;
  double wTermLog = 0.0;
  double prodNormLog = 0.0;
  double yLog = 0.0;
  double uLog = 0.0;
  bool overflow = false;
};

// Simulate replication `streamId` of the process under cfg. Deterministic
// function of (cfg.seed, streamId).
std::vector<RunRecord> run_trajectory(const RunConfig& cfg,
                                      std::uint64_t streamId);

// Cross-replication view. `reps[r][t-1]` is replication r at step t; the
// summary vectors are indexed t-1. pYgt[i][t-1] is the empirical
// P(Y_t > xGrid[i]).
struct Ensemble {
  int horizonT = 0;
  int replications = 0;
  bool suffixStats = false;
  std::vector<double> xGrid;
  std::vector<std::vector<RunRecord>> reps;
  std::vector<double> meanAbsW;
  std::vector<double> medianAbsW;
  std::vector<double> q90AbsW;
  std::vector<double> meanProdNormLog;
  std::vector<std::vector<double>> pYgt;
};

// Replications use streamIds 0..R-1 and may run on `threads` workers; the
// merge is by replication index, so the result is byte-identical for every
// thread count.
Ensemble run_ensemble(const RunConfig& cfg, int threads = 1,
                      std::vector<double> xGrid = kDefaultXGrid);

// columns: t, x_1..x_d, v_1..v_d, wTermLog, prodNormLog, yLog, uLog;
// infinities rendered as "inf"/"-inf", shortest round-trip decimals otherwise
void write_trajectory_csv(std::ostream& os,
                          const std::vector<RunRecord>& records);

}  // namespace perpetua

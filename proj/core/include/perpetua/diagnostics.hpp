#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "perpetua/laws.hpp"
#include "perpetua/linalg.hpp"
#include "perpetua/rng.hpp"
#include "perpetua/simulate.hpp"

namespace perpetua {

// Three-way outcome of an empirical or exact check.  INCONCLUSIVE means the
// evidence cleared neither the positive nor the negative bar; it is never an
// error.
enum class Verdict { HOLDS, FAILS, INCONCLUSIVE };

std::string_view to_string(Verdict v);

// One verdict about one named convergence condition, with the statistics that
// produced it and any caveats about what the method can and cannot see.
struct ConditionReport {
  std::string condition;
  Verdict verdict = Verdict::INCONCLUSIVE;
  std::string method = "monte-carlo";  // "exact" when analytically decided
  std::vector<std::pair<std::string, double>> statistics;
  std::vector<std::string> caveats;

  // Canonical JSON object: sorted keys, full-precision numbers.
  std::string to_json() const;
};

// Top Lyapunov exponent estimate: per-replication rate (1/T) log ||M_1...M_T||
// averaged across replications.  stdError is the cross-replication sample
// standard deviation of those rates — a dispersion measure for the rate
// itself, deliberately not divided by sqrt(R), so that +-3 stdError brackets a
// typical single path's rate.
struct LyapunovEstimate {
  double lambdaHat = 0.0;
  double stdError = 0.0;
  int horizonT = 0;
  int replications = 0;
  std::vector<std::string> caveats;
};

// Tunable decision thresholds shared by the condition checkers.
struct DiagnosticsOptions {
  double sigmaMultiplier = 3.0;  // z-score bar for interval decisions
  double quorum = 0.95;          // fraction of replications that must agree
  double tailTol = 1e-6;         // relative tail tolerance for sum/limit tests
  // log threshold below which a log-magnitude tail counts as decayed (~log 1e3)
  double decayLog = std::log(1000.0);
  double tailSumMax = 0.01;    // small-term probability tail-sum bar
  double persistLevel = 0.5;   // probability floor that marks a stuck tail
};

LyapunovEstimate estimate_lyapunov(const PairLaw& law, int horizonT,
                                   int replications, std::uint64_t seed,
                                   int threads = 1);

// Decides whether products M_1...M_t collapse to zero almost surely, from the
// Lyapunov estimate plus a decay-fraction fallback for zero-dispersion cases.
ConditionReport check_c0(const PairLaw& law, int horizonT, int replications,
                         std::uint64_t seed,
                         const DiagnosticsOptions& opts = {}, int threads = 1);

// Absolute summability of the terms W_t (first) and convergence of the
// partial sums V_t (second), judged on an already-simulated ensemble.
std::pair<ConditionReport, ConditionReport> check_condition_ii_iii(
    const Ensemble& ens, const DiagnosticsOptions& opts = {});

// W_t -> 0 (first) and sup_t |W_t| < infinity (second).
std::pair<ConditionReport, ConditionReport> check_condition_iv_v(
    const Ensemble& ens, const DiagnosticsOptions& opts = {});

// Small-term probability decay: needs an ensemble simulated with suffix
// statistics so the survival curves p_t(x) exist; throws ConfigError
// otherwise.  Judged on the finite x grid only (always caveated).
ConditionReport check_condition_vi(const Ensemble& ens,
                                   const DiagnosticsOptions& opts = {});

// Convergence of X_t in distribution, via an independent two-sample
// comparison of X at half and full horizon plus a growth-trend screen.
ConditionReport check_condition_i(const PairLaw& law, const VectorLaw& z0Law,
                                  int horizonT, int nSamples,
                                  std::uint64_t seed,
                                  const DiagnosticsOptions& opts = {},
                                  int threads = 1);

// Energy-distance two-sample test with a label-permutation p-value.
// Deterministic inputs give statistic exactly 0 and p-value 1.
struct EnergyTestResult {
  double statistic = 0.0;
  double pValue = 1.0;
};

EnergyTestResult energy_two_sample_test(const std::vector<Vec>& a,
                                        const std::vector<Vec>& b,
                                        RngStream& rng,
                                        int permutations = 200);

// Two-sample check that the state after t steps and the backward-accumulated
// sum of the same t steps share one distribution, as the recursion says they
// must.  Sides are drawn from disjoint streams, so the test has honest level.
struct IdentityTestResult {
  double statistic = 0.0;
  double pValue = 1.0;
  int nSamples = 0;
  int permutations = 0;
};

IdentityTestResult test_distributional_identity(const PairLaw& law,
                                                const VectorLaw& z0Law, int t,
                                                int nSamples,
                                                std::uint64_t seed,
                                                int permutations = 200);

// Empirical screens for the two moment regimes that govern almost-sure
// product decay: (first) E log||M_1|| exists and is negative; (second)
// E(minus-log-part) diverges while the ratio log+||M|| / A(log+||M||) stays
// integrable, with A the integrated survival function of -log||M_1||.
std::pair<ConditionReport, ConditionReport> check_moment_conditions(
    const PairLaw& law, int nSamples, std::uint64_t seed);

}  // namespace perpetua

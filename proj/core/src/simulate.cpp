#include "perpetua/simulate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <thread>

#include "perpetua/errors.hpp"
#include "perpetua/rng.hpp"
#include "perpetua/scaled.hpp"
#include "perpetua/suffix.hpp"

namespace perpetua {

namespace {

void validate(const RunConfig& cfg) {
  if (cfg.horizonT < 1) throw InvalidInput("run: horizon must be >= 1");
  if (cfg.replications < 1)
    throw InvalidInput("run: replications must be >= 1");
  if (cfg.law.dim() != cfg.z0Law.dim())
    throw DimensionError("run: law and z0 law dimensions differ");
  if (cfg.suffixStats && cfg.horizonT > kSuffixHorizonCap)
    throw ConfigError("run: suffix statistics are O(T^2); horizon capped at " +
                      std::to_string(kSuffixHorizonCap));
}

// order statistic with lower-nearest interpolation — deterministic
double quantile(std::vector<double> sorted, double p) {
  std::sort(sorted.begin(), sorted.end());
  const std::size_t idx =
      std::size_t(p * double(sorted.size() - 1));
  return sorted[idx];
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<RunRecord> run_trajectory(const RunConfig& cfg,
                                      std::uint64_t streamId) {
  validate(cfg);
  const int d = cfg.law.dim();
  const int T = cfg.horizonT;

  RngStream rng(cfg.seed, streamId);
  Vec x = cfg.z0Law.sample(rng);  // X_0
  Vec v(std::size_t(d), 0.0);
  ScaledProduct prefix(d);  // M_1 ... M_t, extended right as t grows
  SuffixTracker suffixes(d);
  bool overflow = false;

  std::vector<RunRecord> out;
  out.reserve(std::size_t(T));
  for (int t = 1; t <= T; ++t) {
    const PairSample draw = cfg.law.sample(rng);

    RunRecord rec;
    rec.t = t;

    // W_t uses the product through t-1, i.e. the prefix before this step
    const ScaledVec w = prefix.apply(draw.z);
    rec.wTermLog = w.log_magnitude();

    if (cfg.suffixStats) {
      rec.yLog = suffixes.min_term_log(draw.z);
      rec.uLog = suffixes.min_norm_log();
      suffixes.push(draw.m);
    } else {
      rec.yLog = std::numeric_limits<double>::quiet_NaN();
      rec.uLog = std::numeric_limits<double>::quiet_NaN();
    }

    const Vec wLin = w.to_linear();
    for (int i = 0; i < d; ++i) v[std::size_t(i)] += wLin[std::size_t(i)];

    Vec xNext = mat_vec(draw.m, x);
    for (int i = 0; i < d; ++i) xNext[std::size_t(i)] += draw.z[std::size_t(i)];
    x = std::move(xNext);

    prefix.extend(draw.m);
    rec.prodNormLog = prefix.log_norm();

    if (!all_finite(x) || !all_finite(v)) overflow = true;
    rec.overflow = overflow;
    rec.x = x;
    rec.vPartial = v;
    out.push_back(std::move(rec));
  }
  return out;
}

Ensemble run_ensemble(const RunConfig& cfg, int threads,
                      std::vector<double> xGrid) {
  validate(cfg);
  for (double x : xGrid)
    if (!(x > 0.0)) throw InvalidInput("run: x grid values must be positive");

  const int R = cfg.replications;
  const int T = cfg.horizonT;

  Ensemble ens;
  ens.horizonT = T;
  ens.replications = R;
  ens.suffixStats = cfg.suffixStats;
  ens.xGrid = std::move(xGrid);
  ens.reps.resize(std::size_t(R));

  const int nWorkers = std::max(1, std::min(threads, R));
  if (nWorkers == 1) {
    for (int r = 0; r < R; ++r)
      ens.reps[std::size_t(r)] = run_trajectory(cfg, std::uint64_t(r));
  } else {
    // replication r -> slot r regardless of which worker runs it; the
    // reduction below walks slots in index order, so thread count never
    // shows in the result
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(nWorkers));
    for (int w = 0; w < nWorkers; ++w) {
      pool.emplace_back([&, w]() {
        for (int r = w; r < R; r += nWorkers)
          ens.reps[std::size_t(r)] = run_trajectory(cfg, std::uint64_t(r));
      });
    }
    for (auto& th : pool) th.join();
  }

  ens.meanAbsW.resize(std::size_t(T));
  ens.medianAbsW.resize(std::size_t(T));
  ens.q90AbsW.resize(std::size_t(T));
  ens.meanProdNormLog.resize(std::size_t(T));
  if (cfg.suffixStats)
    ens.pYgt.assign(ens.xGrid.size(), std::vector<double>(std::size_t(T)));

  std::vector<double> absW(static_cast<std::size_t>(R));
  for (int t = 0; t < T; ++t) {
    double sumAbs = 0.0, sumNorm = 0.0;
    for (int r = 0; r < R; ++r) {
      const RunRecord& rec = ens.reps[std::size_t(r)][std::size_t(t)];
      absW[std::size_t(r)] = std::exp(rec.wTermLog);
      sumAbs += absW[std::size_t(r)];
      sumNorm += rec.prodNormLog;
    }
    ens.meanAbsW[std::size_t(t)] = sumAbs / R;
    ens.medianAbsW[std::size_t(t)] = quantile(absW, 0.5);
    ens.q90AbsW[std::size_t(t)] = quantile(absW, 0.9);
    ens.meanProdNormLog[std::size_t(t)] = sumNorm / R;
    if (cfg.suffixStats) {
      for (std::size_t i = 0; i < ens.xGrid.size(); ++i) {
        const double logX = std::log(ens.xGrid[i]);
        int count = 0;
        for (int r = 0; r < R; ++r)
          if (ens.reps[std::size_t(r)][std::size_t(t)].yLog > logX) ++count;
        ens.pYgt[i][std::size_t(t)] = double(count) / R;
      }
    }
  }
  return ens;
}

void write_trajectory_csv(std::ostream& os,
                          const std::vector<RunRecord>& records) {
  if (records.empty()) return;
  const std::size_t d = records.front().x.size();
  os << "t";
  for (std::size_t i = 1; i <= d; ++i) os << ",x_" << i;
  for (std::size_t i = 1; i <= d; ++i) os << ",v_" << i;
  os << ",wTermLog,prodNormLog,yLog,uLog\n";
  for (const RunRecord& rec : records) {
    os << rec.t;
    for (double xi : rec.x) os << ',' << fmt_double(xi);
    for (double vi : rec.vPartial) os << ',' << fmt_double(vi);
    os << ',' << fmt_double(rec.wTermLog) << ',' << fmt_double(rec.prodNormLog)
       << ',' << fmt_double(rec.yLog) << ',' << fmt_double(rec.uLog) << '\n';
  }
}

}  // namespace perpetua

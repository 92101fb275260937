#include "perpetua/gallery.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>
#include <utility>

#include "perpetua/errors.hpp"
#include "perpetua/linalg.hpp"
#include "perpetua/rng.hpp"
#include "perpetua/simulate.hpp"

namespace perpetua {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kOracleRelTol = 1e-9;
// Verdict checks need a rate-estimation window even when the oracle horizon
// is short.
constexpr int kVerdictMinHorizon = 128;
constexpr int kVerdictMinReps = 16;
// Stream id for the search scan's own parameter draws; far above both the
// replication streams (0..R-1) and the diagnostics auxiliary streams.
constexpr std::uint64_t kSearchScanStream = 1ull << 33;

// exponent e with x = 2^e exactly, when one exists
std::optional<int> dyadic_exponent(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) return std::nullopt;
  int e = 0;
  if (std::frexp(x, &e) != 0.5) return std::nullopt;
  return e - 1;
}

Vec basis_vector(std::size_t d, std::size_t i) {
  Vec v(d, 0.0);
  v[i] = 1.0;
  return v;
}

json num_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

// ---- oracle comparison ----

struct OracleAgg {
  long long compared = 0;
  long long mismatches = 0;
  double worstDev = 0.0;
  int worstT = 0;
  int worstRep = -1;

  void merge(const OracleAgg& o) {
    compared += o.compared;
    mismatches += o.mismatches;
    if (!(o.worstDev <= worstDev)) {
      worstDev = o.worstDev;
      worstT = o.worstT;
      worstRep = o.worstRep;
    }
  }
};

void compare_value(double got, double want, bool exact, int t, int rep,
                   OracleAgg& agg) {
  ++agg.compared;
  bool ok;
  if (std::isinf(want) || std::isinf(got) || exact) {
    ok = (got == want);
  } else {
    ok = std::fabs(got - want) <= kOracleRelTol * (1.0 + std::fabs(want));
  }
  if (!ok) {
    ++agg.mismatches;
    const double dev = std::fabs(got - want);
    if (!(dev <= agg.worstDev)) {
      agg.worstDev = dev;
      agg.worstT = t;
      agg.worstRep = rep;
    }
  }
}

std::string fmt_g(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double stat_of(const ConditionReport& r, const std::string& key) {
  for (const auto& [k, v] : r.statistics)
    if (k == key) return v;
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::vector<std::string> gallery_ids() {
  return {"E31", "E32", "E33", "E34", "R34"};
}

GalleryEntry build_gallery_entry(const std::string& id,
                                 const GalleryParams& p) {
  const double ln2 = std::log(2.0);
  const auto ignore_path = [](const std::vector<double>&) {};
  (void)ignore_path;

  if (id == "E31" || id == "E34") {
    if (!(p.alpha > 0.0 && p.alpha < 1.0))
      throw InvalidInput(id + ": requires 0 < alpha < 1");
    const auto ea = dyadic_exponent(p.alpha);
    const bool exact = ea.has_value();
    const int eAlpha = ea.value_or(0);
    const double logAlpha = std::log(p.alpha);
    const SquareMatrix m =
        SquareMatrix::from_rows({{p.alpha, 0.0}, {0.0, 1.0}});

    // log |alpha^(t-1)| computed the way the scaled accumulator reports it
    const auto contractLog = [=](int steps) {
      if (exact) return static_cast<double>(eAlpha * steps) * ln2;
      return static_cast<double>(steps) * logAlpha;
    };
    const GalleryOracle zeroOracle =
        [](int, const std::vector<double>&) { return 0.0; };

    if (id == "E31") {
      return GalleryEntry{
          "E31",
          "contracting top frame direction fed by its own axis: term sums "
          "converge while the factor product norm stays at 1",
          p,
          exact,
          false,
          PairLaw::constant(m, basis_vector(2, 0)),
          VectorLaw::zero(2),
          zeroOracle,
          [=](int t, const std::vector<double>&) { return contractLog(t - 1); },
          [=](int t, const std::vector<double>&) {
            return t == 1 ? kInf : contractLog(t - 1);
          },
          {{"ii", Verdict::HOLDS}, {"C0", Verdict::FAILS}}};
    }
    return GalleryEntry{
        "E34",
        "innovations along the neutral frame direction: every term has "
        "magnitude 1, so the supremum is finite but small-term "
        "probabilities never decay",
        p,
        exact,
        false,
        PairLaw::constant(m, basis_vector(2, 1)),
        VectorLaw::zero(2),
        zeroOracle,
        zeroOracle,
        [](int t, const std::vector<double>&) { return t == 1 ? kInf : 0.0; },
        {{"v", Verdict::HOLDS},
         {"vi", Verdict::FAILS},
         {"C0", Verdict::FAILS}}};
  }

  if (id == "E32") {
    if (!(p.alpha > 0.0 && p.alpha < 1.0 && p.beta > 1.0))
      throw InvalidInput("E32: requires 0 < alpha < 1 < beta");
    const auto ea = dyadic_exponent(p.alpha);
    const auto eb = dyadic_exponent(p.beta);
    const bool exact = ea.has_value() && eb.has_value();
    const int eAlpha = ea.value_or(0);
    const int eBeta = eb.value_or(0);
    const double logAlpha = std::log(p.alpha);
    const double logBeta = std::log(p.beta);
    return GalleryEntry{
        "E32",
        "contracting direction fed by innovations while an expanding "
        "direction amplifies the initial state: sums converge, the state "
        "does not",
        p,
        exact,
        false,
        PairLaw::constant(
            SquareMatrix::from_rows({{p.alpha, 0.0}, {0.0, p.beta}}),
            basis_vector(2, 0)),
        VectorLaw::constant(basis_vector(2, 1)),
        [=](int t, const std::vector<double>&) {
          if (exact) return static_cast<double>(eBeta * t) * ln2;
          return static_cast<double>(t) * logBeta;
        },
        [=](int t, const std::vector<double>&) {
          if (exact) return static_cast<double>(eAlpha * (t - 1)) * ln2;
          return static_cast<double>(t - 1) * logAlpha;
        },
        [=](int t, const std::vector<double>&) {
          if (t == 1) return kInf;
          if (exact) return static_cast<double>(eAlpha * (t - 1)) * ln2;
          return static_cast<double>(t - 1) * logAlpha;
        },
        {{"ii", Verdict::HOLDS},
         {"i", Verdict::FAILS},
         {"C0", Verdict::FAILS}}};
  }

  if (id == "E33") {
    if (!(std::fabs(p.beta) > 1.0))
      throw InvalidInput("E33: requires |beta| > 1");
    if (p.c == 0.0) throw InvalidInput("E33: requires c != 0");
    const double absBeta = std::fabs(p.beta);
    const double zAbs = std::fabs((1.0 - p.beta) * p.c);
    const auto eb = dyadic_exponent(absBeta);
    const auto ez = dyadic_exponent(zAbs);
    const bool exact = eb.has_value() && ez.has_value();
    const int eBeta = eb.value_or(0);
    const int eZ = ez.value_or(0);
    const double logBeta = std::log(absBeta);
    const double logZ = std::log(zAbs);
    return GalleryEntry{
        "E33",
        "scalar recursion pinned at a fixed point: the state is constant "
        "while the perpetuity terms explode",
        p,
        exact,
        false,
        PairLaw::constant(SquareMatrix::from_rows({{p.beta}}),
                          Vec{(1.0 - p.beta) * p.c}),
        VectorLaw::constant(Vec{p.c}),
        [=](int t, const std::vector<double>&) {
          if (exact) return static_cast<double>(eBeta * t) * ln2;
          return static_cast<double>(t) * logBeta;
        },
        [=](int t, const std::vector<double>&) {
          if (exact) return static_cast<double>(eBeta * (t - 1) + eZ) * ln2;
          return static_cast<double>(t - 1) * logBeta + logZ;
        },
        [=](int t, const std::vector<double>&) {
          if (t == 1) return kInf;
          if (exact) return static_cast<double>(eBeta + eZ) * ln2;
          return logBeta + logZ;
        },
        {{"i", Verdict::HOLDS},
         {"v", Verdict::FAILS},
         {"vi", Verdict::FAILS},
         {"C0", Verdict::FAILS}}};
  }

  if (id == "R34") {
    // Pinned construction: scalar pairs (1, 1/2) and (1/2, 1) equiprobable,
    // innovations along the first frame direction.
    const auto count_ones = [](const std::vector<double>& path, int upto) {
      int k = 0;
      for (int j = 0; j < upto; ++j)
        if (path[static_cast<std::size_t>(j)] == 1.0) ++k;
      return k;
    };
    return GalleryEntry{
        "R34",
        "coupled scalars keep every factor at norm 1 while the product norm "
        "decays like a random walk's minimum coordinate",
        p,
        true,
        true,
        PairLaw::frame_diagonal_coupled(
            {basis_vector(2, 0), basis_vector(2, 1)},
            {{1.0, 0.5}, {0.5, 1.0}}, {0.5, 0.5},
            VectorLaw::constant(basis_vector(2, 0))),
        VectorLaw::zero(2),
        [=](int t, const std::vector<double>& path) {
          const int k = count_ones(path, t);
          return -static_cast<double>(std::min(k, t - k)) * ln2;
        },
        [=](int t, const std::vector<double>& path) {
          const int k = count_ones(path, t - 1);
          return -static_cast<double>((t - 1) - k) * ln2;
        },
        [=](int t, const std::vector<double>& path) {
          if (t == 1) return kInf;
          const int k = count_ones(path, t - 1);
          return -static_cast<double>((t - 1) - k) * ln2;
        },
        {{"C0", Verdict::HOLDS}}};
  }

  throw InvalidInput("unknown gallery id: " + id);
}

// ---- verification ----

namespace {

struct RepOracleResult {
  OracleAgg prod, wterm, ylog;
  long long nonUnitFactors = 0;  // path-dependent entries only
  double factorLogSum = 0.0;
};

RepOracleResult check_one_replication(const GalleryEntry& e,
                                      const RunConfig& cfg,
                                      std::uint64_t rep) {
  RepOracleResult out;
  const std::vector<RunRecord> records = run_trajectory(cfg, rep);

  // Replay the exact draw sequence to recover the realized scalars: the
  // trajectory consumes Z0 first, then one pair per step.
  RngStream rng(cfg.seed, rep);
  (void)cfg.z0Law.sample(rng);
  std::vector<double> alphaPath;
  alphaPath.reserve(static_cast<std::size_t>(cfg.horizonT));
  for (int t = 1; t <= cfg.horizonT; ++t) {
    const PairSample s = cfg.law.sample(rng);
    alphaPath.push_back(s.m(0, 0));
    if (e.pathDependent) {
      const double n = spectral_norm(s.m);
      if (n != 1.0) ++out.nonUnitFactors;
      out.factorLogSum += std::log(n);
    }
  }

  const int r = static_cast<int>(rep);
  for (const RunRecord& rec : records) {
    compare_value(rec.prodNormLog, e.prodNormLogOracle(rec.t, alphaPath),
                  e.exactDyadic, rec.t, r, out.prod);
    compare_value(rec.wTermLog, e.wTermLogOracle(rec.t, alphaPath),
                  e.exactDyadic, rec.t, r, out.wterm);
    compare_value(rec.yLog, e.yLogOracle(rec.t, alphaPath), e.exactDyadic,
                  rec.t, r, out.ylog);
  }
  return out;
}

GalleryCheck oracle_check(const std::string& name, const OracleAgg& agg,
                          bool exact) {
  GalleryCheck c;
  c.name = name;
  c.passed = agg.mismatches == 0;
  std::ostringstream os;
  if (c.passed) {
    os << agg.compared << " values matched "
       << (exact ? "bitwise" : "within 1e-9 relative");
  } else {
    os << agg.mismatches << " of " << agg.compared
       << " values mismatched; worst |dev| = " << fmt_g(agg.worstDev)
       << " at t=" << agg.worstT << " replication " << agg.worstRep;
  }
  c.detail = os.str();
  return c;
}

}  // namespace

GalleryReport verify_gallery_entry(const GalleryEntry& entry, int horizonT,
                                   int replications, std::uint64_t seed,
                                   int threads) {
  if (horizonT < 2)
    throw InvalidInput("gallery verify: horizon must be at least 2");
  if (replications < 1)
    throw InvalidInput("gallery verify: replications must be at least 1");
  if (threads < 1) throw InvalidInput("gallery verify: threads must be >= 1");

  const RunConfig cfg{entry.law,    entry.z0Law, horizonT,
                      replications, true,        seed};

  GalleryReport report;
  report.id = entry.id;
  report.horizonT = horizonT;
  report.replications = replications;
  report.seed = seed;

  // Oracle comparisons, one replication per worker slot; merged in
  // replication order so the aggregate is thread-count independent.
  std::vector<RepOracleResult> results(
      static_cast<std::size_t>(replications));
  const int nw = std::min(threads, replications);
  if (nw <= 1) {
    for (int r = 0; r < replications; ++r)
      results[static_cast<std::size_t>(r)] =
          check_one_replication(entry, cfg, static_cast<std::uint64_t>(r));
  } else {
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(nw));
    for (int w = 0; w < nw; ++w) {
      workers.emplace_back([&, w]() {
        for (int r = w; r < replications; r += nw)
          results[static_cast<std::size_t>(r)] =
              check_one_replication(entry, cfg, static_cast<std::uint64_t>(r));
      });
    }
    for (auto& t : workers) t.join();
  }

  RepOracleResult total;
  for (const RepOracleResult& r : results) {
    total.prod.merge(r.prod);
    total.wterm.merge(r.wterm);
    total.ylog.merge(r.ylog);
    total.nonUnitFactors += r.nonUnitFactors;
    total.factorLogSum += r.factorLogSum;
  }

  report.checks.push_back(
      oracle_check("oracle:prodNormLog", total.prod, entry.exactDyadic));
  report.checks.push_back(
      oracle_check("oracle:wTermLog", total.wterm, entry.exactDyadic));
  report.checks.push_back(
      oracle_check("oracle:yLog", total.ylog, entry.exactDyadic));

  if (entry.pathDependent) {
    GalleryCheck c;
    c.name = "oracle:factorNormProduct";
    c.passed = total.nonUnitFactors == 0 && total.factorLogSum == 0.0;
    std::ostringstream os;
    if (c.passed) {
      os << "every sampled factor has norm exactly 1; log-norm sum exactly 0";
    } else {
      os << total.nonUnitFactors
         << " factors with norm != 1; log-norm sum = "
         << fmt_g(total.factorLogSum);
    }
    c.detail = os.str();
    report.checks.push_back(std::move(c));
  }

  // Verdict checks at a horizon long enough for rate estimation.
  const int vT = std::max(horizonT, kVerdictMinHorizon);
  const int vR = std::max(replications, kVerdictMinReps);
  const RunConfig vcfg{entry.law, entry.z0Law, vT, vR, true, seed};

  std::optional<Ensemble> ens;
  const auto ensure_ens = [&]() -> const Ensemble& {
    if (!ens) ens = run_ensemble(vcfg, threads);
    return *ens;
  };
  std::optional<std::pair<ConditionReport, ConditionReport>> ii_iii, iv_v;

  const auto computed_verdict = [&](const std::string& cond) -> Verdict {
    if (cond == "C0")
      return check_c0(entry.law, vT, vR, seed, {}, threads).verdict;
    if (cond == "i")
      return check_condition_i(entry.law, entry.z0Law, vT, 100, seed, {},
                               threads)
          .verdict;
    if (cond == "ii" || cond == "iii") {
      if (!ii_iii) ii_iii = check_condition_ii_iii(ensure_ens());
      return cond == "ii" ? ii_iii->first.verdict : ii_iii->second.verdict;
    }
    if (cond == "iv" || cond == "v") {
      if (!iv_v) iv_v = check_condition_iv_v(ensure_ens());
      return cond == "iv" ? iv_v->first.verdict : iv_v->second.verdict;
    }
    if (cond == "vi") return check_condition_vi(ensure_ens()).verdict;
    throw InvalidInput("gallery verify: unknown condition id: " + cond);
  };

  for (const auto& [cond, expected] : entry.expectedVerdicts) {
    const Verdict got = computed_verdict(cond);
    GalleryCheck c;
    c.name = "verdict:" + cond;
    const bool contradiction =
        (expected == Verdict::HOLDS && got == Verdict::FAILS) ||
        (expected == Verdict::FAILS && got == Verdict::HOLDS);
    c.passed = !contradiction;
    c.flagged = got == Verdict::INCONCLUSIVE;
    c.detail = "expected " + std::string(to_string(expected)) +
               ", computed " + std::string(to_string(got));
    if (contradiction) report.contradiction = true;
    report.checks.push_back(std::move(c));
  }

  report.allPassed = std::all_of(
      report.checks.begin(), report.checks.end(),
      [](const GalleryCheck& c) { return c.passed; });
  return report;
}

std::string GalleryReport::to_json() const {
  json j;
  j["id"] = id;
  j["horizonT"] = horizonT;
  j["replications"] = replications;
  j["seed"] = seed;
  j["allPassed"] = allPassed;
  j["contradiction"] = contradiction;
  json arr = json::array();
  for (const GalleryCheck& c : checks) {
    json jc;
    jc["name"] = c.name;
    jc["passed"] = c.passed;
    jc["flagged"] = c.flagged;
    jc["detail"] = c.detail;
    arr.push_back(std::move(jc));
  }
  j["checks"] = std::move(arr);
  return j.dump();
}

// ---- randomized search ----

namespace {

struct FamilyGenerator {
  std::vector<std::string> fixed;  // law specs, scanned in order
  bool generated = false;
  int dim = 2;
  double scalarMin = 0.25;
  double scalarMax = 4.0;
  int tuples = 2;
  std::string zSpec;  // JSON; empty means constant first basis vector
};

FamilyGenerator parse_family(const std::string& text) {
  json spec;
  try {
    spec = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("family spec: ") + e.what());
  }
  if (!spec.is_object())
    throw ConfigError("family spec: expected a JSON object");

  FamilyGenerator fam;
  if (spec.contains("fixed")) {
    const json& arr = spec.at("fixed");
    if (!arr.is_array())
      throw ConfigError("family spec: 'fixed' must be an array of law specs");
    for (const json& lawSpec : arr) fam.fixed.push_back(lawSpec.dump());
    return fam;
  }
  if (!spec.contains("generator"))
    throw ConfigError("family spec: expected 'fixed' or 'generator'");
  const json& g = spec.at("generator");
  if (!g.is_object())
    throw ConfigError("family spec: 'generator' must be an object");
  fam.generated = true;
  if (g.contains("dim")) fam.dim = g.at("dim").get<int>();
  if (g.contains("scalarMin")) fam.scalarMin = g.at("scalarMin").get<double>();
  if (g.contains("scalarMax")) fam.scalarMax = g.at("scalarMax").get<double>();
  if (g.contains("tuples")) fam.tuples = g.at("tuples").get<int>();
  if (g.contains("z")) fam.zSpec = g.at("z").dump();
  if (fam.dim < 1 || fam.dim > static_cast<int>(kMaxDim))
    throw ConfigError("family spec: dim out of range");
  if (!(fam.scalarMin > 0.0) || !(fam.scalarMax >= fam.scalarMin) ||
      !std::isfinite(fam.scalarMax))
    throw ConfigError("family spec: need 0 < scalarMin <= scalarMax < inf");
  if (fam.tuples < 1 || fam.tuples > 64)
    throw ConfigError("family spec: tuples out of range [1, 64]");
  return fam;
}

std::string generate_candidate_spec(const FamilyGenerator& fam,
                                    RngStream& scan) {
  json lawSpec;
  lawSpec["kind"] = "frame-diagonal";
  json frame = json::array();
  for (int i = 0; i < fam.dim; ++i) {
    json row = json::array();
    for (int j = 0; j < fam.dim; ++j) row.push_back(i == j ? 1.0 : 0.0);
    frame.push_back(std::move(row));
  }
  lawSpec["frame"] = std::move(frame);

  const double lo = std::log(fam.scalarMin);
  const double hi = std::log(fam.scalarMax);
  json tuples = json::array();
  for (int k = 0; k < fam.tuples; ++k) {
    json tup = json::array();
    for (int i = 0; i < fam.dim; ++i)
      tup.push_back(std::exp(lo + scan.uniform01() * (hi - lo)));
    tuples.push_back(std::move(tup));
  }
  lawSpec["tuples"] = std::move(tuples);
  json weights = json::array();
  for (int k = 0; k < fam.tuples; ++k)
    weights.push_back(1.0 / static_cast<double>(fam.tuples));
  lawSpec["tupleWeights"] = std::move(weights);

  if (fam.zSpec.empty()) {
    json z;
    z["kind"] = "constant";
    json v = json::array();
    for (int i = 0; i < fam.dim; ++i) v.push_back(i == 0 ? 1.0 : 0.0);
    z["value"] = std::move(v);
    lawSpec["z"] = std::move(z);
  } else {
    lawSpec["z"] = json::parse(fam.zSpec);
  }
  return lawSpec.dump();
}

}  // namespace

SearchReport search_open_problem(const std::string& familySpecJson, int budget,
                                 std::uint64_t seed, int threads) {
  if (budget < 0) throw InvalidInput("search: budget must be nonnegative");
  if (threads < 1) throw InvalidInput("search: threads must be >= 1");
  const FamilyGenerator fam = parse_family(familySpecJson);

  SearchReport report;
  report.disclaimer =
      "numerical evidence only — does not resolve the open problem";
  report.budget = budget;
  report.seed = seed;

  const int count =
      fam.generated ? budget
                    : static_cast<int>(std::min<std::size_t>(
                          static_cast<std::size_t>(budget), fam.fixed.size()));

  constexpr int kRateHorizon = 256;
  constexpr int kRateReps = 8;
  constexpr int kCheckHorizon = 256;
  constexpr int kCheckReps = 16;
  const DiagnosticsOptions opts{};

  RngStream scan(seed, kSearchScanStream);
  for (int idx = 0; idx < count; ++idx) {
    const std::string lawJson =
        fam.generated ? generate_candidate_spec(fam, scan)
                      : fam.fixed[static_cast<std::size_t>(idx)];
    const PairLaw law = parse_pair_law(lawJson);
    const std::uint64_t candSeed =
        seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(idx + 1));

    const LyapunovEstimate est =
        estimate_lyapunov(law, kRateHorizon, kRateReps, candSeed, threads);
    ++report.evaluated;
    if (!(est.lambdaHat >= 0.0)) continue;  // contraction regime: rejected
    ++report.admitted;

    const RunConfig cfg{law,        VectorLaw::zero(law.dim()), kCheckHorizon,
                        kCheckReps, true,                       candSeed};
    const Ensemble ens = run_ensemble(cfg, threads);
    const auto [iv, v] = check_condition_iv_v(ens, opts);
    const ConditionReport vi = check_condition_vi(ens, opts);
    (void)iv;
    if (!(vi.verdict == Verdict::HOLDS && v.verdict == Verdict::FAILS))
      continue;

    // Ranking margin: how far the tail sums sit below the acceptance
    // threshold, plus how significant the term-growth slope is.
    double maxTail = 0.0;
    for (const auto& [k, val] : vi.statistics)
      if (k.rfind("tailSum[", 0) == 0) maxTail = std::max(maxTail, val);
    const double marginVi = 1.0 - maxTail / opts.tailSumMax;
    const double mean = stat_of(v, "meanTermSlope");
    const double sd = stat_of(v, "termSlopeSD");
    double marginV = 1.0;
    if (sd > 0.0 && std::isfinite(mean)) {
      const double t = mean / sd;
      marginV = t > 0.0 ? t / (t + 3.0) : 0.0;
    }

    SearchCandidate cand;
    cand.index = idx;
    cand.lawJson = law.describe_json();
    cand.lambdaHat = est.lambdaHat;
    cand.margin = marginVi + marginV;
    cand.conditionV = v;
    cand.conditionVI = vi;
    report.candidates.push_back(std::move(cand));
  }

  std::stable_sort(report.candidates.begin(), report.candidates.end(),
                   [](const SearchCandidate& a, const SearchCandidate& b) {
                     return a.margin > b.margin;
                   });
  return report;
}

std::string SearchReport::to_json() const {
  json j;
  j["disclaimer"] = disclaimer;
  j["budget"] = budget;
  j["evaluated"] = evaluated;
  j["admitted"] = admitted;
  j["seed"] = seed;
  json arr = json::array();
  for (const SearchCandidate& c : candidates) {
    json jc;
    jc["index"] = c.index;
    jc["law"] = json::parse(c.lawJson);
    jc["lambdaHat"] = num_or_string(c.lambdaHat);
    jc["margin"] = num_or_string(c.margin);
    jc["conditionV"] = json::parse(c.conditionV.to_json());
    jc["conditionVI"] = json::parse(c.conditionVI.to_json());
    arr.push_back(std::move(jc));
  }
  j["candidates"] = std::move(arr);
  return j.dump();
}

}  // namespace perpetua

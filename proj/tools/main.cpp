// perpetua: command-line front end for the simulation, diagnostics,
// constant-matrix analysis, and example-gallery facilities of libperpetua.
//
// Exit codes: 0 success; 1 verification contradiction or runtime failure;
// 2 configuration/usage errors.
//
// Determinism contract: a report is a pure function of the command line
// (minus --threads) — reruns and different worker counts produce
// byte-identical JSON. Reports carry no timestamps unless --epoch pins one.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "perpetua/constant_matrix.hpp"
#include "perpetua/diagnostics.hpp"
#include "perpetua/errors.hpp"
#include "perpetua/gallery.hpp"
#include "perpetua/laws.hpp"
#include "perpetua/linalg.hpp"
#include "perpetua/simulate.hpp"

namespace {

using nlohmann::json;
using namespace perpetua;

json num_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

// An argument that starts with '{' or '[' is inline JSON; anything else is a
// path to a file holding the JSON document.
std::string read_spec(const std::string& arg) {
  std::size_t i = 0;
  while (i < arg.size() && std::isspace(static_cast<unsigned char>(arg[i])))
    ++i;
  if (i < arg.size() && (arg[i] == '{' || arg[i] == '[')) return arg;
  std::ifstream in(arg, std::ios::binary);
  if (!in) throw ConfigError("cannot read file: " + arg);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const json& report, const std::string& outPath) {
  const std::string text = report.dump() + "\n";
  if (outPath.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(outPath, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + outPath);
  out << text;
  if (!out) throw ConfigError("failed writing output file: " + outPath);
}

int resolve_threads(int flagValue) {
  if (flagValue > 0) return flagValue;
  if (const char* env = std::getenv("PERPETUA_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 &&
        v <= std::numeric_limits<int>::max())
      return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// ---- shared flag bundle ----

struct Common {
  std::string law;
  std::string z0;
  std::string out;
  std::string trace;
  int horizonT = 100;
  int replications = 1;
  int threads = 0;  // 0 = PERPETUA_THREADS, then machine parallelism
  std::uint64_t seed = 0;
  std::vector<double> xGrid = kDefaultXGrid;
  long long epoch = 0;
  bool hasEpoch = false;
  DiagnosticsOptions opts;
};

void add_law_flag(CLI::App* c, Common& s, bool required) {
  auto* o = c->add_option(
      "--law", s.law, "pair-law spec: inline JSON or path to a JSON file");
  if (required) o->required();
}

void add_z0_flag(CLI::App* c, Common& s) {
  c->add_option("--z0", s.z0,
                "initial-state law: inline JSON or file (default: zero)");
}

void add_run_flags(CLI::App* c, Common& s) {
  c->add_option("--T", s.horizonT, "horizon (number of steps)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c->add_option("--R", s.replications, "independent replications")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c->add_option("--seed", s.seed, "RNG seed (one seed, one report)")
      ->capture_default_str();
}

void add_threads_flag(CLI::App* c, Common& s) {
  c->add_option("--threads", s.threads,
                "worker threads; 0 = PERPETUA_THREADS env var, then machine "
                "parallelism (never affects report bytes)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

void add_out_flag(CLI::App* c, Common& s) {
  c->add_option("--out", s.out, "write the JSON report here (default: stdout)");
}

void add_epoch_flag(CLI::App* c, Common& s) {
  c->add_option("--epoch", s.epoch,
                "fixed timestamp to embed in the report (omitted otherwise)");
}

void add_grid_flag(CLI::App* c, Common& s) {
  c->add_option("--x-grid", s.xGrid,
                "comma-separated thresholds for small-term probabilities")
      ->delimiter(',');
}

void add_threshold_flags(CLI::App* c, Common& s) {
  c->add_option("--c0-sigma", s.opts.sigmaMultiplier,
                "z-score bar for interval decisions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c->add_option("--quorum", s.opts.quorum,
                "fraction of replications that must agree")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  c->add_option("--tail-tol", s.opts.tailTol,
                "relative tail tolerance for sum/limit tests")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void validate_grid(const std::vector<double>& g) {
  if (g.empty()) throw ConfigError("x grid must not be empty");
  double prev = 0.0;
  for (double x : g) {
    if (!(x > 0.0) || !std::isfinite(x))
      throw ConfigError("x grid values must be positive and finite");
    if (!(x > prev))
      throw ConfigError("x grid values must be strictly increasing");
    prev = x;
  }
}

// ---- JSON assembly ----

json thresholds_json(const DiagnosticsOptions& o) {
  json j;
  j["decayLog"] = o.decayLog;
  j["persistLevel"] = o.persistLevel;
  j["quorum"] = o.quorum;
  j["sigmaMultiplier"] = o.sigmaMultiplier;
  j["tailSumMax"] = o.tailSumMax;
  j["tailTol"] = o.tailTol;
  return j;
}

json grid_json(const std::vector<double>& g) {
  json a = json::array();
  for (double x : g) a.push_back(x);
  return a;
}

json lyapunov_json(const LyapunovEstimate& e) {
  json j;
  j["lambdaHat"] = num_or_string(e.lambdaHat);
  j["stdError"] = num_or_string(e.stdError);
  j["horizonT"] = e.horizonT;
  j["replications"] = e.replications;
  j["caveats"] = e.caveats;
  return j;
}

json stats_triple(const std::vector<double>& xs) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (double x : xs) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    sum += x;
  }
  json j;
  j["max"] = num_or_string(hi);
  j["mean"] = num_or_string(sum / static_cast<double>(xs.size()));
  j["min"] = num_or_string(lo);
  return j;
}

// All six condition verdicts on one law, from one seed.
json conditions_json(const PairLaw& law, const VectorLaw& z0, int T, int R,
                     std::uint64_t seed, const DiagnosticsOptions& opts,
                     int threads, const std::vector<double>& xGrid) {
  const RunConfig cfg{law, z0, T, R, true, seed};
  const Ensemble ens = run_ensemble(cfg, threads, xGrid);
  const auto [ii, iii] = check_condition_ii_iii(ens, opts);
  const auto [iv, v] = check_condition_iv_v(ens, opts);
  const ConditionReport vi = check_condition_vi(ens, opts);
  const ConditionReport c0 = check_c0(law, T, R, seed, opts, threads);
  const ConditionReport i = check_condition_i(law, z0, T, std::max(100, R),
                                              seed, opts, threads);
  json j;
  j["C0"] = json::parse(c0.to_json());
  j["i"] = json::parse(i.to_json());
  j["ii"] = json::parse(ii.to_json());
  j["iii"] = json::parse(iii.to_json());
  j["iv"] = json::parse(iv.to_json());
  j["v"] = json::parse(v.to_json());
  j["vi"] = json::parse(vi.to_json());
  return j;
}

struct ParsedLaws {
  PairLaw law;
  VectorLaw z0;
};

ParsedLaws parse_laws(const Common& s) {
  PairLaw law = parse_pair_law(read_spec(s.law));
  VectorLaw z0 = s.z0.empty() ? VectorLaw::zero(law.dim())
                              : parse_vector_law(read_spec(s.z0));
  if (z0.dim() != law.dim())
    throw ConfigError("initial-state law dimension " +
                      std::to_string(z0.dim()) +
                      " does not match pair-law dimension " +
                      std::to_string(law.dim()));
  return ParsedLaws{std::move(law), std::move(z0)};
}

json base_config(const Common& s, const ParsedLaws& laws) {
  json cfg;
  cfg["law"] = json::parse(laws.law.describe_json());
  cfg["z0"] = json::parse(laws.z0.describe_json());
  cfg["horizonT"] = s.horizonT;
  cfg["replications"] = s.replications;
  cfg["seed"] = s.seed;
  if (s.hasEpoch) cfg["epoch"] = s.epoch;
  return cfg;
}

// ---- commands ----

int run_simulate(const Common& s, int threads) {
  validate_grid(s.xGrid);
  const ParsedLaws laws = parse_laws(s);
  const RunConfig cfg{laws.law,       laws.z0, s.horizonT,
                      s.replications, true,    s.seed};
  const Ensemble ens = run_ensemble(cfg, threads, s.xGrid);

  std::vector<double> finalW, finalProd, finalVNorm;
  int overflowReps = 0;
  for (const auto& rep : ens.reps) {
    const RunRecord& last = rep.back();
    finalW.push_back(last.wTermLog);
    finalProd.push_back(last.prodNormLog);
    finalVNorm.push_back(norm2(last.vPartial));
    if (std::any_of(rep.begin(), rep.end(),
                    [](const RunRecord& r) { return r.overflow; }))
      ++overflowReps;
  }

  json report;
  report["command"] = "simulate";
  json cfgJson = base_config(s, laws);
  cfgJson["suffixStats"] = true;
  cfgJson["xGrid"] = grid_json(s.xGrid);
  report["config"] = std::move(cfgJson);
  json summary;
  summary["finalPartialSumNorm"] = stats_triple(finalVNorm);
  summary["finalProdNormLog"] = stats_triple(finalProd);
  summary["finalWTermLog"] = stats_triple(finalW);
  summary["overflowReplications"] = overflowReps;
  report["summary"] = std::move(summary);

  if (!s.trace.empty()) {
    std::ofstream tr(s.trace, std::ios::binary);
    if (!tr) throw ConfigError("cannot open trace file: " + s.trace);
    write_trajectory_csv(tr, ens.reps.front());
    if (!tr) throw ConfigError("failed writing trace file: " + s.trace);
  }
  emit(report, s.out);
  return 0;
}

int run_diagnose(const Common& s, int threads) {
  validate_grid(s.xGrid);
  const ParsedLaws laws = parse_laws(s);

  json report;
  report["command"] = "diagnose";
  json cfgJson = base_config(s, laws);
  cfgJson["thresholds"] = thresholds_json(s.opts);
  cfgJson["xGrid"] = grid_json(s.xGrid);
  report["config"] = std::move(cfgJson);
  report["conditions"] =
      conditions_json(laws.law, laws.z0, s.horizonT, s.replications, s.seed,
                      s.opts, threads, s.xGrid);
  report["lyapunov"] = lyapunov_json(estimate_lyapunov(
      laws.law, s.horizonT, std::max(2, s.replications), s.seed, threads));
  emit(report, s.out);
  return 0;
}

int run_lyapunov(const Common& s, int threads) {
  const ParsedLaws laws = parse_laws(s);
  json report;
  report["command"] = "lyapunov";
  report["config"] = base_config(s, laws);
  report["lyapunov"] = lyapunov_json(estimate_lyapunov(
      laws.law, s.horizonT, std::max(2, s.replications), s.seed, threads));
  emit(report, s.out);
  return 0;
}

int run_constant(const std::string& matrixSpec, const Common& s) {
  json rows;
  try {
    rows = json::parse(read_spec(matrixSpec));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("matrix: ") + e.what());
  }
  if (!rows.is_array())
    throw ConfigError("matrix: expected a JSON array of rows");
  std::vector<std::vector<double>> m;
  for (const json& row : rows) {
    if (!row.is_array()) throw ConfigError("matrix: rows must be arrays");
    std::vector<double> r;
    for (const json& x : row) {
      if (!x.is_number()) throw ConfigError("matrix: entries must be numbers");
      r.push_back(x.get<double>());
    }
    m.push_back(std::move(r));
  }
  const SquareMatrix mat = SquareMatrix::from_rows(m);

  const C0ExactResult c0 = c0_exact(mat);
  const std::vector<Complex> poly = minimal_polynomial(mat);
  const SpectralDecomposition dec = spectral_components(mat);

  json report;
  report["command"] = "constant";
  json cfgJson;
  cfgJson["matrix"] = rows;
  if (s.hasEpoch) cfgJson["epoch"] = s.epoch;
  report["config"] = std::move(cfgJson);

  json c0Json;
  c0Json["holds"] = c0.holds;
  c0Json["dominantModulus"] = num_or_string(c0.dominantModulus);
  c0Json["boundaryWarning"] = c0.boundaryWarning;
  report["c0Exact"] = std::move(c0Json);

  json polyJson = json::array();
  for (const Complex& c : poly) {
    if (c.imag() == 0.0) {
      polyJson.push_back(num_or_string(c.real()));
    } else {
      json term;
      term["im"] = num_or_string(c.imag());
      term["re"] = num_or_string(c.real());
      polyJson.push_back(std::move(term));
    }
  }
  report["minimalPolynomial"] = std::move(polyJson);

  json spec;
  spec["degree"] = dec.degree();
  json eigs = json::array();
  for (std::size_t k = 0; k < dec.eigenvalues.size(); ++k) {
    json e;
    e["im"] = num_or_string(dec.eigenvalues[k].imag());
    e["modulus"] = num_or_string(std::abs(dec.eigenvalues[k]));
    e["multiplicity"] = dec.multiplicities[k];
    e["re"] = num_or_string(dec.eigenvalues[k].real());
    eigs.push_back(std::move(e));
  }
  spec["eigenvalues"] = std::move(eigs);
  report["spectral"] = std::move(spec);

  emit(report, s.out);
  return 0;
}

int run_gallery_list(const Common& s) {
  json report;
  report["command"] = "gallery-list";
  json entries = json::array();
  for (const std::string& id : gallery_ids()) {
    const GalleryEntry e = build_gallery_entry(id);
    json je;
    je["id"] = e.id;
    je["description"] = e.description;
    json ev;
    for (const auto& [cond, verdict] : e.expectedVerdicts)
      ev[cond] = std::string(to_string(verdict));
    je["expectedVerdicts"] = std::move(ev);
    entries.push_back(std::move(je));
  }
  report["entries"] = std::move(entries);
  emit(report, s.out);
  return 0;
}

int run_gallery_verify(const std::string& id, const Common& s, int threads) {
  const GalleryEntry entry = build_gallery_entry(id);
  const GalleryReport rep =
      verify_gallery_entry(entry, s.horizonT, s.replications, s.seed, threads);

  // Full condition diagnosis at the same scale the verdict checks used.
  const int vT = std::max(s.horizonT, 128);
  const int vR = std::max(s.replications, 16);

  json report;
  report["command"] = "gallery-verify";
  json cfgJson;
  cfgJson["id"] = id;
  cfgJson["horizonT"] = s.horizonT;
  cfgJson["replications"] = s.replications;
  cfgJson["seed"] = s.seed;
  if (s.hasEpoch) cfgJson["epoch"] = s.epoch;
  report["config"] = std::move(cfgJson);
  report["conditions"] =
      conditions_json(entry.law, entry.z0Law, vT, vR, s.seed,
                      DiagnosticsOptions{}, threads, kDefaultXGrid);
  report["report"] = json::parse(rep.to_json());
  emit(report, s.out);
  return rep.contradiction ? 1 : 0;
}

int run_search(const std::string& familySpec, int budget, const Common& s,
               int threads) {
  const std::string familyText = read_spec(familySpec);
  const SearchReport rep =
      search_open_problem(familyText, budget, s.seed, threads);

  json report;
  report["command"] = "search";
  json cfgJson;
  cfgJson["budget"] = budget;
  cfgJson["family"] = json::parse(familyText);
  cfgJson["seed"] = s.seed;
  if (s.hasEpoch) cfgJson["epoch"] = s.epoch;
  report["config"] = std::move(cfgJson);
  report["report"] = json::parse(rep.to_json());
  emit(report, s.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Simulate d-dimensional random-coefficient linear recursions "
      "X_t = M_t X_{t-1} + Z_t, estimate product-norm decay rates, decide "
      "convergence conditions, and check the built-in worked examples "
      "against closed forms."};
  app.require_subcommand(1);

  Common simOpts;
  CLI::App* sim = app.add_subcommand(
      "simulate", "run replications and summarize; --trace writes a CSV "
                  "trajectory (columns: t, x_1..x_d, v_1..v_d, wTermLog, "
                  "prodNormLog, yLog, uLog)");
  add_law_flag(sim, simOpts, true);
  add_z0_flag(sim, simOpts);
  add_run_flags(sim, simOpts);
  add_grid_flag(sim, simOpts);
  add_threads_flag(sim, simOpts);
  add_out_flag(sim, simOpts);
  add_epoch_flag(sim, simOpts);
  sim->add_option("--trace", simOpts.trace,
                  "write replication 0's trajectory as CSV to this path");

  Common diagOpts;
  diagOpts.horizonT = 256;
  diagOpts.replications = 32;
  CLI::App* diag = app.add_subcommand(
      "diagnose",
      "verdicts for convergence conditions C0 and i-vi on one law");
  add_law_flag(diag, diagOpts, true);
  add_z0_flag(diag, diagOpts);
  add_run_flags(diag, diagOpts);
  add_grid_flag(diag, diagOpts);
  add_threshold_flags(diag, diagOpts);
  add_threads_flag(diag, diagOpts);
  add_out_flag(diag, diagOpts);
  add_epoch_flag(diag, diagOpts);

  Common lyapOpts;
  lyapOpts.horizonT = 1000;
  lyapOpts.replications = 32;
  CLI::App* lyap = app.add_subcommand(
      "lyapunov", "estimate the product-norm growth rate "
                  "(1/T) log ||M_1...M_T|| across replications");
  add_law_flag(lyap, lyapOpts, true);
  add_run_flags(lyap, lyapOpts);
  add_threads_flag(lyap, lyapOpts);
  add_out_flag(lyap, lyapOpts);
  add_epoch_flag(lyap, lyapOpts);

  Common constOpts;
  std::string matrixSpec;
  CLI::App* cons = app.add_subcommand(
      "constant", "exact analysis of a constant coefficient matrix: "
                  "eigenstructure, powers, and the decay criterion");
  cons->add_option("--matrix", matrixSpec,
                   "square matrix as JSON rows, inline or a file path")
      ->required();
  add_out_flag(cons, constOpts);
  add_epoch_flag(cons, constOpts);

  CLI::App* gal = app.add_subcommand(
      "gallery", "built-in worked examples with closed-form oracles");
  gal->require_subcommand(1);

  Common listOpts;
  CLI::App* galList =
      gal->add_subcommand("list", "list the built-in examples");
  add_out_flag(galList, listOpts);

  Common verifyOpts;
  verifyOpts.horizonT = 64;
  verifyOpts.replications = 16;
  std::string verifyId;
  CLI::App* galVerify = gal->add_subcommand(
      "verify", "check one example's simulated paths against its closed "
                "forms and expected verdicts (exit 1 on contradiction)");
  galVerify->add_option("id", verifyId, "example id (see `gallery list`)")
      ->required();
  add_run_flags(galVerify, verifyOpts);
  add_threads_flag(galVerify, verifyOpts);
  add_out_flag(galVerify, verifyOpts);
  add_epoch_flag(galVerify, verifyOpts);

  Common galSearchOpts;
  int galBudget = 100;
  std::string galFamily;
  CLI::App* galSearch = gal->add_subcommand(
      "search", "scan a law family for small-term-decay candidates "
                "(numerical evidence only)");
  galSearch->add_option("family", galFamily,
                        "family spec: inline JSON or file path")
      ->required();
  galSearch->add_option("--budget", galBudget, "laws to evaluate")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  galSearch->add_option("--seed", galSearchOpts.seed, "RNG seed")
      ->capture_default_str();
  add_threads_flag(galSearch, galSearchOpts);
  add_out_flag(galSearch, galSearchOpts);
  add_epoch_flag(galSearch, galSearchOpts);

  Common searchOpts;
  int budget = 100;
  std::string family;
  CLI::App* search = app.add_subcommand(
      "search", "scan a law family for small-term-decay candidates "
                "(numerical evidence only)");
  search->add_option("family", family, "family spec: inline JSON or file path")
      ->required();
  search->add_option("--budget", budget, "laws to evaluate")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  search->add_option("--seed", searchOpts.seed, "RNG seed")
      ->capture_default_str();
  add_threads_flag(search, searchOpts);
  add_out_flag(search, searchOpts);
  add_epoch_flag(search, searchOpts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  simOpts.hasEpoch = sim->count("--epoch") > 0;
  diagOpts.hasEpoch = diag->count("--epoch") > 0;
  lyapOpts.hasEpoch = lyap->count("--epoch") > 0;
  constOpts.hasEpoch = cons->count("--epoch") > 0;
  verifyOpts.hasEpoch = galVerify->count("--epoch") > 0;
  galSearchOpts.hasEpoch = galSearch->count("--epoch") > 0;
  searchOpts.hasEpoch = search->count("--epoch") > 0;

  try {
    if (sim->parsed()) return run_simulate(simOpts, resolve_threads(simOpts.threads));
    if (diag->parsed())
      return run_diagnose(diagOpts, resolve_threads(diagOpts.threads));
    if (lyap->parsed())
      return run_lyapunov(lyapOpts, resolve_threads(lyapOpts.threads));
    if (cons->parsed()) return run_constant(matrixSpec, constOpts);
    if (gal->parsed()) {
      if (galList->parsed()) return run_gallery_list(listOpts);
      if (galVerify->parsed())
        return run_gallery_verify(verifyId, verifyOpts,
                                  resolve_threads(verifyOpts.threads));
      if (galSearch->parsed())
        return run_search(galFamily, galBudget, galSearchOpts,
                          resolve_threads(galSearchOpts.threads));
    }
    if (search->parsed())
      return run_search(family, budget, searchOpts,
                        resolve_threads(searchOpts.threads));
    std::cerr << "perpetua: no command selected\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "perpetua: " << e.what() << "\n";
    return 2;
  } catch (const InvalidInput& e) {
    std::cerr << "perpetua: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "perpetua: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "perpetua: " << e.what() << "\n";
    return 1;
  }
}

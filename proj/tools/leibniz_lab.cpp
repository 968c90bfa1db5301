// leibniz-lab: command-line front end for the verification suites, the worked
// examples, the counterexample search and the dual-norm calculator.
//
// Exit codes: 0 success, 1 check/suite failure, 2 usage or input error.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "leibniz/core.hpp"
#include "leibniz/kernels.hpp"
#include "leibniz/knorms.hpp"
#include "leibniz/operators.hpp"
#include "leibniz/search.hpp"
#include "leibniz/suites.hpp"
#include "leibniz/verify.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;
using namespace leibniz;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string out;
  bool json = false;
};

std::uint64_t resolve_seed(const GlobalFlags& g, std::uint64_t fallback) {
  if (g.seed) return *g.seed;
  if (const char* env = std::getenv("LEIBNIZ_LAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError("LEIBNIZ_LAB_SEED is not an unsigned integer");
    }
  }
  return fallback;
}

// "[1, 2.5]" or "1,2.5".
RealVector parse_vector(const std::string& text) {
  try {
    if (!text.empty() && text.front() == '[') return json::parse(text).get<RealVector>();
    RealVector out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw UsageError("bad number '" + item + "'");
    }
    if (out.empty()) throw UsageError("empty vector");
    return out;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError("cannot parse vector '" + text + "': " + e.what());
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_manifest(const std::filesystem::path& path, const std::string& command, const json& config,
                    std::uint64_t seed, double wall, const std::vector<std::string>& outputs) {
  json m{{"command", command},       {"config", config},   {"seed", seed},
         {"artifact_version", kVersion}, {"kernels", kernels::active().name},
         {"wall_time_seconds", wall}, {"outputs", outputs}};
  std::ofstream(path) << m.dump(2) << "\n";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  std::size_t trials = 1000;
  std::size_t n = 8;
  std::size_t n_min = 2;
  std::string p = "2";
};

int cmd_verify(const GlobalFlags& g, const VerifyArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Suite> suites;
  if (a.suite == "all") {
    suites = all_suites();
  } else {
    try {
      suites.push_back(parse_suite(a.suite));
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }
  SuiteOptions opt;
  opt.trials = a.trials;
  opt.n_max = a.n;
  opt.n_min = std::min(a.n_min, a.n);
  opt.seed = resolve_seed(g, 0);
  opt.tol = g.tol.value_or(-1.0);
  try {
    opt.p = Exponent::parse(a.p);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }

  std::ofstream out;
  if (!g.out.empty()) {
    out.open(g.out);
    if (!out) throw UsageError("cannot open " + g.out);
  }

  bool ok = true;
  json summary = json::array();
  for (Suite s : suites) {
    const SuiteResult r = run_suite(s, opt);
    ok = ok && r.ok();
    if (out)
      for (const auto& rep : r.reports) {
        json j = rep;
        j["suite"] = to_string(s);
        out << j.dump() << "\n";
      }
    const json line{{"suite", to_string(s)},
                    {"reports", r.reports.size()},
                    {"failures", r.failures},
                    {"expected_failures", r.expected_failures},
                    {"theorem_backed", r.theorem_backed},
                    {"worst_violation", r.worst_violation},
                    {"ok", r.ok()}};
    summary.push_back(line);
    if (!g.json) {
      std::cout << std::left << std::setw(16) << to_string(s) << " reports=" << r.reports.size()
                << " failures=" << r.failures << " expected_failures=" << r.expected_failures
                << " worst(lhs-rhs)=" << fmt(r.worst_violation);
      if (!r.theorem_backed)
        std::cout << (r.failures || r.expected_failures ? "  [violations reported; not theorem-backed]"
                                                        : "  [no violation found; evidence only]");
      else
        std::cout << (r.ok() ? "  PASS" : "  FAIL");
      std::cout << "\n";
    }
  }
  if (g.json) std::cout << summary.dump(2) << "\n";
  if (!g.out.empty()) {
    const json config{{"suite", a.suite}, {"trials", a.trials}, {"n", a.n}, {"n_min", opt.n_min}, {"p", a.p},
                      {"tol", opt.tol}};
    write_manifest(g.out + ".manifest.json", "verify", config, opt.seed, seconds_since(t0), {g.out});
  }
  return ok ? 0 : 1;
}

// ---- examples -------------------------------------------------------------

int cmd_examples(const GlobalFlags& g) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto reports = reproduce_worked_examples(g.tol.value_or(0.0));
  bool all_match = true;
  json arr = json::array();
  for (const auto& r : reports) {
    all_match = all_match && r.details.value("matches_reference", false);
    arr.push_back(r);
  }
  if (g.json) {
    std::cout << arr.dump(2) << "\n";
  } else {
    for (const auto& r : reports) {
      std::cout << r.name << "\n"
                << "  lhs = " << fmt(r.lhs) << "  (reference " << r.details["reference_lhs"] << ")\n"
                << "  rhs = " << fmt(r.rhs);
      if (r.details.contains("reference_rhs")) std::cout << "  (reference " << r.details["reference_rhs"] << ")";
      std::cout << "\n";
      if (r.details.contains("reference_f_spread"))
        std::cout << "  ||f - Ef||_1 = " << fmt(r.details["f_spread"].get<double>()) << "  (reference "
                  << r.details["reference_f_spread"] << ")\n";
      std::cout << "  " << (r.pass ? "inequality holds" : "violation confirmed") << "; "
                << (r.details["matches_reference"].get<bool>() ? "matches reference values"
                                                               : "DOES NOT match reference values")
                << " (tolerance " << r.details["reference_tolerance"] << ")\n";
    }
  }
  if (!g.out.empty()) {
    std::ofstream out(g.out);
    for (const auto& r : reports) out << json(r).dump() << "\n";
    write_manifest(g.out + ".manifest.json", "examples", {{"tol", g.tol.value_or(0.0)}}, 0, seconds_since(t0),
                   {g.out});
  }
  return all_match ? 0 : 1;
}

// ---- search ---------------------------------------------------------------

int cmd_search(const GlobalFlags& g, const std::string& config_path, std::size_t workers) {
  const auto t0 = std::chrono::steady_clock::now();
  SearchConfig config;
  try {
    std::ifstream in(config_path);
    if (!in) throw UsageError("cannot open config " + config_path);
    const json raw = json::parse(in);
    config = config_from_json(raw);
    if (!raw.contains("seed")) config.seed = resolve_seed(g, 0);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(std::string("invalid search config: ") + e.what());
  }
  if (g.seed) config.seed = *g.seed;
  if (workers) config.workers = workers;

  const auto results = search(config);
  json out{{"config", to_json(config)}, {"results", json::array()}};
  for (const auto& r : results) out["results"].push_back(to_json(r));

  if (g.json) {
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& r : results)
      std::cout << "target=" << to_string(r.target) << " p=" << r.p.to_string()
                << " best_violation=" << fmt(r.best_violation) << " trial=" << r.best_trial << "  " << r.verdict
                << "\n";
  }

  if (!g.out.empty()) {
    const std::filesystem::path dir(g.out);
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "search_result.json") << out.dump(2) << "\n";
    std::ofstream hist(dir / "history.csv");
    hist << "p,trial,best_violation\n";
    for (const auto& r : results)
      for (std::size_t i = 0; i < r.history.size(); ++i)
        hist << r.p.to_string() << "," << i << "," << fmt(r.history[i]) << "\n";
    std::ofstream sweep(dir / "sweep.csv");
    sweep << "p,best_violation,best_trial,verdict\n";
    for (const auto& r : results)
      sweep << r.p.to_string() << "," << fmt(r.best_violation) << "," << r.best_trial << ",\"" << r.verdict << "\"\n";
    write_manifest(dir / "manifest.json", "search", to_json(config), config.seed, seconds_since(t0),
                   {(dir / "search_result.json").string(), (dir / "history.csv").string(),
                    (dir / "sweep.csv").string()});
  }
  return 0;
}

// ---- dualnorm -------------------------------------------------------------

int cmd_dualnorm(const GlobalFlags& g, const std::string& xs, const std::string& ws, std::size_t k) {
  const RealVector x = parse_vector(xs);
  RealVector w = ws.empty() ? RealVector(x.size(), 1.0) : parse_vector(ws);
  json out{{"x", x}, {"w", w}, {"k", k}};
  try {
    const WeightVector wv(w);
    out["formula"] = dual_weighted_k_norm(x, wv, k);
    if (x.size() <= kExtremePointCap) {
      const double brute = dual_norm_bruteforce(x, wv, k);
      out["bruteforce"] = brute;
      out["difference"] = std::fabs(brute - out["formula"].get<double>());
    }
    if (std::all_of(w.begin(), w.end(), [](double v) { return v == 1.0; })) {
      out["ky_fan_dual"] = std::max(counting_lp_norm(x, Exponent::infinity()),
                                    counting_lp_norm(x, Exponent(1.0)) / static_cast<double>(k));
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (g.json) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "formula     " << fmt(out["formula"].get<double>()) << "\n";
    if (out.contains("bruteforce")) {
      std::cout << "bruteforce  " << fmt(out["bruteforce"].get<double>()) << "\n";
      std::cout << "difference  " << fmt(out["difference"].get<double>()) << "\n";
    }
    if (out.contains("ky_fan_dual"))
      std::cout << "max(|x|_inf, |x|_1/k)  " << fmt(out["ky_fan_dual"].get<double>()) << "\n";
  }
  return 0;
}

// ---- inspect --------------------------------------------------------------

int cmd_inspect(const GlobalFlags& g, const std::string& kind, const std::string& xs, const std::string& phi_text) {
  (void)g;
  const RealVector x = parse_vector(xs);
  SquareMatrix m;
  json out{{"kind", kind}, {"x", x}};
  try {
    if (kind == "theta") {
      m = theta_matrix(x).entries;
    } else if (kind == "deflated") {
      m = deflated_theta(x);
    } else if (kind == "divided") {
      if (phi_text.empty()) throw UsageError("--phi is required for kind=divided");
      const PiecewiseLinearFn phi = phi_from_json(json::parse(phi_text));
      m = divided_difference_matrix(x, phi);
      out["phi"] = phi_to_json(phi);
      out["lipschitz"] = phi.lipschitz();
      out["monotone"] = phi.is_monotone();
    } else {
      throw UsageError("unknown matrix kind '" + kind + "' (theta | deflated | divided)");
    }
  } catch (const UsageError&) {
    throw;
  } catch (const DegenerateInput& e) {
    throw UsageError(e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad --phi JSON: ") + e.what());
  }
  out["n"] = m.size();
  out["entries"] = m.data();
  out["symmetric"] = m.is_symmetric(1e-12);
  out["max_abs_line_sum"] = m.max_abs_line_sum();
  out["laplacian"] = LaplacianMatrix::try_make(m).has_value();
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for Leibniz-type inequalities of centered random variables"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  GlobalFlags g;
  std::uint64_t seed_value = 0;
  double tol_value = 0.0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Base seed (falls back to LEIBNIZ_LAB_SEED)");
  auto* tol_opt = app.add_option("--tol", tol_value, "Tolerance override")->check(CLI::NonNegativeNumber);
  app.add_option("--out", g.out, "Output file (verify/examples) or directory (search)");
  app.add_flag("--json", g.json, "Machine-readable output on stdout");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run a randomized property suite");
  verify->add_option("--suite", va.suite, "theorem1|holder|decomposition|lemma3|theorem2|theorem3|markov|square|"
                                          "strong-leibniz|lemma4|derivation|replication|all")
      ->required();
  verify->add_option("--trials", va.trials, "Random instances per suite")->check(CLI::PositiveNumber);
  verify->add_option("--n", va.n, "Largest number of atoms")->check(CLI::Range(1, 64));
  verify->add_option("--n-min", va.n_min, "Smallest number of atoms")->check(CLI::Range(1, 64));
  verify->add_option("--p", va.p, "Exponent for the strong-leibniz sweep (number or inf)");

  auto* examples = app.add_subcommand("examples", "Recompute the two worked counterexamples");

  std::string config_path;
  std::size_t workers = 0;
  auto* search_cmd = app.add_subcommand("search", "Counterexample search from a JSON config");
  search_cmd->add_option("--config", config_path, "SearchConfig JSON file")->required();
  search_cmd->add_option("--workers", workers, "Worker threads (0: all cores)");

  std::string xs, ws, phi_text, kind = "theta";
  std::size_t k = 1;
  auto* dualnorm = app.add_subcommand("dualnorm", "Dual weighted k-norm: closed form vs brute force");
  dualnorm->add_option("--x", xs, "Vector, e.g. 3,1 or [3,1]")->required();
  dualnorm->add_option("--w", ws, "Non-increasing positive weights (default all ones)");
  dualnorm->add_option("--k", k, "Rank")->required();

  auto* inspect = app.add_subcommand("inspect", "Print a constructed matrix as JSON");
  inspect->add_option("--kind", kind, "theta | deflated | divided");
  inspect->add_option("--x", xs, "Source vector / nodes")->required();
  inspect->add_option("--phi", phi_text, "Piecewise-linear phi as JSON {breakpoints, slopes, anchor}");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (*seed_opt) g.seed = seed_value;
  if (*tol_opt) g.tol = tol_value;

  try {
    if (*verify) return cmd_verify(g, va);
    if (*examples) return cmd_examples(g);
    if (*search_cmd) return cmd_search(g, config_path, workers);
    if (*dualnorm) return cmd_dualnorm(g, xs, ws, k);
    if (*inspect) return cmd_inspect(g, kind, xs, phi_text);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

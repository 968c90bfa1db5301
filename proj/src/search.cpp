#include "leibniz/search.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <thread>

#include "leibniz/verify.hpp"

namespace leibniz {

std::string to_string(SearchTarget t) {
  switch (t) {
    case SearchTarget::ChainRule: return "chain_rule";
    case SearchTarget::StrongLeibniz: return "strong_leibniz";
    case SearchTarget::Leibniz: return "leibniz";
    case SearchTarget::SquareBound: return "square_bound";
    case SearchTarget::MarkovVariance: return "markov_variance";
  }
  return "chain_rule";
}

SearchTarget parse_target(const std::string& s) {
  for (auto t : {SearchTarget::ChainRule, SearchTarget::StrongLeibniz, SearchTarget::Leibniz,
                 SearchTarget::SquareBound, SearchTarget::MarkovVariance})
    if (to_string(t) == s) return t;
  throw InvalidArgument("unknown search target '" + s + "'");
}

void SearchConfig::validate() const {
  if (trials < 1) throw InvalidArgument("search: trials must be >= 1");
  if (n < 2 || n > kMaxSearchAtoms) throw InvalidArgument("search: n must lie in 2..16");
  if (phi.max_breakpoints > kMaxBreakpoints) throw InvalidArgument("search: at most 8 breakpoints");
  if (p_grid.empty()) throw InvalidArgument("search: empty exponent grid");
}

namespace {

bool uses_phi(SearchTarget t) { return t == SearchTarget::ChainRule || t == SearchTarget::MarkovVariance; }

const std::array<Exponent, 6>& exponent_grid() {
  static const std::array<Exponent, 6> grid{Exponent(1.0), Exponent(1.5), Exponent(2.0),
                                            Exponent(3.0), Exponent(4.0), Exponent::infinity()};
  return grid;
}

HolderTriple random_triple(std::mt19937_64& rng, Exponent r) {
  std::vector<Exponent> admissible;
  for (const auto& e : exponent_grid())
    if (r <= e) admissible.push_back(e);
  std::uniform_int_distribution<std::size_t> pick(0, admissible.size() - 1);
  return HolderTriple::from_rp(r, admissible[pick(rng)]);
}

// Keeps every weight >= kMassFloor and the total at 1.
bool project_simplex(RealVector& mu) {
  const double n = static_cast<double>(mu.size());
  double excess = 0.0;
  for (double& v : mu) {
    v = std::max(0.0, v - kMassFloor);
    excess += v;
  }
  if (!(excess > 0.0)) return false;
  const double free_mass = 1.0 - n * kMassFloor;
  for (double& v : mu) v = kMassFloor + free_mass * v / excess;
  return true;
}

// Lipschitz constant renormalized to 1, sign class kept for monotone phi.
std::optional<PiecewiseLinearFn> normalized_phi(RealVector breakpoints, RealVector slopes, double anchor,
                                                int sign_class) {
  for (double& s : slopes) {
    if (sign_class > 0) s = std::max(0.0, s);
    if (sign_class < 0) s = std::min(0.0, s);
    s = std::clamp(s, -1.0, 1.0);
  }
  double lip = 0.0;
  for (double s : slopes) lip = std::max(lip, std::fabs(s));
  if (!(lip > 0.0)) return std::nullopt;
  for (double& s : slopes) s /= lip;
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i] - breakpoints[i - 1] > 1e-6)) return std::nullopt;
  return PiecewiseLinearFn(std::move(breakpoints), std::move(slopes), anchor);
}

int sign_class_of(const PiecewiseLinearFn& phi, bool monotone) {
  if (!monotone) return 0;
  return phi.is_increasing() ? 1 : -1;
}

}  // namespace

VerificationReport replay(const Instance& inst, SearchTarget target, double tol) {
  const ProbVector mu(inst.mu);
  switch (target) {
    case SearchTarget::ChainRule: return check_chain_rule(mu, inst.f, inst.phi.value(), inst.p, tol);
    case SearchTarget::StrongLeibniz: return check_strong_leibniz(mu, inst.f, inst.p, tol);
    case SearchTarget::Leibniz: return check_leibniz(mu, inst.f, inst.g, inst.t1.value(), inst.t2.value(), tol);
    case SearchTarget::SquareBound: return check_square_bound(mu, inst.f, inst.p, tol);
    case SearchTarget::MarkovVariance: return check_markov_variance(mu, inst.f, inst.phi.value(), tol);
  }
  throw InvalidArgument("replay: unknown target");
}

namespace {

RealVector pointwise(std::span<const double> a, std::span<const double> b) {
  RealVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

}  // namespace

// Same quantities as the verify checkers, without building reports; the
// search calls this millions of times.
double violation(const Instance& inst, SearchTarget target) {
  const ProbVector mu(inst.mu);
  switch (target) {
    case SearchTarget::ChainRule: {
      const RealVector phi_f = inst.phi.value().apply(inst.f);
      return centered_lp_norm(phi_f, mu, inst.p) - inst.phi->lipschitz() * centered_lp_norm(inst.f, mu, inst.p);
    }
    case SearchTarget::StrongLeibniz: {
      RealVector inv(inst.f.size());
      double sup = 0.0;
      for (std::size_t i = 0; i < inv.size(); ++i) {
        inv[i] = 1.0 / inst.f[i];
        sup = std::max(sup, std::fabs(inv[i]));
      }
      return centered_lp_norm(inv, mu, inst.p) - sup * sup * centered_lp_norm(inst.f, mu, inst.p);
    }
    case SearchTarget::Leibniz: {
      const HolderTriple& a = inst.t1.value();
      const HolderTriple& b = inst.t2.value();
      const double lhs = centered_lp_norm(pointwise(inst.f, inst.g), mu, a.r);
      return lhs - lp_norm(inst.f, mu, a.p) * centered_lp_norm(inst.g, mu, a.q) -
             lp_norm(inst.g, mu, b.p) * centered_lp_norm(inst.f, mu, b.q);
    }
    case SearchTarget::SquareBound: {
      double sup = 0.0;
      for (double v : inst.f) sup = std::max(sup, std::fabs(v));
      return centered_lp_norm(pointwise(inst.f, inst.f), mu, inst.p) - 2.0 * sup * centered_lp_norm(inst.f, mu, inst.p);
    }
    case SearchTarget::MarkovVariance: {
      const double lip = inst.phi.value().lipschitz();
      return variance(inst.phi->apply(inst.f), mu) - lip * lip * variance(inst.f, mu);
    }
  }
  throw InvalidArgument("violation: unknown target");
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over a combination of both inputs
  std::uint64_t z = seed ^ (index + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Instance random_instance(const SearchConfig& config, std::uint64_t seed, Exponent p) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  const std::size_t n = config.n;

  Instance inst;
  inst.p = p;
  inst.mu.resize(n);
  double total = 0.0;
  for (double& v : inst.mu) total += (v = expo(rng));
  const double free_mass = 1.0 - static_cast<double>(n) * kMassFloor;
  for (double& v : inst.mu) v = kMassFloor + free_mass * v / total;

  inst.f.resize(n);
  if (config.target == SearchTarget::StrongLeibniz) {
    std::uniform_real_distribution<double> mag(kInverseFloor, 1.0);
    for (double& v : inst.f) v = (unit(rng) < 0.0 ? -1.0 : 1.0) * mag(rng);
  } else {
    for (double& v : inst.f) v = unit(rng);
  }

  if (config.target == SearchTarget::Leibniz) {
    inst.g.resize(n);
    for (double& v : inst.g) v = unit(rng);
    inst.t1 = random_triple(rng, p);
    inst.t2 = random_triple(rng, p);
  }

  if (uses_phi(config.target)) {
    std::uniform_int_distribution<std::size_t> count(0, config.phi.max_breakpoints);
    const std::size_t b = count(rng);
    RealVector bps(b);
    for (double& v : bps) v = unit(rng);
    std::sort(bps.begin(), bps.end());
    const int sign_class = config.phi.monotone ? (unit(rng) < 0.0 ? -1 : 1) : 0;
    RealVector slopes(b + 1);
    for (double& s : slopes) s = unit(rng);
    if (sign_class != 0)
      for (double& s : slopes) s = sign_class * std::fabs(s);
    const double anchor = unit(rng);
    auto phi = normalized_phi(bps, slopes, anchor, sign_class);
    if (!phi) phi = normalized_phi({}, {sign_class < 0 ? -1.0 : 1.0}, anchor, sign_class);
    inst.phi = std::move(phi);
  }
  return inst;
}

Instance refine(const Instance& start, SearchTarget target, std::size_t steps, const PhiClass& phi_class) {
  if (steps == 0) return start;
  Instance best = start;
  double best_v = violation(best, target);
  const int sign_class = best.phi ? sign_class_of(*best.phi, phi_class.monotone) : 0;

  const auto try_candidate = [&](Instance&& cand) {
    const double v = violation(cand, target);
    if (v > best_v) {
      best_v = v;
      best = std::move(cand);
    }
  };

  for (double delta : {0.1, 0.01, 0.001}) {
    for (std::size_t sweep = 0; sweep < steps; ++sweep) {
      for (double dir : {1.0, -1.0}) {
        const double d = dir * delta;
        for (std::size_t i = 0; i < best.mu.size(); ++i) {
          Instance c = best;
          c.mu[i] += d;
          if (project_simplex(c.mu)) try_candidate(std::move(c));
        }
        for (std::size_t i = 0; i < best.f.size(); ++i) {
          Instance c = best;
          if (target == SearchTarget::StrongLeibniz) {
            const double sign = c.f[i] < 0.0 ? -1.0 : 1.0;
            c.f[i] = sign * std::clamp(std::fabs(c.f[i]) + d, kInverseFloor, 1.0);
          } else {
            c.f[i] = std::clamp(c.f[i] + d, -1.0, 1.0);
          }
          try_candidate(std::move(c));
        }
        for (std::size_t i = 0; i < best.g.size(); ++i) {
          Instance c = best;
          c.g[i] = std::clamp(c.g[i] + d, -1.0, 1.0);
          try_candidate(std::move(c));
        }
        if (best.phi) {
          for (std::size_t i = 0; i < best.phi->slopes().size(); ++i) {
            RealVector s = best.phi->slopes();
            s[i] += d;
            if (auto phi = normalized_phi(best.phi->breakpoints(), std::move(s), best.phi->anchor(), sign_class)) {
              Instance c = best;
              c.phi = std::move(phi);
              try_candidate(std::move(c));
            }
          }
          for (std::size_t i = 0; i < best.phi->breakpoints().size(); ++i) {
            RealVector b = best.phi->breakpoints();
            b[i] += d;
            if (auto phi = normalized_phi(std::move(b), best.phi->slopes(), best.phi->anchor(), sign_class)) {
              Instance c = best;
              c.phi = std::move(phi);
              try_candidate(std::move(c));
            }
          }
        }
      }
    }
  }
  return best;
}

namespace {

bool theorem_backed(const SearchConfig& config) {
  switch (config.target) {
    case SearchTarget::ChainRule: return config.phi.monotone;
    case SearchTarget::StrongLeibniz: return false;
    default: return true;
  }
}

Instance run_trial(const SearchConfig& config, Exponent p, std::size_t index) {
  const Instance start = random_instance(config, trial_seed(config.seed, index), p);
  return refine(start, config.target, config.refine_steps, config.phi);
}

}  // namespace

SearchResult search_at(const SearchConfig& config, Exponent p) {
  config.validate();
  std::vector<double> per_trial(config.trials, 0.0);
  std::size_t workers = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, config.trials);

  const auto work = [&](std::size_t w) {
    for (std::size_t i = w; i < config.trials; i += workers) per_trial[i] = violation(run_trial(config, p, i), config.target);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  SearchResult result;
  result.target = config.target;
  result.p = p;
  result.trials = config.trials;
  result.history.resize(config.trials);
  result.best_violation = per_trial[0];
  for (std::size_t i = 0; i < config.trials; ++i) {
    if (per_trial[i] > result.best_violation) {
      result.best_violation = per_trial[i];
      result.best_trial = i;
    }
    result.history[i] = result.best_violation;
  }
  result.witness = run_trial(config, p, result.best_trial);

  const std::string budget = std::to_string(config.trials) + " trials x " + std::to_string(config.refine_steps) +
                             " refinement sweeps";
  if (result.best_violation > kDefaultInequalityTol) {
    result.verdict = theorem_backed(config) ? "VIOLATION FOUND for a theorem-backed inequality (" + budget + ")"
                                            : "violation found (" + budget + ")";
  } else {
    result.verdict = "no violation found (budget " + budget + "); empirical evidence, not proof";
  }
  return result;
}

std::vector<SearchResult> search(const SearchConfig& config) {
  config.validate();
  std::vector<SearchResult> out;
  for (const auto& p : config.p_grid) out.push_back(search_at(config, p));
  return out;
}

PiecewiseLinearFn two_piece_phi() {
  // -(x + 11/15) left of 1/15, (3/5) x - 21/25 right of it; both give -4/5 at the knot.
  return PiecewiseLinearFn({1.0 / 15.0}, {-1.0, 3.0 / 5.0}, -12.0 / 15.0);
}

std::vector<VerificationReport> reproduce_worked_examples(double match_tol) {
  std::vector<VerificationReport> out;
  const auto near = [](double a, double b, double tol) { return std::fabs(a - b) <= tol; };

  const ProbVector mu1({1.0 / 36.0, 3.0 / 4.0, 2.0 / 9.0});
  const auto reciprocal = [&](std::string name, RealVector f) {
    VerificationReport r = check_strong_leibniz(mu1, f, Exponent(1.0));
    r.name = std::move(name);
    const double tol = match_tol > 0.0 ? match_tol : 5e-4;
    r.details["reference_lhs"] = 0.57783;
    r.details["reference_rhs"] = 0.5417;
    r.details["reference_tolerance"] = tol;
    r.details["matches_reference"] = near(r.lhs, 0.57783, tol) && near(r.rhs, 0.5417, tol);
    r.details["violation_confirmed"] = !r.pass;
    out.push_back(std::move(r));
  };
  reciprocal("example1_strong_leibniz", {-0.3, 0.28, 0.38});
  reciprocal("example1_strong_leibniz_f1_-0.36", {-0.36, 0.28, 0.38});

  const ProbVector mu2({1.0 / 6.0, 9.0 / 12.0, 1.0 / 12.0});
  const PiecewiseLinearFn phi = two_piece_phi();
  const RealVector f2{-11.0 / 15.0, 1.0 / 15.0, 13.0 / 15.0};
  VerificationReport r = check_chain_rule(mu2, f2, phi, Exponent(1.0));
  r.name = "example2_chain_rule";
  const double tol = match_tol > 0.0 ? match_tol : 1e-3;
  const double spread = r.details["f_spread"].get<double>();
  r.details["reference_lhs"] = 0.26;
  r.details["reference_f_spread"] = 0.244;
  r.details["reference_tolerance"] = tol;
  r.details["lipschitz"] = phi.lipschitz();
  r.details["matches_reference"] = near(r.lhs, 0.26, tol) && near(spread, 0.244, tol) && phi.lipschitz() == 1.0;
  r.details["violation_confirmed"] = !r.pass;
  out.push_back(std::move(r));
  return out;
}

nlohmann::json to_json(const Instance& inst) {
  nlohmann::json j{{"mu", inst.mu}, {"f", inst.f}, {"p", exponent_json(inst.p)}};
  if (!inst.g.empty()) j["g"] = inst.g;
  if (inst.phi) j["phi"] = phi_to_json(*inst.phi);
  if (inst.t1) j["t1"] = triple_json(*inst.t1);
  if (inst.t2) j["t2"] = triple_json(*inst.t2);
  return j;
}

Instance instance_from_json(const nlohmann::json& j) {
  Instance inst;
  inst.mu = j.at("mu").get<RealVector>();
  inst.f = j.at("f").get<RealVector>();
  inst.p = exponent_from_json(j.at("p"));
  if (j.contains("g")) inst.g = j["g"].get<RealVector>();
  if (j.contains("phi")) inst.phi = phi_from_json(j["phi"]);
  if (j.contains("t1")) inst.t1 = triple_from_json(j["t1"]);
  if (j.contains("t2")) inst.t2 = triple_from_json(j["t2"]);
  return inst;
}

nlohmann::json to_json(const SearchConfig& c) {
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& p : c.p_grid) grid.push_back(exponent_json(p));
  return {{"target", to_string(c.target)},
          {"n", c.n},
          {"p_grid", grid},
          {"trials", c.trials},
          {"refine_steps", c.refine_steps},
          {"seed", c.seed},
          {"phi_class", {{"max_breakpoints", c.phi.max_breakpoints}, {"monotone", c.phi.monotone}}}};
}

SearchConfig config_from_json(const nlohmann::json& j) {
  SearchConfig c;
  c.target = parse_target(j.at("target").get<std::string>());
  c.n = j.value("n", c.n);
  if (j.contains("p_grid")) {
    c.p_grid.clear();
    for (const auto& e : j["p_grid"]) c.p_grid.push_back(exponent_from_json(e));
  }
  c.trials = j.value("trials", c.trials);
  c.refine_steps = j.value("refine_steps", c.refine_steps);
  c.seed = j.value("seed", c.seed);
  c.workers = j.value("workers", c.workers);
  if (j.contains("phi_class")) {
    c.phi.max_breakpoints = j["phi_class"].value("max_breakpoints", c.phi.max_breakpoints);
    c.phi.monotone = j["phi_class"].value("monotone", c.phi.monotone);
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const SearchResult& r) {
  return {{"target", to_string(r.target)},
          {"p", exponent_json(r.p)},
          {"trials", r.trials},
          {"best_violation", r.best_violation},
          {"best_trial", r.best_trial},
          {"witness", to_json(r.witness)},
          {"verdict", r.verdict}};
}

}  // namespace leibniz

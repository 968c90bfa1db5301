#pragma once

// Randomized counterexample search with coordinate hill-climbing refinement.
//
// Every trial is a pure function of (config, trial index): its seed is
// trial_seed(config.seed, index), so results do not depend on the number of
// worker threads. The best trial is chosen by largest violation, lowest index
// on ties.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "leibniz/core.hpp"
#include "leibniz/operators.hpp"
#include "leibniz/report.hpp"

namespace leibniz {

enum class SearchTarget { ChainRule, StrongLeibniz, Leibniz, SquareBound, MarkovVariance };

std::string to_string(SearchTarget t);
SearchTarget parse_target(const std::string& s);

inline constexpr double kMassFloor = 1e-3;
inline constexpr double kInverseFloor = 0.05;  // |f_i| lower bound for strong_leibniz instances
inline constexpr std::size_t kMaxBreakpoints = 8;
inline constexpr std::size_t kMaxSearchAtoms = 16;

struct PhiClass {
  std::size_t max_breakpoints = 2;
  bool monotone = false;
};

struct SearchConfig {
  SearchTarget target = SearchTarget::ChainRule;
  std::size_t n = 3;
  std::vector<Exponent> p_grid{Exponent(1.0)};
  std::size_t trials = 1000;
  std::size_t refine_steps = 2;  // sweeps per step-size epoch
  std::uint64_t seed = 0;
  PhiClass phi;
  std::size_t workers = 0;  // 0: hardware concurrency

  void validate() const;
};

// One point of the search space. Which fields are used depends on the target:
// g and the triples for Leibniz, phi for ChainRule/MarkovVariance. For Leibniz
// p is the shared r of both triples.
struct Instance {
  RealVector mu;
  RealVector f;
  RealVector g;
  std::optional<PiecewiseLinearFn> phi;
  Exponent p;
  std::optional<HolderTriple> t1;
  std::optional<HolderTriple> t2;
};

VerificationReport replay(const Instance& inst, SearchTarget target, double tol = kDefaultInequalityTol);
// lhs - rhs; positive means the inequality fails.
double violation(const Instance& inst, SearchTarget target);

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index);

Instance random_instance(const SearchConfig& config, std::uint64_t seed, Exponent p);

// Greedy coordinate ascent on violation() with step sizes 0.1, 0.01, 0.001,
// `steps` sweeps each. Only strict improvements are accepted.
Instance refine(const Instance& inst, SearchTarget target, std::size_t steps, const PhiClass& phi_class = {});

struct SearchResult {
  SearchTarget target = SearchTarget::ChainRule;
  Exponent p;
  std::size_t trials = 0;
  double best_violation = 0.0;
  std::size_t best_trial = 0;
  Instance witness;
  std::vector<double> history;  // running best violation after each trial
  std::string verdict;
};

SearchResult search_at(const SearchConfig& config, Exponent p);
std::vector<SearchResult> search(const SearchConfig& config);

// Runs the reciprocal instance (as given and with f_1 = -0.36) and the
// two-piece chain-rule instance. details carry reference_lhs/reference_rhs,
// matches_reference and violation_confirmed. match_tol <= 0 uses the built-in
// per-value tolerances.
std::vector<VerificationReport> reproduce_worked_examples(double match_tol = 0.0);
PiecewiseLinearFn two_piece_phi();

nlohmann::json to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SearchConfig& c);
SearchConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SearchResult& r);

}  // namespace leibniz

#include <doctest.h>

#include <cmath>
#include <set>

#include "leibniz/search.hpp"
#include "leibniz/suites.hpp"
#include "leibniz/verify.hpp"

using namespace leibniz;

namespace {

SearchConfig small_config(SearchTarget target, std::size_t trials = 300) {
  SearchConfig c;
  c.target = target;
  c.n = 3;
  c.trials = trials;
  c.refine_steps = 1;
  c.seed = 99;
  c.workers = 2;
  return c;
}

}  // namespace

TEST_CASE("config validation and json") {
  SearchConfig c = small_config(SearchTarget::ChainRule);
  CHECK_NOTHROW(c.validate());
  c.n = 0;
  CHECK_THROWS(c.validate());
  c.n = kMaxSearchAtoms + 1;
  CHECK_THROWS(c.validate());
  c = small_config(SearchTarget::ChainRule);
  c.phi.max_breakpoints = kMaxBreakpoints + 1;
  CHECK_THROWS(c.validate());

  c = small_config(SearchTarget::Leibniz);
  c.p_grid = {Exponent(1.0), Exponent::infinity()};
  const auto back = config_from_json(to_json(c));
  CHECK(back.target == c.target);
  CHECK(back.p_grid == c.p_grid);
  CHECK(back.seed == c.seed);
  CHECK(back.trials == c.trials);
  CHECK_THROWS(config_from_json(nlohmann::json{{"target", "nonsense"}}));
  CHECK_THROWS(config_from_json(nlohmann::json{{"target", "chain_rule"}, {"n", -3}}));
  for (auto t : {SearchTarget::ChainRule, SearchTarget::StrongLeibniz, SearchTarget::Leibniz, SearchTarget::SquareBound,
                 SearchTarget::MarkovVariance})
    CHECK(parse_target(to_string(t)) == t);
}

TEST_CASE("trial seeds are distinct and deterministic") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(trial_seed(7, i));
  CHECK(seen.size() == 10000);
  CHECK(trial_seed(7, 3) == trial_seed(7, 3));
  CHECK(trial_seed(7, 3) != trial_seed(8, 3));
}

TEST_CASE("random instances respect the mass floor and sampling classes") {
  SearchConfig c = small_config(SearchTarget::ChainRule);
  c.phi.monotone = true;
  for (std::uint64_t s = 0; s < 500; ++s) {
    const auto inst = random_instance(c, trial_seed(1, s), Exponent(2.0));
    double sum = 0;
    for (double m : inst.mu) {
      CHECK(m >= kMassFloor * (1 - 1e-12));
      sum += m;
    }
    CHECK(std::fabs(sum - 1.0) <= 1e-12);
    REQUIRE(inst.phi.has_value());
    CHECK(inst.phi->is_monotone());
    CHECK(inst.phi->lipschitz() <= 1.0 + 1e-12);
    CHECK(inst.phi->breakpoints().size() <= c.phi.max_breakpoints);
  }
  SearchConfig s = small_config(SearchTarget::StrongLeibniz);
  for (std::uint64_t k = 0; k < 200; ++k)
    for (double v : random_instance(s, k, Exponent(2.0)).f) CHECK(std::fabs(v) >= kInverseFloor);
}

TEST_CASE("violation agrees with the replayed report") {
  for (auto t : {SearchTarget::ChainRule, SearchTarget::StrongLeibniz, SearchTarget::Leibniz, SearchTarget::SquareBound,
                 SearchTarget::MarkovVariance}) {
    const SearchConfig c = small_config(t);
    for (std::uint64_t k = 0; k < 100; ++k) {
      const Exponent p = k % 2 ? Exponent(1.0) : Exponent::infinity();
      const auto inst = random_instance(c, trial_seed(3, k), p);
      const auto rep = replay(inst, t);
      CHECK(violation(inst, t) == doctest::Approx(rep.violation()).epsilon(1e-12));
    }
  }
}

TEST_CASE("refinement never makes things worse and zero steps is the identity") {
  const SearchConfig c = small_config(SearchTarget::ChainRule);
  for (std::uint64_t k = 0; k < 40; ++k) {
    const auto inst = random_instance(c, trial_seed(5, k), Exponent(1.0));
    const double before = violation(inst, c.target);
    const auto same = refine(inst, c.target, 0, c.phi);
    CHECK(same.mu == inst.mu);
    CHECK(same.f == inst.f);
    const auto better = refine(inst, c.target, 2, c.phi);
    CHECK(violation(better, c.target) >= before);
    double sum = 0;
    for (double m : better.mu) {
      CHECK(m > 0);
      sum += m;
    }
    CHECK(std::fabs(sum - 1.0) <= 1e-12);
    CHECK(better.phi->lipschitz() <= 1.0 + 1e-12);
  }
}

TEST_CASE("refinement from the three-atom counterexample keeps it a violation") {
  Instance inst;
  inst.mu = {1.0 / 6, 9.0 / 12, 1.0 / 12};
  inst.f = {-11.0 / 15, 1.0 / 15, 13.0 / 15};
  inst.phi = two_piece_phi();
  inst.p = Exponent(1.0);
  const double start = violation(inst, SearchTarget::ChainRule);
  CHECK(start == doctest::Approx(0.26 - 0.2444444444444444).epsilon(1e-9));
  const auto out = refine(inst, SearchTarget::ChainRule, 3, PhiClass{});
  CHECK(violation(out, SearchTarget::ChainRule) >= 0.016);
}

TEST_CASE("search is deterministic and independent of worker count") {
  SearchConfig c = small_config(SearchTarget::ChainRule, 400);
  c.workers = 1;
  const auto a = search_at(c, Exponent(1.0));
  c.workers = 4;
  const auto b = search_at(c, Exponent(1.0));
  c.workers = 3;
  const auto d = search_at(c, Exponent(1.0));
  CHECK(a.best_violation == b.best_violation);
  CHECK(a.best_trial == b.best_trial);
  CHECK(a.history == b.history);
  CHECK(d.best_trial == a.best_trial);
  CHECK(to_json(a.witness) == to_json(b.witness));

  // History is the running maximum and ends at the best violation.
  for (std::size_t i = 1; i < a.history.size(); ++i) CHECK(a.history[i] >= a.history[i - 1]);
  CHECK(a.history.back() == a.best_violation);

  // The witness replays to the reported violation.
  const auto rep = replay(a.witness, c.target);
  CHECK(std::fabs(rep.violation() - a.best_violation) <= 1e-9);

  c.seed = 100;
  CHECK(search_at(c, Exponent(1.0)).best_violation != a.best_violation);
}

TEST_CASE("monotone phi finds no chain-rule violation") {
  SearchConfig c = small_config(SearchTarget::ChainRule, 500);
  c.phi.monotone = true;
  c.p_grid = {Exponent(1.0), Exponent(2.0), Exponent::infinity()};
  for (const auto& r : search(c)) {
    CHECK(r.best_violation <= 1e-9);
    CHECK(r.verdict.find("no violation found") == 0);
  }
}

TEST_CASE("non-monotone phi at p = 1 finds a violation") {
  const SearchConfig c = small_config(SearchTarget::ChainRule, 2000);
  const auto r = search_at(c, Exponent(1.0));
  CHECK(r.best_violation >= 0.01);
  CHECK(r.verdict.find("violation found") == 0);
}

TEST_CASE("theorem-backed targets report a loud verdict on violations") {
  const SearchConfig c = small_config(SearchTarget::Leibniz, 200);
  const auto r = search_at(c, Exponent(2.0));
  CHECK(r.best_violation <= 1e-9);
}

TEST_CASE("worked examples") {
  const auto reps = reproduce_worked_examples();
  REQUIRE(reps.size() == 3);
  CHECK_FALSE(reps[0].pass);
  CHECK_FALSE(reps[0].details["matches_reference"].get<bool>());
  CHECK(reps[1].details["matches_reference"].get<bool>());
  CHECK_FALSE(reps[1].pass);
  CHECK(reps[2].details["matches_reference"].get<bool>());
  CHECK_FALSE(reps[2].pass);
  CHECK(reps[2].details["lipschitz"].get<double>() == 1.0);
  // A looser tolerance lets the printed instance match too.
  CHECK(reproduce_worked_examples(0.05)[0].details["matches_reference"].get<bool>());
  CHECK_FALSE(reproduce_worked_examples(1e-6)[2].details["matches_reference"].get<bool>());
}

TEST_CASE("suites are deterministic and pass on small budgets") {
  SuiteOptions o;
  o.trials = 60;
  o.seed = 4;
  for (Suite s : all_suites()) {
    const auto a = run_suite(s, o), b = run_suite(s, o);
    CHECK(a.reports.size() == b.reports.size());
    CHECK(a.worst_violation == b.worst_violation);
    if (a.theorem_backed) CHECK_MESSAGE(a.ok(), to_string(s));
  }
  const auto sl = run_suite(Suite::StrongLeibniz, o);
  CHECK_FALSE(sl.theorem_backed);
  CHECK(sl.expected_failures == 1);
  CHECK(parse_suite("strong-leibniz") == Suite::StrongLeibniz);
  CHECK_THROWS(parse_suite("nope"));
}

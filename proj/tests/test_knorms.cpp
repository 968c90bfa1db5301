#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "leibniz/knorms.hpp"
#include "oracles.hpp"

using namespace leibniz;

namespace {

WeightVector random_weights(std::mt19937_64& rng, std::size_t n) {
  auto w = oracle::random_vec(rng, n, 0.1, 2.0);
  std::sort(w.begin(), w.end(), std::greater<>());
  return WeightVector(w);
}

}  // namespace

TEST_CASE("weight vectors must be positive and non-increasing") {
  CHECK_NOTHROW(WeightVector({2, 1, 1}));
  CHECK_THROWS_AS(WeightVector({1, 2}), InvalidArgument);
  CHECK_THROWS_AS(WeightVector({1, 0}), InvalidArgument);
  CHECK(WeightVector({3, 2, 1}).prefix_sum(2) == 5.0);
}

TEST_CASE("k-norms") {
  CHECK(k_norm(RealVector{3, -1, 2}, 2) == 5.0);
  CHECK(weighted_k_norm(RealVector{3, 1}, WeightVector({2, 1}), 2) == 7.0);
  CHECK_THROWS_AS(k_norm(RealVector{1, 2}, 0), InvalidArgument);
  CHECK_THROWS_AS(k_norm(RealVector{1, 2}, 3), InvalidArgument);
  CHECK_THROWS_AS(weighted_k_norm(RealVector{1, 2}, WeightVector({1, 1, 1}), 1), DimensionMismatch);

  std::mt19937_64 rng(10);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + t % 8;
    const auto x = oracle::random_vec(rng, n, -4, 4);
    CHECK(k_norm(x, 1) == oracle::lp(x, {}, 0));
    CHECK(k_norm(x, n) == doctest::Approx(counting_lp_norm(x, Exponent(1.0))).epsilon(1e-14));
    for (std::size_t k = 1; k <= n; ++k) {
      CHECK(k_norm(x, k) == doctest::Approx(oracle::knorm(x, k)).epsilon(1e-14));
      if (k > 1) CHECK(k_norm(x, k) >= k_norm(x, k - 1));
      CHECK(weighted_k_norm(x, WeightVector::ones(n), k) == doctest::Approx(k_norm(x, k)).epsilon(1e-14));
    }
  }
}

TEST_CASE("weighted k-norm is a norm on sampled instances") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + t % 7;
    const auto w = random_weights(rng, n);
    const std::size_t k = 1 + t % n;
    const auto x = oracle::random_vec(rng, n), y = oracle::random_vec(rng, n);
    RealVector s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = x[i] + y[i];
    CHECK(weighted_k_norm(s, w, k) <= weighted_k_norm(x, w, k) + weighted_k_norm(y, w, k) + 1e-12);
    const double a = u(rng);
    RealVector ax(x);
    for (double& v : ax) v *= a;
    CHECK(weighted_k_norm(ax, w, k) == doctest::Approx(std::fabs(a) * weighted_k_norm(x, w, k)).epsilon(1e-12));
  }
}

TEST_CASE("dual weighted k-norm closed form") {
  CHECK(dual_weighted_k_norm(RealVector{3, 1}, WeightVector({2, 1}), 2) == 1.5);
  CHECK(dual_norm_bruteforce(RealVector{3, 1}, WeightVector({2, 1}), 2) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(dual_weighted_k_norm(RealVector{0, 0, 0}, WeightVector::ones(3), 2) == 0.0);
  CHECK(dual_norm_bruteforce(RealVector{0, 0, 0}, WeightVector::ones(3), 2) == 0.0);
  for (std::size_t k = 1; k <= 4; ++k)
    CHECK(dual_norm_bruteforce(RealVector{1, 0, 0, 0}, WeightVector::ones(4), k) == doctest::Approx(1.0));

  std::mt19937_64 rng(12);
  for (int t = 0; t < 400; ++t) {
    const std::size_t n = 1 + t % 6;
    const auto x = oracle::random_vec(rng, n, -2, 2);
    const auto w = random_weights(rng, n);
    // k = 1: dual of w_1 times the sup norm.
    CHECK(dual_weighted_k_norm(x, w, 1) == doctest::Approx(oracle::knorm(x, n) / w[0]).epsilon(1e-14));
    for (std::size_t k = 1; k <= n; ++k) {
      const double ones = dual_weighted_k_norm(x, WeightVector::ones(n), k);
      CHECK(ones == doctest::Approx(std::max(oracle::lp(x, {}, 0), oracle::knorm(x, n) / k)).epsilon(1e-14));
      CHECK(std::fabs(dual_weighted_k_norm(x, w, k) - dual_norm_bruteforce(x, w, k)) <= 1e-9);
    }
  }
}

TEST_CASE("dual is never beaten by random test directions") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 2 + t % 4;
    const auto w = random_weights(rng, n);
    const std::size_t k = 1 + t % n;
    const auto x = oracle::random_vec(rng, n);
    const RealVector wv(w.values().begin(), w.values().end());
    const double lb = oracle::dual_lower_bound(x, wv, k, rng, 4000);
    const double d = dual_weighted_k_norm(x, w, k);
    CHECK(lb <= d + 1e-12);
    CHECK(lb >= 0.7 * d);  // random search gets reasonably close
  }
}

TEST_CASE("generalized Cauchy-Schwarz") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + t % 8;
    const auto w = random_weights(rng, n);
    const std::size_t k = 1 + (t / 8) % n;
    const auto x = oracle::random_vec(rng, n), y = oracle::random_vec(rng, n);
    double ip = 0;
    for (std::size_t i = 0; i < n; ++i) ip += x[i] * y[i];
    CHECK(std::fabs(ip) <= weighted_k_norm(x, w, k) * dual_weighted_k_norm(y, w, k) + 1e-9);
  }
}

TEST_CASE("both norms are symmetric under signed permutations") {
  std::mt19937_64 rng(15);
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto x = oracle::random_vec(rng, n);
    const auto w = random_weights(rng, n);
    for (std::size_t k = 1; k <= n; ++k) {
      const double base = weighted_k_norm(x, w, k), dbase = dual_weighted_k_norm(x, w, k);
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        for (unsigned signs = 0; signs < (1u << n); ++signs) {
          RealVector z(n);
          for (std::size_t i = 0; i < n; ++i) z[i] = ((signs >> i) & 1u ? -1.0 : 1.0) * x[perm[i]];
          CHECK(weighted_k_norm(z, w, k) == doctest::Approx(base).epsilon(1e-14));
          CHECK(dual_weighted_k_norm(z, w, k) == doctest::Approx(dbase).epsilon(1e-14));
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
}

TEST_CASE("extreme point candidates") {
  const auto k1 = extreme_point_candidates(WeightVector({2, 1, 1}), 1);
  CHECK(k1.points.size() == 8);  // only full-support sign patterns
  for (const auto& p : k1.points)
    for (double v : p) CHECK(std::fabs(v) == 0.5);

  std::mt19937_64 rng(16);
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::size_t k = 1; k <= n; ++k) {
      const auto w = random_weights(rng, n);
      const auto set = extreme_point_candidates(w, k);
      std::size_t expect = 1u << n;  // |S| = n
      for (std::size_t s = 1; s < k && s < n; ++s) {
        std::size_t binom = 1;
        for (std::size_t i = 0; i < s; ++i) binom = binom * (n - i) / (i + 1);
        expect += binom << s;
      }
      CHECK(set.points.size() == expect);
      for (const auto& p : set.points) CHECK(std::fabs(weighted_k_norm(p, w, k) - 1.0) <= 1e-12);
    }

  CHECK_THROWS_AS(extreme_point_candidates(WeightVector::ones(13), 2), CapExceeded);
  CHECK_THROWS_AS(dual_norm_bruteforce(RealVector(13, 1.0), WeightVector::ones(13), 2), CapExceeded);
}

TEST_CASE("constant-weight candidates contain the cube corners and signed basis vectors") {
  for (std::size_t n = 3; n <= 5; ++n)
    for (std::size_t k = 2; k < n; ++k) {
      const auto set = extreme_point_candidates(WeightVector::ones(n), k);
      std::vector<RealVector> targets;
      for (unsigned s = 0; s < (1u << n); ++s) {
        RealVector v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = ((s >> i) & 1u ? -1.0 : 1.0) / static_cast<double>(k);
        targets.push_back(v);
      }
      for (std::size_t i = 0; i < n; ++i)
        for (double sg : {1.0, -1.0}) {
          RealVector v(n, 0.0);
          v[i] = sg;
          targets.push_back(v);
        }
      for (const auto& v : targets) {
        CHECK(std::fabs(k_norm(v, k) - 1.0) <= 1e-12);
        const bool found = std::any_of(set.points.begin(), set.points.end(),
                                       [&](const RealVector& p) { return oracle::max_abs_diff(p, v) <= 1e-15; });
        CHECK(found);
        // Exposed: the functional <v, .> strictly separates v from every other target.
        double self = 0;
        for (double a : v) self += a * a;
        for (const auto& u : targets) {
          if (oracle::max_abs_diff(u, v) == 0.0) continue;
          double ip = 0;
          for (std::size_t i = 0; i < n; ++i) ip += u[i] * v[i];
          CHECK(ip < self - 1e-12);
        }
      }
    }
}

TEST_CASE("bidual recovers the norm on a grid") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 12; ++t) {
    const std::size_t n = 2 + t % 3;
    RealVector wv(n);
    for (std::size_t i = 0; i < n; ++i) wv[i] = 1.0 - 0.2 * static_cast<double>(i);  // grid-aligned weights
    const WeightVector w(wv);
    const std::size_t k = 1 + t % n;
    const auto x = oracle::random_vec(rng, n);
    double best = 0;
    const int steps = 10;
    std::vector<int> idx(n, -steps);
    while (true) {
      RealVector y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = idx[i] / static_cast<double>(steps);
      const double d = dual_weighted_k_norm(y, w, k);
      if (d > 0) {
        double ip = 0;
        for (std::size_t i = 0; i < n; ++i) ip += x[i] * y[i];
        best = std::max(best, ip / d);
      }
      std::size_t i = 0;
      while (i < n && ++idx[i] > steps) idx[i++] = -steps;
      if (i == n) break;
    }
    const double norm = weighted_k_norm(x, w, k);
    CHECK(best <= norm * (1 + 1e-12));
    CHECK(best >= 0.98 * norm);
  }
}

TEST_CASE("Ky Fan dominance") {
  std::vector<SymmetricNorm> norms;
  for (double p : {1.0, 1.5, 2.0, 3.0}) norms.push_back(make_lp_norm(Exponent(p)));
  norms.push_back(make_lp_norm(Exponent::infinity()));
  for (std::size_t k = 1; k <= 3; ++k) norms.push_back(make_k_norm(k));
  norms.push_back(make_weighted_k_norm(WeightVector({3, 2, 0.5}), 2));

  const RealVector a{0.3, -0.7, 0.1};
  const auto same = ky_fan_dominates(a, a, norms);
  CHECK(same.dominated);
  CHECK(same.consistent);
  CHECK(same.norm_x == same.norm_y);

  CHECK_FALSE(ky_fan_dominates(RealVector{1, 1, 1}, RealVector{2, 0, 0}, norms).dominated);

  // x = c * (doubly stochastic mix of signed permutations of y), so |x| is weakly majorized by |y|.
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 500; ++t) {
    const auto y = oracle::random_vec(rng, 3);
    RealVector x(3, 0.0);
    std::array<std::size_t, 3> perm{0, 1, 2};
    double total = 0;
    for (int m = 0; m < 3; ++m) {
      std::shuffle(perm.begin(), perm.end(), rng);
      const double lam = u(rng);
      total += lam;
      for (std::size_t i = 0; i < 3; ++i) x[i] += lam * (u(rng) < 0.5 ? -1 : 1) * std::fabs(y[perm[i]]);
    }
    const double c = u(rng) / total;
    for (double& v : x) v *= c;
    const auto r = ky_fan_dominates(y, x, norms);
    CHECK(r.dominated);
    CHECK(r.consistent);
    for (std::size_t i = 0; i < 5; ++i) {
      const double px = i < 4 ? std::initializer_list<double>{1.0, 1.5, 2.0, 3.0}.begin()[i] : 0.0;
      CHECK(oracle::lp(x, oracle::uniform_weights(3), px) <= oracle::lp(y, oracle::uniform_weights(3), px) + 1e-12);
    }
  }
}

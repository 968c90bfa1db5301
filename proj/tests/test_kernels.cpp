#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "leibniz/core.hpp"
#include "leibniz/kernels.hpp"
#include "oracles.hpp"

using namespace leibniz;

namespace {

double rel_close(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b)); }

void check_table(const kernels::KernelTable& t) {
  std::mt19937_64 rng(11);
  // Lengths around every vector-width boundary, including empty.
  for (std::size_t n = 0; n <= 37; ++n) {
    const auto a = oracle::random_vec(rng, n, -3, 3);
    const auto b = oracle::random_vec(rng, n, -3, 3);
    const auto w = oracle::random_vec(rng, n, 0, 1);
    const double shift = 0.25;
    double dot = 0, wabs = 0, wsq = 0, mx = 0;
    for (std::size_t i = 0; i < n; ++i) {
      dot += a[i] * b[i];
      wabs += w[i] * std::fabs(a[i] - shift);
      wsq += w[i] * (a[i] - shift) * (a[i] - shift);
      mx = std::max(mx, std::fabs(a[i] - shift));
    }
    CHECK(rel_close(t.dot(a.data(), b.data(), n), dot));
    CHECK(rel_close(t.weighted_abs_sum(w.data(), a.data(), shift, n), wabs));
    CHECK(rel_close(t.weighted_sq_sum(w.data(), a.data(), shift, n), wsq));
    CHECK(t.max_abs(a.data(), shift, n) == mx);

    const auto m = oracle::random_vec(rng, n * n, -1, 1);
    std::vector<double> y(n, 0.0);
    t.matvec(m.data(), a.data(), y.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0;
      for (std::size_t j = 0; j < n; ++j) s += m[i * n + j] * a[j];
      CHECK(rel_close(y[i], s));
    }
  }
}

}  // namespace

TEST_CASE("scalar kernels agree with naive loops") { check_table(kernels::scalar_table()); }

TEST_CASE("vector kernels agree with naive loops when the CPU has them") {
  const auto* t = kernels::avx2_table();
  if (!t) {
    MESSAGE("AVX2/FMA not available; vector path skipped");
    return;
  }
  check_table(*t);
}

TEST_CASE("scalar and vector variants agree to rounding on large inputs") {
  const auto* v = kernels::avx2_table();
  if (!v) return;
  const auto& s = kernels::scalar_table();
  std::mt19937_64 rng(5);
  for (std::size_t n : {1u, 3u, 4u, 5u, 8u, 63u, 1000u}) {
    const auto a = oracle::random_vec(rng, n, -1, 1);
    const auto b = oracle::random_vec(rng, n, -1, 1);
    const auto w = oracle::random_vec(rng, n, 0, 1);
    CHECK(std::fabs(s.dot(a.data(), b.data(), n) - v->dot(a.data(), b.data(), n)) <= 1e-12 * n);
    CHECK(std::fabs(s.weighted_sq_sum(w.data(), a.data(), -0.1, n) - v->weighted_sq_sum(w.data(), a.data(), -0.1, n)) <=
          1e-12 * n);
    CHECK(s.max_abs(a.data(), 0.3, n) == v->max_abs(a.data(), 0.3, n));
  }
}

TEST_CASE("span wrappers reject mismatched lengths") {
  const std::vector<double> a{1, 2}, b{1, 2, 3};
  CHECK_THROWS_AS(kernels::dot(a, b), std::invalid_argument);
  std::vector<double> y(2);
  CHECK_THROWS_AS(kernels::matvec(b, a, y), std::invalid_argument);
}

TEST_CASE("active table is one of the known variants") {
  const std::string name = kernels::active().name;
  CHECK((name == "scalar" || name == "avx2"));
}

#pragma once

// Ky Fan k-norms, weighted k-norms and their duals.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "leibniz/core.hpp"

namespace leibniz {

// Any norm on R^n invariant under permutations and sign flips.
using SymmetricNorm = std::function<double(std::span<const double>)>;

// w_1 >= w_2 >= ... >= w_n > 0.
class WeightVector {
 public:
  explicit WeightVector(RealVector w);
  static WeightVector ones(std::size_t n) { return WeightVector(RealVector(n, 1.0)); }

  std::size_t size() const { return w_.size(); }
  std::span<const double> values() const { return w_; }
  double operator[](std::size_t i) const { return w_[i]; }
  // w_1 + ... + w_j (j = 0 gives 0).
  double prefix_sum(std::size_t j) const;

 private:
  RealVector w_;
};

inline constexpr std::size_t kExtremePointCap = 12;

struct ExtremePointSet {
  std::vector<RealVector> points;
  std::size_t k = 0;
  WeightVector w;
};

// Sum of the k largest |x_i|.
double k_norm(std::span<const double> x, std::size_t k);

// sum_{i<=k} w_i |x|_i (down).
double weighted_k_norm(std::span<const double> x, const WeightVector& w, std::size_t k);

// Closed form:
//   max{ ||x||_(1)/w_1, ..., ||x||_(k-1)/(w_1+..+w_{k-1}), ||x||_(n)/(w_1+..+w_k) }.
// O(n log n).
double dual_weighted_k_norm(std::span<const double> x, const WeightVector& w, std::size_t k);

// Candidate extreme points of the unit ball of weighted_k_norm: sign patterns
// on supports S with |S| in {1..k-1} or |S| = n, scaled by
// 1 / (w_1 + ... + w_min(k,|S|)). Distinct supports give distinct points, so
// the list has no duplicates. n <= kExtremePointCap.
ExtremePointSet extreme_point_candidates(const WeightVector& w, std::size_t k);

// Calls visit(point) for every candidate without materializing the set.
void for_each_extreme_candidate(const WeightVector& w, std::size_t k,
                                const std::function<void(std::span<const double>)>& visit);

// max <x, y> over the candidate set; the oracle for dual_weighted_k_norm.
double dual_norm_bruteforce(std::span<const double> x, const WeightVector& w, std::size_t k);

struct KyFanCheck {
  bool dominated = false;   // |x| weakly majorized by |y|
  bool consistent = true;   // dominated => every supplied norm has ||x|| <= ||y|| + tol
  std::vector<double> norm_x;
  std::vector<double> norm_y;
};

KyFanCheck ky_fan_dominates(std::span<const double> y, std::span<const double> x,
                            std::span<const SymmetricNorm> norms, double tol = kDefaultInequalityTol);

// Evaluator factories for norm families used by the property suites.
SymmetricNorm make_lp_norm(Exponent p);
SymmetricNorm make_k_norm(std::size_t k);
SymmetricNorm make_weighted_k_norm(WeightVector w, std::size_t k);

}  // namespace leibniz

#include "leibniz/knorms.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <string>

#include "leibniz/kernels.hpp"

namespace leibniz {
namespace {

void require_rank(std::size_t k, std::size_t n) {
  if (k < 1 || k > n)
    throw InvalidArgument("rank k=" + std::to_string(k) + " out of range 1.." + std::to_string(n));
}

RealVector abs_down(std::span<const double> x) { return downward_rearrange(abs_values(x)); }

}  // namespace

WeightVector::WeightVector(RealVector w) : w_(std::move(w)) {
  if (w_.empty()) throw InvalidArgument("weight vector must be non-empty");
  require_finite(w_, "weight vector");
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (!(w_[i] > 0.0)) throw InvalidArgument("weights must be positive");
    if (i > 0 && w_[i] > w_[i - 1]) throw InvalidArgument("weights must be non-increasing");
  }
}

double WeightVector::prefix_sum(std::size_t j) const {
  double s = 0.0;
  for (std::size_t i = 0; i < j && i < w_.size(); ++i) s += w_[i];
  return s;
}

double k_norm(std::span<const double> x, std::size_t k) {
  require_rank(k, x.size());
  const RealVector a = abs_down(x);
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += a[i];
  return s;
}

double weighted_k_norm(std::span<const double> x, const WeightVector& w, std::size_t k) {
  require_same_size(x.size(), w.size(), "weighted_k_norm");
  require_rank(k, x.size());
  const RealVector a = abs_down(x);
  return kernels::dot(std::span<const double>(a).first(k), w.values().first(k));
}

double dual_weighted_k_norm(std::span<const double> x, const WeightVector& w, std::size_t k) {
  require_same_size(x.size(), w.size(), "dual_weighted_k_norm");
  require_rank(k, x.size());
  const RealVector a = abs_down(x);
  double best = 0.0;
  double partial = 0.0;
  double wsum = 0.0;
  for (std::size_t j = 1; j < k; ++j) {
    partial += a[j - 1];
    wsum += w[j - 1];
    best = std::max(best, partial / wsum);
  }
  double total = 0.0;
  for (double v : a) total += v;
  return std::max(best, total / w.prefix_sum(k));
}

void for_each_extreme_candidate(const WeightVector& w, std::size_t k,
                                const std::function<void(std::span<const double>)>& visit) {
  const std::size_t n = w.size();
  require_rank(k, n);
  if (n > kExtremePointCap)
    throw CapExceeded("extreme point enumeration capped at n=" + std::to_string(kExtremePointCap));
  RealVector point(n, 0.0);
  const std::uint32_t full = (1u << n) - 1u;
  for (std::uint32_t support = 1; support <= full; ++support) {
    const auto size = static_cast<std::size_t>(std::popcount(support));
    if (!(size < k || size == n)) continue;
    const double scale = 1.0 / w.prefix_sum(std::min(k, size));
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (support & (1u << i)) idx.push_back(i);
    for (std::uint32_t signs = 0; signs < (1u << size); ++signs) {
      std::fill(point.begin(), point.end(), 0.0);
      for (std::size_t t = 0; t < size; ++t) point[idx[t]] = (signs & (1u << t)) ? -scale : scale;
      visit(point);
    }
  }
}

ExtremePointSet extreme_point_candidates(const WeightVector& w, std::size_t k) {
  ExtremePointSet set{{}, k, w};
  for_each_extreme_candidate(w, k, [&](std::span<const double> p) {
    set.points.emplace_back(p.begin(), p.end());
  });
  return set;
}

double dual_norm_bruteforce(std::span<const double> x, const WeightVector& w, std::size_t k) {
  require_same_size(x.size(), w.size(), "dual_norm_bruteforce");
  double best = 0.0;
  for_each_extreme_candidate(w, k, [&](std::span<const double> p) {
    best = std::max(best, kernels::scalar_table().dot(x.data(), p.data(), x.size()));
  });
  return best;
}

KyFanCheck ky_fan_dominates(std::span<const double> y, std::span<const double> x,
                            std::span<const SymmetricNorm> norms, double tol) {
  require_same_size(y.size(), x.size(), "ky_fan_dominates");
  KyFanCheck out;
  out.dominated = weak_majorizes(abs_values(y), abs_values(x), tol);
  for (const auto& norm : norms) {
    out.norm_x.push_back(norm(x));
    out.norm_y.push_back(norm(y));
    if (out.dominated && out.norm_x.back() > out.norm_y.back() + tol) out.consistent = false;
  }
  return out;
}

SymmetricNorm make_lp_norm(Exponent p) {
  return [p](std::span<const double> x) { return counting_lp_norm(x, p); };
}

SymmetricNorm make_k_norm(std::size_t k) {
  return [k](std::span<const double> x) { return k_norm(x, k); };
}

SymmetricNorm make_weighted_k_norm(WeightVector w, std::size_t k) {
  return [w = std::move(w), k](std::span<const double> x) { return weighted_k_norm(x, w, k); };
}

}  // namespace leibniz

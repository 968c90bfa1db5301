#include "leibniz/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "leibniz/kernels.hpp"

namespace leibniz {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DimensionMismatch(os.str());
  }
}

void require_finite(std::span<const double> x, const char* what) {
  for (double v : x)
    if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + ": non-finite entry");
}

Exponent::Exponent(double value) : value_(value) {
  if (std::isinf(value) && value > 0) {
    infinite_ = true;
    return;
  }
  if (!(value >= 1.0)) throw InvalidArgument("exponent must lie in [1, inf]");
}

Exponent Exponent::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf" || text == "∞") return infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("cannot parse exponent '" + text + "'");
  }
  if (used != text.size()) throw InvalidArgument("cannot parse exponent '" + text + "'");
  return Exponent(v);
}

std::string Exponent::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

HolderTriple HolderTriple::make(Exponent r, Exponent p, Exponent q) {
  if (std::fabs(r.reciprocal() - p.reciprocal() - q.reciprocal()) > 1e-12)
    throw InvalidArgument("Hoelder triple requires 1/r = 1/p + 1/q");
  return HolderTriple{r, p, q};
}

HolderTriple HolderTriple::from_rp(Exponent r, Exponent p) {
  if (p < r) throw InvalidArgument("Hoelder triple requires p >= r");
  const double inv_q = r.reciprocal() - p.reciprocal();
  const Exponent q = inv_q <= 0.0 ? Exponent::infinity() : Exponent(std::max(1.0, 1.0 / inv_q));
  return HolderTriple{r, p, q};
}

ProbVector::ProbVector(RealVector weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidArgument("probability vector must have n >= 1");
  double s = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || !(w > 0.0))
      throw InvalidArgument("probability weights must be strictly positive");
    s += w;
  }
  if (std::fabs(s - 1.0) > kSumTolerance) throw InvalidArgument("probability weights must sum to 1");
}

ProbVector ProbVector::uniform(std::size_t n) {
  if (n == 0) throw InvalidArgument("probability vector must have n >= 1");
  return ProbVector(RealVector(n, 1.0 / static_cast<double>(n)));
}

double expectation(std::span<const double> x, const ProbVector& mu) {
  require_same_size(x.size(), mu.size(), "expectation");
  return kernels::dot(mu.weights(), x);
}

RealVector center(std::span<const double> x, const ProbVector& mu) {
  const double m = expectation(x, mu);
  RealVector out(x.begin(), x.end());
  for (double& v : out) v -= m;
  return out;
}

namespace {

double shifted_lp_norm(std::span<const double> x, std::span<const double> w, double shift, Exponent p) {
  if (p.is_infinite()) return kernels::max_abs(x, shift);
  const double pv = p.value();
  if (pv == 1.0) return kernels::weighted_abs_sum(w, x, shift);
  if (pv == 2.0) return std::sqrt(kernels::weighted_sq_sum(w, x, shift));
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(std::fabs(x[i] - shift), pv);
  return std::pow(s, 1.0 / pv);
}

}  // namespace

double lp_norm(std::span<const double> x, const ProbVector& mu, Exponent p) {
  require_same_size(x.size(), mu.size(), "lp_norm");
  return shifted_lp_norm(x, mu.weights(), 0.0, p);
}

double centered_lp_norm(std::span<const double> x, const ProbVector& mu, Exponent p) {
  return shifted_lp_norm(x, mu.weights(), expectation(x, mu), p);
}

double variance(std::span<const double> x, const ProbVector& mu) {
  return kernels::weighted_sq_sum(mu.weights(), x, expectation(x, mu));
}

double counting_lp_norm(std::span<const double> x, Exponent p) {
  const RealVector ones(x.size(), 1.0);
  return shifted_lp_norm(x, ones, 0.0, p);
}

RealVector downward_rearrange(std::span<const double> x) {
  RealVector out(x.begin(), x.end());
  std::stable_sort(out.begin(), out.end(), [](double a, double b) { return a > b; });
  return out;
}

RealVector abs_values(std::span<const double> x) {
  RealVector out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return std::fabs(v); });
  return out;
}

bool weak_majorizes(std::span<const double> y, std::span<const double> x, double tol) {
  require_same_size(y.size(), x.size(), "weak_majorizes");
  const RealVector xs = downward_rearrange(x);
  const RealVector ys = downward_rearrange(y);
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    if (sx > sy + tol) return false;
  }
  return true;
}

}  // namespace leibniz

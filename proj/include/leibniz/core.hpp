#pragma once

// Finite probability measures, weighted L^p norms, centering, rearrangement
// and weak majorization.

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace leibniz {

using RealVector = std::vector<double>;

inline constexpr double kDefaultInequalityTol = 1e-9;
inline constexpr double kDefaultIdentityTol = 1e-10;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Out-of-range ranks, invalid exponents, broken type invariants.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inputs the math is not defined on (coincident nodes, non-invertible f).
class DegenerateInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Enumeration / replication size limits.
class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

void require_same_size(std::size_t a, std::size_t b, const char* what);
void require_finite(std::span<const double> x, const char* what);

// An exponent in [1, inf]; infinity is a distinguished state, not a big float.
class Exponent {
 public:
  Exponent() = default;
  explicit Exponent(double value);

  static Exponent infinity() {
    Exponent e;
    e.infinite_ = true;
    e.value_ = std::numeric_limits<double>::infinity();
    return e;
  }
  // Accepts "inf", "infinity", "∞" or a decimal number.
  static Exponent parse(const std::string& text);

  bool is_infinite() const { return infinite_; }
  double value() const { return value_; }
  // 1/p with 1/inf = 0.
  double reciprocal() const { return infinite_ ? 0.0 : 1.0 / value_; }
  std::string to_string() const;

  friend bool operator==(const Exponent& a, const Exponent& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend bool operator<(const Exponent& a, const Exponent& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const Exponent& a, const Exponent& b) { return !(b < a); }

 private:
  double value_ = 1.0;
  bool infinite_ = false;
};

// Exponents with 1/r = 1/p + 1/q.
struct HolderTriple {
  Exponent r;
  Exponent p;
  Exponent q;

  static HolderTriple make(Exponent r, Exponent p, Exponent q);
  // Completes q from r <= p.
  static HolderTriple from_rp(Exponent r, Exponent p);
};

// Strictly positive weights summing to one.
class ProbVector {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit ProbVector(RealVector weights);
  static ProbVector uniform(std::size_t n);

  std::size_t size() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }

 private:
  RealVector weights_;
};

double expectation(std::span<const double> x, const ProbVector& mu);
RealVector center(std::span<const double> x, const ProbVector& mu);

double lp_norm(std::span<const double> x, const ProbVector& mu, Exponent p);
// ||x - E_mu x||_{p}, without materializing the centered vector.
double centered_lp_norm(std::span<const double> x, const ProbVector& mu, Exponent p);
double variance(std::span<const double> x, const ProbVector& mu);

// Unweighted l_p norm on R^n (counting measure): a symmetric norm.
double counting_lp_norm(std::span<const double> x, Exponent p);

// Stable, non-increasing.
RealVector downward_rearrange(std::span<const double> x);
RealVector abs_values(std::span<const double> x);

// x weakly majorized by y: partial sums of x sorted down never exceed
// those of y (plus tol).
bool weak_majorizes(std::span<const double> y, std::span<const double> x, double tol = 0.0);

}  // namespace leibniz

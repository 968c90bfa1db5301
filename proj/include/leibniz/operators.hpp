#pragma once

// Matrix constructions: the centered-product matrix Theta_x and its deflation,
// divided-difference matrices Theta[x; phi], Laplacians with the conditional
// norm bound, and the discrete derivation on the uniform n-point space.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "leibniz/core.hpp"
#include "leibniz/knorms.hpp"
#include "leibniz/report.hpp"

namespace leibniz {

// Dense row-major n x n.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
  SquareMatrix(std::size_t n, std::vector<double> row_major);

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::span<const double> data() const { return a_; }

  RealVector apply(std::span<const double> x) const;
  double max_abs_row_sum() const;
  double max_abs_col_sum() const;
  double max_abs_entry() const;
  double max_off_diagonal() const;  // max_{i != j} a_ij; 0 when n == 1
  bool is_symmetric(double tol) const;
  // Largest |row sum| and |column sum|.
  double max_abs_line_sum() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

// Off-diagonal (x_i + x_j) / (2n), diagonal chosen for zero row sums.
struct ThetaMatrix {
  SquareMatrix entries;
  RealVector source;
};

ThetaMatrix theta_matrix(std::span<const double> x);

// Theta_x - n^{-1} 1 x^T.
SquareMatrix deflated_theta(std::span<const double> x);

// Continuous piecewise-linear phi: slope slopes[0] left of breakpoints[0],
// slopes[i] on [breakpoints[i-1], breakpoints[i]], slopes.back() on the right;
// phi(breakpoints[0]) = anchor. With no breakpoints phi(t) = anchor + slope*t.
class PiecewiseLinearFn {
 public:
  PiecewiseLinearFn(RealVector breakpoints, RealVector slopes, double anchor);

  static PiecewiseLinearFn identity() { return PiecewiseLinearFn({}, {1.0}, 0.0); }
  static PiecewiseLinearFn constant(double c) { return PiecewiseLinearFn({}, {0.0}, c); }

  double operator()(double t) const;
  RealVector apply(std::span<const double> x) const;

  double lipschitz() const;
  bool is_increasing() const;
  bool is_decreasing() const;
  bool is_monotone() const { return is_increasing() || is_decreasing(); }
  PiecewiseLinearFn negated() const;

  const RealVector& breakpoints() const { return breakpoints_; }
  const RealVector& slopes() const { return slopes_; }
  double anchor() const { return anchor_; }

 private:
  RealVector breakpoints_;
  RealVector slopes_;
  double anchor_;
  RealVector knot_values_;
};

// Symmetric, zero line sums, non-negative off-diagonal, -L positive semidefinite.
class LaplacianMatrix {
 public:
  static constexpr double kLineSumTol = 1e-12;
  static constexpr double kPsdTol = 1e-9;

  // Throws InvalidArgument naming the first violated invariant. The line-sum
  // tolerance is relative to the largest entry (absolute below 1).
  static LaplacianMatrix make(SquareMatrix m);
  static std::optional<LaplacianMatrix> try_make(SquareMatrix m);

  const SquareMatrix& matrix() const { return m_; }
  std::size_t size() const { return m_.size(); }

 private:
  explicit LaplacianMatrix(SquareMatrix m) : m_(std::move(m)) {}
  SquareMatrix m_;
};

// Smallest eigenvalue of a symmetric matrix (Eigen self-adjoint solver).
double smallest_eigenvalue(const SquareMatrix& m);
// All principal minors >= -tol; an independent PSD certificate for n <= 3.
bool principal_minors_nonnegative(const SquareMatrix& m, double tol);

// Off-diagonal (phi(x_i) - phi(x_j)) / (x_i - x_j). Throws DegenerateInput
// when two nodes are closer than 1e-9 * (1 + max|x_i|).
SquareMatrix divided_difference_matrix(std::span<const double> x, std::span<const double> phi_values);
SquareMatrix divided_difference_matrix(std::span<const double> x, const PiecewiseLinearFn& phi);

// Theta[x; phi] for increasing phi, Theta[x; -phi] for decreasing phi.
LaplacianMatrix monotone_laplacian(std::span<const double> x, const PiecewiseLinearFn& phi);

// -(1/n) Theta[x;phi] (x - mean x) against phi(x) - mean phi(x).
VerificationReport lemma4_identity_check(std::span<const double> x, const PiecewiseLinearFn& phi,
                                         double tol = kDefaultIdentityTol);

// ||L x|| <= n max_{i!=j} L_ij ||x|| for sum(x) = 0.
VerificationReport laplacian_theorem2_bound(const LaplacianMatrix& lap, std::span<const double> x,
                                            const SymmetricNorm& norm, double tol = kDefaultInequalityTol);

// (max column abs sum, max row abs sum) of L - x_inf 1^T with
// x_inf(i) = max_{j != i} L_ij.
std::pair<double, double> lhat_row_col_bounds(const LaplacianMatrix& lap);

// Discrete derivation (df)_ij = (f_i - f_j)/sqrt(2) from l2(lambda) to
// l2(lambda x lambda), lambda uniform. Matrix is n^2 x n, row index i*n + j.
class Derivation {
 public:
  explicit Derivation(std::size_t n);

  std::size_t size() const { return n_; }
  RealVector apply(std::span<const double> f) const;
  // Adjoint with respect to the weighted inner products.
  RealVector adjoint(std::span<const double> a) const;
  // (f a)_ij = f_i a_ij and (a g)_ij = a_ij g_j.
  RealVector left_action(std::span<const double> f, std::span<const double> a) const;
  RealVector right_action(std::span<const double> a, std::span<const double> g) const;

 private:
  std::size_t n_;
  std::vector<double> d_;  // n^2 x n row-major
};

// -L = d*d, d*(f dg) = -Theta_f g, d*((df) g) = -Theta_g f,
// d*(f dg) = -1/2 (L(fg) - g Lf + f Lg), with L = n^{-1} 1 1^T - I.
VerificationReport derivation_checks(std::span<const double> f, std::span<const double> g,
                                     double tol = kDefaultIdentityTol);

}  // namespace leibniz

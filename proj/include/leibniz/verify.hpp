#pragma once

// One checker per inequality or identity. Each returns a VerificationReport
// carrying the full instance so a failure can be replayed from its JSON.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "leibniz/core.hpp"
#include "leibniz/operators.hpp"
#include "leibniz/report.hpp"

namespace leibniz {

inline constexpr std::uint64_t kReplicationCap = 100000;

// Rational weights r_i / m with r_i >= 1 and sum r_i = m <= kReplicationCap.
class RationalProbVector {
 public:
  explicit RationalProbVector(std::vector<std::uint64_t> numerators);

  std::size_t size() const { return r_.size(); }
  std::uint64_t denominator() const { return m_; }
  const std::vector<std::uint64_t>& numerators() const { return r_; }
  ProbVector to_prob_vector() const;

 private:
  std::vector<std::uint64_t> r_;
  std::uint64_t m_ = 0;
};

// fg - E(fg) = -Theta_f (g - Eg) - Theta_g (f - Ef) = -Theta_f g - Theta_g f,
// uniform measure.
VerificationReport check_decomposition(std::span<const double> f, std::span<const double> g,
                                       double tol = kDefaultIdentityTol);

// ||Theta_x (y - Ey)||_r <= ||x||_p ||y - Ey||_q on the uniform measure.
VerificationReport check_holder_theta(std::span<const double> x, std::span<const double> y,
                                      const HolderTriple& triple, double tol = kDefaultInequalityTol);

// |(Theta_x - n^{-1} 1 x^T) y| weakly majorized by |x|(down) * |y|(down).
// lhs/rhs hold the largest partial-sum excess and 0.
VerificationReport check_lemma3(std::span<const double> x, std::span<const double> y,
                                double tol = kDefaultIdentityTol);

// ||fg - E(fg)||_r <= ||f||_{p1} ||g - Eg||_{q1} + ||g||_{p2} ||f - Ef||_{q2}.
VerificationReport check_leibniz(const ProbVector& mu, std::span<const double> f, std::span<const double> g,
                                 const HolderTriple& t1, const HolderTriple& t2,
                                 double tol = kDefaultInequalityTol);

// ||phi(f) - E phi(f)||_p <= Lip(phi) ||f - Ef||_p. Monotonicity is recorded,
// not required.
VerificationReport check_chain_rule(const ProbVector& mu, std::span<const double> f, const PiecewiseLinearFn& phi,
                                    Exponent p, double tol = kDefaultInequalityTol);

// Same inequality for a phi known only through its values on f and a
// Lipschitz constant.
VerificationReport check_chain_rule_values(const ProbVector& mu, std::span<const double> f,
                                           std::span<const double> phi_values, double lipschitz, Exponent p,
                                           double tol = kDefaultInequalityTol);

// L(1/f) <= ||1/f||_inf^2 L(f) with L(f) = ||f - Ef||_p. Needs |f_i| >= 1e-6.
VerificationReport check_strong_leibniz(const ProbVector& mu, std::span<const double> f, Exponent p,
                                        double tol = kDefaultInequalityTol);

// Var(phi(f)) <= Lip(phi)^2 Var(f).
VerificationReport check_markov_variance(const ProbVector& mu, std::span<const double> f,
                                         const PiecewiseLinearFn& phi, double tol = kDefaultInequalityTol);

// ||f^2 - E f^2||_p <= 2 ||f||_inf ||f - Ef||_p.
VerificationReport check_square_bound(const ProbVector& mu, std::span<const double> f, Exponent p,
                                      double tol = kDefaultInequalityTol);

// Repeats x_i r_i times.
RealVector replicate(std::span<const double> x, const RationalProbVector& mu);

// Nearest rational measure with denominator <= max_denominator. Exact
// representations are found first; otherwise largest-remainder rounding at
// m = max_denominator with every r_i >= 1 and |mu_i - r_i/m| <= 1/m.
RationalProbVector rationalize(const ProbVector& mu, std::uint64_t max_denominator);

nlohmann::json exponent_json(Exponent p);
Exponent exponent_from_json(const nlohmann::json& j);
nlohmann::json triple_json(const HolderTriple& t);
HolderTriple triple_from_json(const nlohmann::json& j);
nlohmann::json phi_to_json(const PiecewiseLinearFn& phi);
PiecewiseLinearFn phi_from_json(const nlohmann::json& j);

}  // namespace leibniz

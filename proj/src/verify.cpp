#include "leibniz/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "leibniz/kernels.hpp"

namespace leibniz {
namespace {

RealVector vec(std::span<const double> x) { return RealVector(x.begin(), x.end()); }

nlohmann::json mu_json(const ProbVector& mu) { return vec(mu.weights()); }

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

RealVector product(std::span<const double> a, std::span<const double> b) {
  RealVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

}  // namespace

RationalProbVector::RationalProbVector(std::vector<std::uint64_t> numerators) : r_(std::move(numerators)) {
  if (r_.empty()) throw InvalidArgument("rational measure must have n >= 1");
  for (auto r : r_) {
    if (r == 0) throw InvalidArgument("rational measure numerators must be positive");
    m_ += r;
    if (m_ > kReplicationCap) throw CapExceeded("rational measure denominator exceeds replication cap");
  }
}

ProbVector RationalProbVector::to_prob_vector() const {
  RealVector w(r_.size());
  for (std::size_t i = 0; i < r_.size(); ++i) w[i] = static_cast<double>(r_[i]) / static_cast<double>(m_);
  return ProbVector(std::move(w));
}

VerificationReport check_decomposition(std::span<const double> f, std::span<const double> g, double tol) {
  require_same_size(f.size(), g.size(), "check_decomposition");
  const ProbVector uniform = ProbVector::uniform(f.size());
  const RealVector lhs = center(product(f, g), uniform);

  const ThetaMatrix tf = theta_matrix(f);
  const ThetaMatrix tg = theta_matrix(g);
  const RealVector a = tf.entries.apply(center(g, uniform));
  const RealVector b = tg.entries.apply(center(f, uniform));
  const RealVector c = tf.entries.apply(g);
  const RealVector d = tg.entries.apply(f);
  RealVector centered_form(f.size()), plain_form(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    centered_form[i] = -a[i] - b[i];
    plain_form[i] = -c[i] - d[i];
  }
  const double dev = std::max(max_abs_diff(lhs, centered_form), max_abs_diff(lhs, plain_form));
  return make_report("decomposition", dev, 0.0, tol, {{"f", vec(f)}, {"g", vec(g)}});
}

VerificationReport check_holder_theta(std::span<const double> x, std::span<const double> y,
                                      const HolderTriple& triple, double tol) {
  require_same_size(x.size(), y.size(), "check_holder_theta");
  const HolderTriple t = HolderTriple::make(triple.r, triple.p, triple.q);
  const ProbVector uniform = ProbVector::uniform(x.size());
  const RealVector yc = center(y, uniform);
  const RealVector lhs_vec = theta_matrix(x).entries.apply(yc);
  const double lhs = lp_norm(lhs_vec, uniform, t.r);
  const double rhs = lp_norm(x, uniform, t.p) * lp_norm(yc, uniform, t.q);
  return make_report("holder_theta", lhs, rhs, tol, {{"x", vec(x)}, {"y", vec(y)}, {"exponents", triple_json(t)}});
}

VerificationReport check_lemma3(std::span<const double> x, std::span<const double> y, double tol) {
  require_same_size(x.size(), y.size(), "check_lemma3");
  const RealVector lhs_vec = downward_rearrange(abs_values(deflated_theta(x).apply(y)));
  const RealVector xs = downward_rearrange(abs_values(x));
  const RealVector ys = downward_rearrange(abs_values(y));
  double sl = 0.0, sr = 0.0;
  double excess = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sl += lhs_vec[k];
    sr += xs[k] * ys[k];
    excess = std::max(excess, sl - sr);
  }
  VerificationReport r = make_report("lemma3_majorization", excess, 0.0, tol, {{"x", vec(x)}, {"y", vec(y)}});
  // Cross-check against the partial-sum routine used everywhere else.
  r.details["weak_majorizes"] = weak_majorizes(product(xs, ys), lhs_vec, tol);
  return r;
}

VerificationReport check_leibniz(const ProbVector& mu, std::span<const double> f, std::span<const double> g,
                                 const HolderTriple& t1, const HolderTriple& t2, double tol) {
  require_same_size(f.size(), mu.size(), "check_leibniz");
  require_same_size(g.size(), mu.size(), "check_leibniz");
  if (!(t1.r == t2.r)) throw InvalidArgument("check_leibniz: both triples must share r");
  const HolderTriple a = HolderTriple::make(t1.r, t1.p, t1.q);
  const HolderTriple b = HolderTriple::make(t2.r, t2.p, t2.q);
  const double lhs = centered_lp_norm(product(f, g), mu, a.r);
  const double term1 = lp_norm(f, mu, a.p) * centered_lp_norm(g, mu, a.q);
  const double term2 = lp_norm(g, mu, b.p) * centered_lp_norm(f, mu, b.q);
  VerificationReport r = make_report(
      "leibniz", lhs, term1 + term2, tol,
      {{"mu", mu_json(mu)}, {"f", vec(f)}, {"g", vec(g)}, {"exponents", {{"t1", triple_json(a)}, {"t2", triple_json(b)}}}});
  r.details["rhs_term1"] = term1;
  r.details["rhs_term2"] = term2;
  return r;
}

VerificationReport check_chain_rule_values(const ProbVector& mu, std::span<const double> f,
                                           std::span<const double> phi_values, double lipschitz, Exponent p,
                                           double tol) {
  require_same_size(f.size(), mu.size(), "check_chain_rule");
  require_same_size(phi_values.size(), mu.size(), "check_chain_rule");
  const double lhs = centered_lp_norm(phi_values, mu, p);
  const double spread = centered_lp_norm(f, mu, p);
  VerificationReport r = make_report("chain_rule", lhs, lipschitz * spread, tol,
                                     {{"mu", mu_json(mu)},
                                      {"f", vec(f)},
                                      {"phi_values", vec(phi_values)},
                                      {"lipschitz", lipschitz},
                                      {"exponents", {{"p", exponent_json(p)}}}});
  r.details["f_spread"] = spread;
  return r;
}

VerificationReport check_chain_rule(const ProbVector& mu, std::span<const double> f, const PiecewiseLinearFn& phi,
                                    Exponent p, double tol) {
  const RealVector values = phi.apply(f);
  VerificationReport r = check_chain_rule_values(mu, f, values, phi.lipschitz(), p, tol);
  r.instance.erase("phi_values");
  r.instance["phi"] = phi_to_json(phi);
  r.details["monotone"] = phi.is_monotone();
  return r;
}

VerificationReport check_strong_leibniz(const ProbVector& mu, std::span<const double> f, Exponent p, double tol) {
  require_same_size(f.size(), mu.size(), "check_strong_leibniz");
  RealVector inv(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::fabs(f[i]) < 1e-6) throw DegenerateInput("check_strong_leibniz: f is not invertible");
    inv[i] = 1.0 / f[i];
  }
  const double lhs = centered_lp_norm(inv, mu, p);
  const double inv_sup = kernels::max_abs(inv);
  const double spread = centered_lp_norm(f, mu, p);
  VerificationReport r = make_report("strong_leibniz", lhs, inv_sup * inv_sup * spread, tol,
                                     {{"mu", mu_json(mu)}, {"f", vec(f)}, {"exponents", {{"p", exponent_json(p)}}}});
  r.details["f_spread"] = spread;
  r.details["inverse_sup"] = inv_sup;
  return r;
}

VerificationReport check_markov_variance(const ProbVector& mu, std::span<const double> f,
                                         const PiecewiseLinearFn& phi, double tol) {
  require_same_size(f.size(), mu.size(), "check_markov_variance");
  const double lip = phi.lipschitz();
  const double lhs = variance(phi.apply(f), mu);
  VerificationReport r = make_report("markov_variance", lhs, lip * lip * variance(f, mu), tol,
                                     {{"mu", mu_json(mu)}, {"f", vec(f)}, {"phi", phi_to_json(phi)}});
  r.details["monotone"] = phi.is_monotone();
  return r;
}

VerificationReport check_square_bound(const ProbVector& mu, std::span<const double> f, Exponent p, double tol) {
  require_same_size(f.size(), mu.size(), "check_square_bound");
  const double lhs = centered_lp_norm(product(f, f), mu, p);
  const double rhs = 2.0 * kernels::max_abs(f) * centered_lp_norm(f, mu, p);
  return make_report("square_bound", lhs, rhs, tol,
                     {{"mu", mu_json(mu)}, {"f", vec(f)}, {"exponents", {{"p", exponent_json(p)}}}});
}

RealVector replicate(std::span<const double> x, const RationalProbVector& mu) {
  require_same_size(x.size(), mu.size(), "replicate");
  RealVector out;
  out.reserve(mu.denominator());
  for (std::size_t i = 0; i < x.size(); ++i) out.insert(out.end(), mu.numerators()[i], x[i]);
  return out;
}

RationalProbVector rationalize(const ProbVector& mu, std::uint64_t max_denominator) {
  const std::size_t n = mu.size();
  if (max_denominator < n) throw InvalidArgument("rationalize: cap smaller than the number of atoms");
  if (max_denominator > kReplicationCap) throw CapExceeded("rationalize: cap exceeds replication cap");

  // Exact small-denominator representations first.
  for (std::uint64_t m = n; m <= max_denominator; ++m) {
    std::vector<std::uint64_t> r(n);
    std::uint64_t sum = 0;
    bool exact = true;
    for (std::size_t i = 0; i < n && exact; ++i) {
      const double scaled = mu[i] * static_cast<double>(m);
      const double rounded = std::round(scaled);
      if (rounded < 1.0 || std::fabs(mu[i] - rounded / static_cast<double>(m)) > 1e-12) exact = false;
      r[i] = static_cast<std::uint64_t>(rounded);
      sum += r[i];
    }
    if (exact && sum == m) return RationalProbVector(std::move(r));
  }

  const std::uint64_t m = max_denominator;
  const double md = static_cast<double>(m);
  std::vector<std::uint64_t> r(n);
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(mu[i] * md - 1.0)));
    sum += r[i];
  }
  if (sum > m) throw InvalidArgument("rationalize: cap too small for the mass of the smallest atoms");
  while (sum < m) {
    std::size_t best = 0;
    double best_deficit = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double deficit = mu[i] * md - static_cast<double>(r[i]);
      if (deficit > best_deficit) {
        best_deficit = deficit;
        best = i;
      }
    }
    ++r[best];
    ++sum;
  }
  return RationalProbVector(std::move(r));
}

}  // namespace leibniz

#include "leibniz/suites.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "leibniz/knorms.hpp"
#include "leibniz/search.hpp"
#include "leibniz/verify.hpp"

namespace leibniz {

namespace {

constexpr std::array<std::pair<Suite, const char*>, 12> kSuiteNames{{
    {Suite::Theorem1, "theorem1"},
    {Suite::Holder, "holder"},
    {Suite::Decomposition, "decomposition"},
    {Suite::Lemma3, "lemma3"},
    {Suite::Theorem2, "theorem2"},
    {Suite::Theorem3, "theorem3"},
    {Suite::Markov, "markov"},
    {Suite::Square, "square"},
    {Suite::StrongLeibniz, "strong-leibniz"},
    {Suite::Lemma4, "lemma4"},
    {Suite::Derivation, "derivation"},
    {Suite::Replication, "replication"},
}};

}  // namespace

std::string to_string(Suite s) {
  for (const auto& [suite, name] : kSuiteNames)
    if (suite == s) return name;
  return "unknown";
}

Suite parse_suite(const std::string& s) {
  for (const auto& [suite, name] : kSuiteNames)
    if (s == name) return suite;
  throw InvalidArgument("unknown suite '" + s + "'");
}

const std::vector<Suite>& all_suites() {
  static const std::vector<Suite> suites = [] {
    std::vector<Suite> v;
    for (const auto& entry : kSuiteNames) v.push_back(entry.first);
    return v;
  }();
  return suites;
}

namespace gen {

std::size_t size_in(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

RealVector uniform(Rng& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  RealVector v(n);
  for (double& e : v) e = d(rng);
  return v;
}

ProbVector prob_vector(Rng& rng, std::size_t n, double floor) {
  std::exponential_distribution<double> expo(1.0);
  RealVector w(n);
  double total = 0.0;
  for (double& e : w) total += (e = expo(rng));
  const double free_mass = 1.0 - static_cast<double>(n) * floor;
  double sum = 0.0;
  for (double& e : w) sum += (e = floor + free_mass * e / total);
  // Push the rounding residue into the largest atom.
  *std::max_element(w.begin(), w.end()) += 1.0 - sum;
  return ProbVector(std::move(w));
}

RealVector distinct_nodes(Rng& rng, std::size_t n) {
  for (;;) {
    RealVector x = uniform(rng, n);
    RealVector s = x;
    std::sort(s.begin(), s.end());
    bool ok = true;
    for (std::size_t i = 1; i < s.size(); ++i)
      if (s[i] - s[i - 1] < 1e-3) ok = false;
    if (ok) return x;
  }
}

Exponent exponent(Rng& rng) {
  static const std::array<Exponent, 6> grid{Exponent(1.0), Exponent(1.5), Exponent(2.0),
                                            Exponent(3.0), Exponent(4.0), Exponent::infinity()};
  return grid[size_in(rng, 0, grid.size() - 1)];
}

HolderTriple triple_with_r(Rng& rng, Exponent r) {
  for (;;) {
    const Exponent p = exponent(rng);
    if (r <= p) return HolderTriple::from_rp(r, p);
  }
}

PiecewiseLinearFn lipschitz_phi(Rng& rng, std::size_t max_breakpoints, bool monotone) {
  const std::size_t b = size_in(rng, 0, max_breakpoints);
  RealVector bps = uniform(rng, b, -1.2, 1.2);
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  RealVector slopes = uniform(rng, bps.size() + 1, monotone ? 0.0 : -2.0, 2.0);
  if (monotone && uniform(rng, 1)[0] < 0.0)
    for (double& s : slopes) s = -s;
  return PiecewiseLinearFn(std::move(bps), std::move(slopes), uniform(rng, 1)[0]);
}

SquareMatrix laplacian_entries(Rng& rng, std::size_t n) {
  SquareMatrix m(n);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = d(rng) < 0.3 ? 0.0 : d(rng);
      m(i, j) = v;
      m(j, i) = v;
    }
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) s += m(i, j);
    m(i, i) = -s;
  }
  return m;
}

RealVector mean_zero(Rng& rng, std::size_t n) {
  RealVector x = uniform(rng, n);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  for (double& v : x) v -= mean;
  return x;
}

}  // namespace gen

namespace {

double tol_or(const SuiteOptions& o, double fallback) { return o.tol >= 0.0 ? o.tol : fallback; }

std::vector<SymmetricNorm> norm_family(gen::Rng& rng, std::size_t n) {
  std::vector<SymmetricNorm> norms;
  for (double p : {1.0, 1.5, 2.0, 3.0}) norms.push_back(make_lp_norm(Exponent(p)));
  norms.push_back(make_lp_norm(Exponent::infinity()));
  for (std::size_t k = 1; k <= n; ++k) norms.push_back(make_k_norm(k));
  RealVector w = gen::uniform(rng, n, 0.1, 2.0);
  std::sort(w.begin(), w.end(), std::greater<>());
  norms.push_back(make_weighted_k_norm(WeightVector(std::move(w)), gen::size_in(rng, 1, n)));
  return norms;
}

VerificationReport theorem2_trial(gen::Rng& rng, std::size_t n, double tol) {
  std::vector<VerificationReport> parts;
  const auto norms = norm_family(rng, n);

  const LaplacianMatrix lap = LaplacianMatrix::make(gen::laplacian_entries(rng, n));
  const RealVector x = gen::mean_zero(rng, n);
  for (const auto& norm : norms) parts.push_back(laplacian_theorem2_bound(lap, x, norm, tol));
  const double bound = static_cast<double>(n) * lap.matrix().max_off_diagonal();
  const auto [col, row] = lhat_row_col_bounds(lap);
  parts.push_back(make_report("lhat_col_bound", col, bound, kDefaultIdentityTol));
  parts.push_back(make_report("lhat_row_bound", row, bound, kDefaultIdentityTol));

  // Divided-difference Laplacian of a monotone phi, bounded through Lip(phi).
  const RealVector nodes = gen::distinct_nodes(rng, n);
  const PiecewiseLinearFn phi = gen::lipschitz_phi(rng, 4, true);
  const LaplacianMatrix dd = monotone_laplacian(nodes, phi);
  const RealVector u = gen::mean_zero(rng, n);
  const double lip = phi.lipschitz();
  parts.push_back(make_report("divided_difference_offdiag_le_lip", dd.matrix().max_off_diagonal(), lip,
                              kDefaultIdentityTol));
  for (const auto& norm : norms) {
    parts.push_back(laplacian_theorem2_bound(dd, u, norm, tol));
    parts.push_back(make_report("corollary1", norm(dd.matrix().apply(u)), static_cast<double>(n) * lip * norm(u), tol));
  }
  VerificationReport r = combine_reports("theorem2", parts);
  r.instance = {{"n", n}, {"L", lap.matrix().data()}, {"x", x}, {"nodes", nodes}, {"phi", phi_to_json(phi)}, {"u", u}};
  return r;
}

VerificationReport replication_trial(gen::Rng& rng, std::size_t n_max, std::uint64_t max_den) {
  const std::size_t n = gen::size_in(rng, 1, n_max);
  const auto m = static_cast<std::uint64_t>(gen::size_in(rng, n, max_den));
  std::vector<std::uint64_t> r(n, 1);
  for (std::uint64_t extra = m - n; extra > 0; --extra) ++r[gen::size_in(rng, 0, n - 1)];
  const RationalProbVector rational(r);
  const ProbVector mu = rational.to_prob_vector();
  const ProbVector lambda = ProbVector::uniform(m);
  const RealVector x = gen::uniform(rng, n);
  const RealVector y = gen::uniform(rng, n);
  const RealVector px = replicate(x, rational);
  const RealVector py = replicate(y, rational);
  RealVector xy(n), pxy(m);
  for (std::size_t i = 0; i < n; ++i) xy[i] = x[i] * y[i];
  for (std::size_t i = 0; i < m; ++i) pxy[i] = px[i] * py[i];

  double dev = px.size() == m ? 0.0 : 1.0;
  for (const Exponent p : {Exponent(1.0), Exponent(1.5), Exponent(2.0), Exponent(3.0), Exponent::infinity()}) {
    dev = std::max(dev, std::fabs(lp_norm(x, mu, p) - lp_norm(px, lambda, p)));
    dev = std::max(dev, std::fabs(centered_lp_norm(xy, mu, p) - centered_lp_norm(pxy, lambda, p)));
  }
  return make_report("replication", dev, 0.0, 1e-12, {{"r", r}, {"m", m}, {"x", x}, {"y", y}});
}

}  // namespace

SuiteResult run_suite(Suite suite, const SuiteOptions& o) {
  if (o.n_min < 1 || o.n_min > o.n_max) throw InvalidArgument("suite: invalid n range");
  SuiteResult result;
  result.suite = suite;
  result.theorem_backed = suite != Suite::StrongLeibniz;

  if (suite == Suite::StrongLeibniz) {
    VerificationReport fixture = reproduce_worked_examples().front();
    fixture.details["expected_failure"] = true;
    result.reports.push_back(std::move(fixture));
  }

  for (std::size_t i = 0; i < o.trials; ++i) {
    const std::uint64_t seed = trial_seed(o.seed, i);
    gen::Rng rng(seed);
    const std::size_t n = gen::size_in(rng, o.n_min, o.n_max);
    VerificationReport r;
    switch (suite) {
      case Suite::Theorem1: {
        const ProbVector mu = gen::prob_vector(rng, n);
        const RealVector f = gen::uniform(rng, n);
        const RealVector g = gen::uniform(rng, n);
        const Exponent rexp = gen::exponent(rng);
        r = check_leibniz(mu, f, g, gen::triple_with_r(rng, rexp), gen::triple_with_r(rng, rexp),
                          tol_or(o, kDefaultInequalityTol));
        break;
      }
      case Suite::Holder: {
        const RealVector x = gen::uniform(rng, n);
        const RealVector y = gen::uniform(rng, n);
        r = check_holder_theta(x, y, gen::triple_with_r(rng, gen::exponent(rng)), tol_or(o, kDefaultInequalityTol));
        break;
      }
      case Suite::Decomposition:
        r = check_decomposition(gen::uniform(rng, n), gen::uniform(rng, n), tol_or(o, kDefaultIdentityTol));
        break;
      case Suite::Lemma3:
        r = check_lemma3(gen::uniform(rng, n), gen::uniform(rng, n), tol_or(o, kDefaultIdentityTol));
        break;
      case Suite::Theorem2:
        r = theorem2_trial(rng, std::max<std::size_t>(n, 2), tol_or(o, kDefaultInequalityTol));
        break;
      case Suite::Theorem3: {
        const ProbVector mu = gen::prob_vector(rng, n);
        const RealVector f = gen::uniform(rng, n);
        r = check_chain_rule(mu, f, gen::lipschitz_phi(rng, 6, true), gen::exponent(rng),
                             tol_or(o, kDefaultInequalityTol));
        break;
      }
      case Suite::Markov: {
        const ProbVector mu = gen::prob_vector(rng, n);
        const RealVector f = gen::uniform(rng, n);
        r = check_markov_variance(mu, f, gen::lipschitz_phi(rng, 6, false), tol_or(o, kDefaultInequalityTol));
        break;
      }
      case Suite::Square: {
        const ProbVector mu = gen::prob_vector(rng, n);
        r = check_square_bound(mu, gen::uniform(rng, n), gen::exponent(rng), tol_or(o, kDefaultInequalityTol));
        break;
      }
      case Suite::StrongLeibniz: {
        const ProbVector mu = gen::prob_vector(rng, n);
        RealVector f = gen::uniform(rng, n, kInverseFloor, 1.0);
        for (double& v : f)
          if (gen::uniform(rng, 1)[0] < 0.0) v = -v;
        r = check_strong_leibniz(mu, f, o.p, tol_or(o, kDefaultInequalityTol));
        break;
      }
      case Suite::Lemma4:
        r = lemma4_identity_check(gen::distinct_nodes(rng, n), gen::lipschitz_phi(rng, 6, gen::size_in(rng, 0, 1) == 1),
                                  tol_or(o, kDefaultIdentityTol));
        break;
      case Suite::Derivation:
        r = derivation_checks(gen::uniform(rng, n), gen::uniform(rng, n), tol_or(o, kDefaultIdentityTol));
        break;
      case Suite::Replication:
        r = replication_trial(rng, o.n_max, o.max_denominator);
        break;
    }
    r.seed = seed;
    result.reports.push_back(std::move(r));
  }

  if (suite == Suite::Lemma3 && o.exhaustive) {
    for (std::size_t n = 1; n <= 4; ++n) {
      std::size_t count = 1;
      for (std::size_t i = 0; i < n; ++i) count *= 3;
      RealVector x(n), y(n);
      for (std::size_t a = 0; a < count; ++a)
        for (std::size_t b = 0; b < count; ++b) {
          for (std::size_t i = 0, ca = a, cb = b; i < n; ++i, ca /= 3, cb /= 3) {
            x[i] = static_cast<double>(ca % 3) - 1.0;
            y[i] = static_cast<double>(cb % 3) - 1.0;
          }
          VerificationReport r = check_lemma3(x, y, tol_or(o, kDefaultIdentityTol));
          r.details["exhaustive"] = true;
          result.reports.push_back(std::move(r));
        }
    }
  }

  for (const auto& r : result.reports) {
    result.worst_violation = std::max(result.worst_violation, r.violation());
    if (r.pass) continue;
    if (r.details.value("expected_failure", false))
      ++result.expected_failures;
    else
      ++result.failures;
  }
  return result;
}

}  // namespace leibniz

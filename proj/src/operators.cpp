#include "leibniz/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "leibniz/kernels.hpp"

namespace leibniz {

SquareMatrix::SquareMatrix(std::size_t n, std::vector<double> row_major) : n_(n), a_(std::move(row_major)) {
  if (a_.size() != n * n) throw DimensionMismatch("square matrix: expected n*n entries");
}

RealVector SquareMatrix::apply(std::span<const double> x) const {
  require_same_size(x.size(), n_, "matrix apply");
  RealVector y(n_);
  kernels::matvec(a_, x, y);
  return y;
}

double SquareMatrix::max_abs_row_sum() const {
  double best = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += std::fabs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

double SquareMatrix::max_abs_col_sum() const {
  double best = 0.0;
  for (std::size_t j = 0; j < n_; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += std::fabs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

double SquareMatrix::max_abs_entry() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::fabs(v));
  return m;
}

double SquareMatrix::max_off_diagonal() const {
  if (n_ < 2) return 0.0;
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (i != j) m = std::max(m, (*this)(i, j));
  return m;
}

bool SquareMatrix::is_symmetric(double tol) const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (std::fabs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

double SquareMatrix::max_abs_line_sum() const {
  double m = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      row += (*this)(i, j);
      col += (*this)(j, i);
    }
    m = std::max({m, std::fabs(row), std::fabs(col)});
  }
  return m;
}

namespace {

// Fills the diagonal so every row sums to zero.
void close_rows(SquareMatrix& m) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) s += m(i, j);
    m(i, i) = -s;
  }
}

}  // namespace

ThetaMatrix theta_matrix(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) throw InvalidArgument("theta_matrix: empty vector");
  SquareMatrix m(n);
  const double scale = 1.0 / (2.0 * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) m(i, j) = scale * (x[i] + x[j]);
  close_rows(m);
  return ThetaMatrix{std::move(m), RealVector(x.begin(), x.end())};
}

SquareMatrix deflated_theta(std::span<const double> x) {
  SquareMatrix m = theta_matrix(x).entries;
  const double inv_n = 1.0 / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) m(i, j) -= inv_n * x[j];
  return m;
}

PiecewiseLinearFn::PiecewiseLinearFn(RealVector breakpoints, RealVector slopes, double anchor)
    : breakpoints_(std::move(breakpoints)), slopes_(std::move(slopes)), anchor_(anchor) {
  if (slopes_.size() != breakpoints_.size() + 1)
    throw InvalidArgument("piecewise-linear function needs one more slope than breakpoints");
  require_finite(breakpoints_, "breakpoints");
  require_finite(slopes_, "slopes");
  if (!std::isfinite(anchor_)) throw InvalidArgument("piecewise-linear anchor must be finite");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i)
    if (!(breakpoints_[i] > breakpoints_[i - 1]))
      throw InvalidArgument("breakpoints must be strictly increasing");
  knot_values_.resize(breakpoints_.size());
  for (std::size_t i = 0; i < breakpoints_.size(); ++i)
    knot_values_[i] = i == 0 ? anchor_
                             : knot_values_[i - 1] + slopes_[i] * (breakpoints_[i] - breakpoints_[i - 1]);
}

double PiecewiseLinearFn::operator()(double t) const {
  if (breakpoints_.empty()) return anchor_ + slopes_[0] * t;
  if (t < breakpoints_[0]) return anchor_ + slopes_[0] * (t - breakpoints_[0]);
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  const auto i = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return knot_values_[i] + slopes_[i + 1] * (t - breakpoints_[i]);
}

RealVector PiecewiseLinearFn::apply(std::span<const double> x) const {
  RealVector out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [this](double t) { return (*this)(t); });
  return out;
}

double PiecewiseLinearFn::lipschitz() const {
  double m = 0.0;
  for (double s : slopes_) m = std::max(m, std::fabs(s));
  return m;
}

bool PiecewiseLinearFn::is_increasing() const {
  return std::all_of(slopes_.begin(), slopes_.end(), [](double s) { return s >= 0.0; });
}

bool PiecewiseLinearFn::is_decreasing() const {
  return std::all_of(slopes_.begin(), slopes_.end(), [](double s) { return s <= 0.0; });
}

PiecewiseLinearFn PiecewiseLinearFn::negated() const {
  RealVector s = slopes_;
  for (double& v : s) v = -v;
  return PiecewiseLinearFn(breakpoints_, std::move(s), -anchor_);
}

LaplacianMatrix LaplacianMatrix::make(SquareMatrix m) {
  const double scale = std::max(1.0, m.max_abs_entry());
  if (!m.is_symmetric(kLineSumTol * scale)) throw InvalidArgument("Laplacian: not symmetric");
  if (m.max_abs_line_sum() > kLineSumTol * scale * static_cast<double>(std::max<std::size_t>(1, m.size())))
    throw InvalidArgument("Laplacian: row/column sums are not zero");
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (i != j && m(i, j) < 0.0) throw InvalidArgument("Laplacian: negative off-diagonal entry");
  SquareMatrix neg = m;
  for (std::size_t i = 0; i < neg.size(); ++i)
    for (std::size_t j = 0; j < neg.size(); ++j) neg(i, j) = -neg(i, j);
  if (smallest_eigenvalue(neg) < -kPsdTol * scale) throw InvalidArgument("Laplacian: -L is not PSD");
  if (neg.size() <= 3 && !principal_minors_nonnegative(neg, kPsdTol * scale * scale * scale))
    throw InvalidArgument("Laplacian: -L has a negative principal minor");
  return LaplacianMatrix(std::move(m));
}

std::optional<LaplacianMatrix> LaplacianMatrix::try_make(SquareMatrix m) {
  try {
    return make(std::move(m));
  } catch (const InvalidArgument&) {
    return std::nullopt;
  }
}

double smallest_eigenvalue(const SquareMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  if (n == 0) return 0.0;
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      a(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool principal_minors_nonnegative(const SquareMatrix& m, double tol) {
  const std::size_t n = m.size();
  if (n > 3) throw InvalidArgument("principal minor check is limited to n <= 3");
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    double det = 0.0;
    const auto e = [&](std::size_t r, std::size_t c) { return m(idx[r], idx[c]); };
    if (idx.size() == 1) {
      det = e(0, 0);
    } else if (idx.size() == 2) {
      det = e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0);
    } else {
      det = e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
            e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
    }
    if (det < -tol) return false;
  }
  return true;
}

SquareMatrix divided_difference_matrix(std::span<const double> x, std::span<const double> phi_values) {
  require_same_size(x.size(), phi_values.size(), "divided_difference_matrix");
  const std::size_t n = x.size();
  if (n == 0) throw InvalidArgument("divided_difference_matrix: empty vector");
  const double gap_floor = 1e-9 * (1.0 + kernels::max_abs(x));
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double gap = x[i] - x[j];
      if (std::fabs(gap) < gap_floor)
        throw DegenerateInput("divided_difference_matrix: nodes " + std::to_string(i) + " and " +
                              std::to_string(j) + " coincide");
      m(i, j) = (phi_values[i] - phi_values[j]) / gap;
    }
  close_rows(m);
  return m;
}

SquareMatrix divided_difference_matrix(std::span<const double> x, const PiecewiseLinearFn& phi) {
  const RealVector values = phi.apply(x);
  return divided_difference_matrix(x, values);
}

LaplacianMatrix monotone_laplacian(std::span<const double> x, const PiecewiseLinearFn& phi) {
  if (phi.is_increasing()) return LaplacianMatrix::make(divided_difference_matrix(x, phi));
  if (phi.is_decreasing()) return LaplacianMatrix::make(divided_difference_matrix(x, phi.negated()));
  throw InvalidArgument("monotone_laplacian: phi is not monotone");
}

namespace {

nlohmann::json phi_json(const PiecewiseLinearFn& phi) {
  return {{"breakpoints", phi.breakpoints()}, {"slopes", phi.slopes()}, {"anchor", phi.anchor()}};
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace

VerificationReport lemma4_identity_check(std::span<const double> x, const PiecewiseLinearFn& phi, double tol) {
  const std::size_t n = x.size();
  const SquareMatrix theta = divided_difference_matrix(x, phi);
  const ProbVector uniform = ProbVector::uniform(n);
  RealVector lhs = theta.apply(center(x, uniform));
  for (double& v : lhs) v *= -1.0 / static_cast<double>(n);
  const RealVector rhs = center(phi.apply(x), uniform);
  return make_report("lemma4_identity", max_abs_diff(lhs, rhs), 0.0, tol,
                     {{"x", RealVector(x.begin(), x.end())}, {"phi", phi_json(phi)}});
}

VerificationReport laplacian_theorem2_bound(const LaplacianMatrix& lap, std::span<const double> x,
                                            const SymmetricNorm& norm, double tol) {
  const SquareMatrix& m = lap.matrix();
  require_same_size(x.size(), m.size(), "laplacian_theorem2_bound");
  double sum = 0.0, mass = 0.0;
  for (double v : x) {
    sum += v;
    mass += std::fabs(v);
  }
  if (std::fabs(sum) > 1e-10 * std::max(1.0, mass))
    throw InvalidArgument("laplacian_theorem2_bound: x must have zero coordinate sum");
  const double n = static_cast<double>(m.size());
  const double lhs = norm(m.apply(x));
  const double rhs = n * m.max_off_diagonal() * norm(x);
  return make_report("theorem2_laplacian_bound", lhs, rhs, tol,
                     {{"n", m.size()}, {"L", m.data()}, {"x", RealVector(x.begin(), x.end())}});
}

std::pair<double, double> lhat_row_col_bounds(const LaplacianMatrix& lap) {
  const SquareMatrix& m = lap.matrix();
  const std::size_t n = m.size();
  RealVector x_inf(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double best = n > 1 ? -std::numeric_limits<double>::infinity() : 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) best = std::max(best, m(i, j));
    x_inf[i] = best;
  }
  SquareMatrix hat = m;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) hat(i, j) -= x_inf[i];
  return {hat.max_abs_col_sum(), hat.max_abs_row_sum()};
}

Derivation::Derivation(std::size_t n) : n_(n), d_(n * n * n, 0.0) {
  const double c = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t row = i * n + j;
      d_[row * n + i] += c;
      d_[row * n + j] -= c;
    }
}

RealVector Derivation::apply(std::span<const double> f) const {
  require_same_size(f.size(), n_, "derivation");
  RealVector out(n_ * n_, 0.0);
  for (std::size_t row = 0; row < n_ * n_; ++row)
    out[row] = kernels::dot(std::span<const double>(d_).subspan(row * n_, n_), f);
  return out;
}

RealVector Derivation::adjoint(std::span<const double> a) const {
  require_same_size(a.size(), n_ * n_, "derivation adjoint");
  // d* = W1^{-1} D^T W2 with W1 = diag(1/n), W2 = diag(1/n^2).
  const double w1 = 1.0 / static_cast<double>(n_);
  const double w2 = w1 * w1;
  RealVector out(n_, 0.0);
  for (std::size_t row = 0; row < n_ * n_; ++row)
    for (std::size_t k = 0; k < n_; ++k) out[k] += d_[row * n_ + k] * w2 * a[row];
  for (double& v : out) v /= w1;
  return out;
}

RealVector Derivation::left_action(std::span<const double> f, std::span<const double> a) const {
  RealVector out(a.begin(), a.end());
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out[i * n_ + j] *= f[i];
  return out;
}

RealVector Derivation::right_action(std::span<const double> a, std::span<const double> g) const {
  RealVector out(a.begin(), a.end());
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out[i * n_ + j] *= g[j];
  return out;
}

VerificationReport derivation_checks(std::span<const double> f, std::span<const double> g, double tol) {
  require_same_size(f.size(), g.size(), "derivation_checks");
  const std::size_t n = f.size();
  const Derivation d(n);
  SquareMatrix lap(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) lap(i, j) = 1.0 / static_cast<double>(n) - (i == j ? 1.0 : 0.0);

  const auto neg = [](RealVector v) {
    for (double& e : v) e = -e;
    return v;
  };

  std::vector<VerificationReport> parts;
  const auto add = [&](const char* name, std::span<const double> a, std::span<const double> b) {
    parts.push_back(make_report(name, max_abs_diff(a, b), 0.0, tol));
  };

  // -L = d*d, tested on both f and g.
  add("minus_L_eq_dstar_d(f)", neg(lap.apply(f)), d.adjoint(d.apply(f)));
  add("minus_L_eq_dstar_d(g)", neg(lap.apply(g)), d.adjoint(d.apply(g)));

  const RealVector f_dg = d.adjoint(d.left_action(f, d.apply(g)));
  const RealVector df_g = d.adjoint(d.right_action(d.apply(f), g));
  add("dstar(f dg)=-Theta_f g", f_dg, neg(theta_matrix(f).entries.apply(g)));
  add("dstar((df) g)=-Theta_g f", df_g, neg(theta_matrix(g).entries.apply(f)));

  RealVector fg(n);
  for (std::size_t i = 0; i < n; ++i) fg[i] = f[i] * g[i];
  const RealVector l_fg = lap.apply(fg);
  const RealVector l_f = lap.apply(f);
  const RealVector l_g = lap.apply(g);
  RealVector half_form(n);
  for (std::size_t i = 0; i < n; ++i) half_form[i] = -0.5 * (l_fg[i] - g[i] * l_f[i] + f[i] * l_g[i]);
  add("dstar(f dg)=-1/2(L(fg)-gLf+fLg)", f_dg, half_form);

  RealVector leibniz_sum(n);
  for (std::size_t i = 0; i < n; ++i) leibniz_sum[i] = f_dg[i] + df_g[i];
  add("-L(fg)=dstar(f dg)+dstar((df) g)", neg(l_fg), leibniz_sum);

  VerificationReport r = combine_reports("derivation_identities", parts);
  r.instance = {{"f", RealVector(f.begin(), f.end())}, {"g", RealVector(g.begin(), g.end())}};
  return r;
}

}  // namespace leibniz

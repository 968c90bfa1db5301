#include <algorithm>
#include <cmath>

#include "leibniz/kernels.hpp"

namespace leibniz::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double weighted_abs_sum_scalar(const double* w, const double* x, double shift, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * std::fabs(x[i] - shift);
  return s;
}

double weighted_sq_sum_scalar(const double* w, const double* x, double shift, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - shift;
    s += w[i] * d * d;
  }
  return s;
}

double max_abs_scalar(const double* x, double shift, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i] - shift));
  return m;
}

void matvec_scalar(const double* a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = dot_scalar(a + i * n, x, n);
}

constexpr KernelTable kScalar{
    "scalar",       dot_scalar,    weighted_abs_sum_scalar, weighted_sq_sum_scalar,
    max_abs_scalar, matvec_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace leibniz::kernels

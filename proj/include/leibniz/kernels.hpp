#pragma once

// Inner-loop arithmetic used by the norm and matrix code.
//
// Every kernel has a scalar reference implementation; an AVX2/FMA variant is
// compiled into a separate translation unit and picked at runtime when the CPU
// supports it. The two are required to agree to round-off (see
// tests/test_kernels.cpp). Setting LEIBNIZ_LAB_KERNELS=scalar forces the
// reference path.

#include <cstddef>
#include <span>

namespace leibniz::kernels {

struct KernelTable {
  const char* name;
  // sum_i a_i b_i
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i w_i |x_i - shift|
  double (*weighted_abs_sum)(const double* w, const double* x, double shift, std::size_t n);
  // sum_i w_i (x_i - shift)^2
  double (*weighted_sq_sum)(const double* w, const double* x, double shift, std::size_t n);
  // max_i |x_i - shift|, 0 for n == 0
  double (*max_abs)(const double* x, double shift, std::size_t n);
  // y = A x for a row-major n x n matrix
  void (*matvec)(const double* a, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_table();

// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2_table();

// The table every library routine goes through.
const KernelTable& active();

double dot(std::span<const double> a, std::span<const double> b);
double weighted_abs_sum(std::span<const double> w, std::span<const double> x, double shift = 0.0);
double weighted_sq_sum(std::span<const double> w, std::span<const double> x, double shift = 0.0);
double max_abs(std::span<const double> x, double shift = 0.0);
void matvec(std::span<const double> a, std::span<const double> x, std::span<double> y);

}  // namespace leibniz::kernels

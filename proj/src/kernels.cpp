#include "leibniz/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace leibniz::kernels {
namespace {

const KernelTable& select() {
  const char* env = std::getenv("LEIBNIZ_LAB_KERNELS");
  if (env != nullptr && std::string_view(env) == "scalar") return scalar_table();
  if (const KernelTable* t = avx2_table()) return *t;
  return scalar_table();
}

void require_same(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel: dimension mismatch");
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same(a.size(), b.size());
  return active().dot(a.data(), b.data(), a.size());
}

double weighted_abs_sum(std::span<const double> w, std::span<const double> x, double shift) {
  require_same(w.size(), x.size());
  return active().weighted_abs_sum(w.data(), x.data(), shift, x.size());
}

double weighted_sq_sum(std::span<const double> w, std::span<const double> x, double shift) {
  require_same(w.size(), x.size());
  return active().weighted_sq_sum(w.data(), x.data(), shift, x.size());
}

double max_abs(std::span<const double> x, double shift) {
  return active().max_abs(x.data(), shift, x.size());
}

void matvec(std::span<const double> a, std::span<const double> x, std::span<double> y) {
  require_same(a.size(), x.size() * x.size());
  require_same(x.size(), y.size());
  active().matvec(a.data(), x.data(), y.data(), x.size());
}

}  // namespace leibniz::kernels

#include <algorithm>
#include <cmath>

#include "qpv/kernels.hpp"

namespace qpv::kernels {
namespace {

void matvec(const double* m, std::size_t n, std::size_t stride, const double* x, double* y) {
  std::fill(y, y + stride, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double xj = x[j];
    const double* col = m + j * stride;
    for (std::size_t i = 0; i < stride; ++i) y[i] += col[i] * xj;
  }
}

double max_abs(const double* v, std::size_t len) {
  double r = 0.0;
  for (std::size_t i = 0; i < len; ++i) r = std::max(r, std::abs(v[i]));
  return r;
}

double rk4_step(const double* m, std::size_t n, std::size_t stride, double dt, double* x, double* work) {
  double* k1 = work;
  double* k2 = work + stride;
  double* k3 = work + 2 * stride;
  double* k4 = work + 3 * stride;
  double* tmp = work + 4 * stride;
  const double half = 0.5 * dt;
  const double sixth = dt / 6.0;

  matvec(m, n, stride, x, k1);
  for (std::size_t i = 0; i < stride; ++i) tmp[i] = x[i] + half * k1[i];
  matvec(m, n, stride, tmp, k2);
  for (std::size_t i = 0; i < stride; ++i) tmp[i] = x[i] + half * k2[i];
  matvec(m, n, stride, tmp, k3);
  for (std::size_t i = 0; i < stride; ++i) tmp[i] = x[i] + dt * k3[i];
  matvec(m, n, stride, tmp, k4);
  for (std::size_t i = 0; i < stride; ++i) {
    x[i] += sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return max_abs(k1, stride);
}

constexpr KernelTable kScalar{Backend::Scalar, "scalar", &matvec, &rk4_step, &max_abs};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace qpv::kernels

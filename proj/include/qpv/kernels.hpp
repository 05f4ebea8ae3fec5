#pragma once

// Data-parallel inner loops of the integrator. Every backend implements the
// same contract on padded column-major matrices (see RateMatrix); backends may
// differ only by floating-point contraction (FMA) roundoff.

#include <cstddef>
#include <string_view>
#include <vector>

namespace qpv::kernels {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;
  const char* name;

  /// y = M x. `m` has n columns of height `stride`; x and y hold `stride`
  /// doubles, padding entries of x must be zero.
  void (*matvec)(const double* m, std::size_t n, std::size_t stride, const double* x, double* y);

  /// One classical RK4 step of dx/dt = M x, in place. `work` holds at least
  /// 5 * stride doubles. Returns ||M x||_inf at the start of the step.
  double (*rk4_step)(const double* m, std::size_t n, std::size_t stride, double dt, double* x, double* work);

  /// max_i |v_i| over `len` entries.
  double (*max_abs)(const double* v, std::size_t len);
};

const KernelTable& scalar_table();

/// nullptr when the AVX2 variant was not compiled in.
const KernelTable* avx2_table();

bool cpu_supports(Backend backend);

/// Backends compiled in and supported by this CPU, scalar first.
std::vector<Backend> available_backends();

const KernelTable& table_for(Backend backend);

/// Process-wide selection, made once: QPV_SIMD=scalar|avx2 if set and
/// supported, otherwise the widest supported backend.
const KernelTable& active();

std::string_view backend_name(Backend backend);

}  // namespace qpv::kernels

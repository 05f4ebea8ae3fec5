#include <cstdlib>
#include <string>

#include "qpv/errors.hpp"
#include "qpv/kernels.hpp"

namespace qpv::kernels {

#if defined(QPV_HAVE_AVX2)
const KernelTable* avx2_table_impl();
#endif

const KernelTable* avx2_table() {
#if defined(QPV_HAVE_AVX2)
  return avx2_table_impl();
#else
  return nullptr;
#endif
}

bool cpu_supports(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(QPV_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out{Backend::Scalar};
  if (avx2_table() != nullptr && cpu_supports(Backend::Avx2)) out.push_back(Backend::Avx2);
  return out;
}

std::string_view backend_name(Backend backend) {
  return backend == Backend::Avx2 ? "avx2" : "scalar";
}

const KernelTable& table_for(Backend backend) {
  if (backend == Backend::Avx2) {
    if (avx2_table() == nullptr || !cpu_supports(Backend::Avx2)) {
      throw DomainError("avx2 kernels are not available on this build/CPU");
    }
    return *avx2_table();
  }
  return scalar_table();
}

namespace {

const KernelTable& select() {
  const auto backends = available_backends();
  if (const char* env = std::getenv("QPV_SIMD")) {
    const std::string want = env;
    for (Backend b : backends) {
      if (backend_name(b) == want) return table_for(b);
    }
  }
  return table_for(backends.back());
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& chosen = select();
  return chosen;
}

}  // namespace qpv::kernels

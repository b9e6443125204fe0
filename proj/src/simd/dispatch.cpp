#include <atomic>
#include <cstdlib>
#include <cstring>

#include "orient/errors.hpp"
#include "orient/simd.hpp"

namespace orient::simd {

namespace {

Backend detect() {
  if (const char* env = std::getenv("ORIENT_SIMD"); env && std::strcmp(env, "scalar") == 0) {
    return Backend::Scalar;
  }
  if (available(Backend::Avx2)) return Backend::Avx2;
  return Backend::Scalar;
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{&table(detect())};
  return current;
}

}  // namespace

bool available(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(ORIENT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Backend b) {
  if (!available(b)) throw InvalidArgument("SIMD backend not available: " + std::string(name(b)));
#if defined(ORIENT_HAVE_AVX2)
  if (b == Backend::Avx2) return detail::kAvx2Table;
#endif
  return detail::kScalarTable;
}

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

void set_active(Backend b) { slot().store(&table(b), std::memory_order_release); }

std::string_view name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace orient::simd

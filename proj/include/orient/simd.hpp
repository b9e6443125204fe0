#pragma once

// Data-parallel inner loops with a scalar reference and vector variants.
// The active backend is chosen once at startup from CPU features; setting
// ORIENT_SIMD=scalar in the environment pins the reference path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace orient::simd {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;
  // sum_j exp(-i * omega * x[j])
  std::complex<double> (*phase_sum)(const double* x, std::size_t n, double omega);
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*abs_sum)(const double* a, std::size_t n);
};

bool available(Backend b);
const KernelTable& table(Backend b);
const KernelTable& active();
void set_active(Backend b);
std::string_view name(Backend b);

inline std::complex<double> phase_sum(std::span<const double> x, double omega) {
  return active().phase_sum(x.data(), x.size(), omega);
}
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}
inline double abs_sum(std::span<const double> a) { return active().abs_sum(a.data(), a.size()); }

namespace detail {
extern const KernelTable kScalarTable;
#if defined(ORIENT_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
}  // namespace detail

}  // namespace orient::simd

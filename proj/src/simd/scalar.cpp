#include <cmath>

#include "orient/simd.hpp"

namespace orient::simd::detail {

namespace {

std::complex<double> phase_sum_scalar(const double* x, std::size_t n, double omega) {
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double arg = omega * x[j];
    re += std::cos(arg);
    im -= std::sin(arg);
  }
  return {re, im};
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += a[j] * b[j];
  return s;
}

double abs_sum_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += std::fabs(a[j]);
  return s;
}

}  // namespace

const KernelTable kScalarTable{Backend::Scalar, &phase_sum_scalar, &dot_scalar, &abs_sum_scalar};

}  // namespace orient::simd::detail

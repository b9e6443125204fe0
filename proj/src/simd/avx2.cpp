#include <immintrin.h>

#include <cmath>

#include "orient/simd.hpp"

namespace orient::simd::detail {

namespace {

// Cody-Waite split of pi/2; q * kPio2Hi is exact for |q| < 2^20.
constexpr double kPio2Hi = 1.57079632673412561417e+00;
constexpr double kPio2Mid = 6.07710050630396597660e-11;
constexpr double kPio2Lo = 2.02226624879595063154e-21;
constexpr double kTwoOverPi = 6.36619772367581382433e-01;
constexpr double kMaxArg = 1.0e6;

inline __m256d poly6(__m256d z, const double* c) {
  __m256d p = _mm256_set1_pd(c[0]);
  for (int k = 1; k < 6; ++k) p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(c[k]));
  return p;
}

constexpr double kSinCoef[6] = {1.58962301576546568060E-10, -2.50507477628578072866E-8,
                                2.75573136213857245213E-6,  -1.98412698295895385996E-4,
                                8.33333333332211858878E-3,  -1.66666666666666307295E-1};
constexpr double kCosCoef[6] = {-1.13585365213876817300E-11, 2.08757008419747316778E-9,
                                -2.75573141792967388112E-7,  2.48015872888517045348E-5,
                                -1.38888888888730564116E-3,  4.16666666666665929218E-2};

// sin and cos of four lanes with |x| <= kMaxArg.
inline void sincos4(__m256d x, __m256d& s_out, __m256d& c_out) {
  const __m256d q = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2Hi), x);
  r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2Mid), r);
  r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2Lo), r);

  const __m256d z = _mm256_mul_pd(r, r);
  const __m256d s = _mm256_fmadd_pd(_mm256_mul_pd(r, z), poly6(z, kSinCoef), r);
  const __m256d c = _mm256_fmadd_pd(_mm256_mul_pd(z, z), poly6(z, kCosCoef),
                                    _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, _mm256_set1_pd(1.0)));

  // quadrant = q mod 4 in [0, 4)
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d quad = _mm256_sub_pd(
      q, _mm256_mul_pd(four, _mm256_floor_pd(_mm256_mul_pd(q, _mm256_set1_pd(0.25)))));
  const __m256d one = _mm256_set1_pd(1.0), two = _mm256_set1_pd(2.0), three = _mm256_set1_pd(3.0);
  const __m256d is1 = _mm256_cmp_pd(quad, one, _CMP_EQ_OQ);
  const __m256d is2 = _mm256_cmp_pd(quad, two, _CMP_EQ_OQ);
  const __m256d is3 = _mm256_cmp_pd(quad, three, _CMP_EQ_OQ);
  const __m256d swap = _mm256_or_pd(is1, is3);
  const __m256d sign = _mm256_set1_pd(-0.0);

  __m256d so = _mm256_blendv_pd(s, c, swap);
  __m256d co = _mm256_blendv_pd(c, s, swap);
  so = _mm256_xor_pd(so, _mm256_and_pd(_mm256_or_pd(is2, is3), sign));
  co = _mm256_xor_pd(co, _mm256_and_pd(_mm256_or_pd(is1, is2), sign));
  s_out = so;
  c_out = co;
}

std::complex<double> phase_sum_avx2(const double* x, std::size_t n, double omega) {
  const __m256d w = _mm256_set1_pd(omega);
  const __m256d limit = _mm256_set1_pd(kMaxArg);
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d acc_c = _mm256_setzero_pd();
  __m256d acc_s = _mm256_setzero_pd();
  double re_far = 0.0, im_far = 0.0;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d arg = _mm256_mul_pd(w, _mm256_loadu_pd(x + j));
    const __m256d big = _mm256_cmp_pd(_mm256_and_pd(arg, abs_mask), limit, _CMP_GT_OQ);
    if (_mm256_movemask_pd(big) != 0) {
      for (std::size_t k = j; k < j + 4; ++k) {
        re_far += std::cos(omega * x[k]);
        im_far -= std::sin(omega * x[k]);
      }
      continue;
    }
    __m256d s, c;
    sincos4(arg, s, c);
    acc_c = _mm256_add_pd(acc_c, c);
    acc_s = _mm256_add_pd(acc_s, s);
  }
  alignas(32) double cb[4], sb[4];
  _mm256_store_pd(cb, acc_c);
  _mm256_store_pd(sb, acc_s);
  double re = (cb[0] + cb[1]) + (cb[2] + cb[3]) + re_far;
  double im = -((sb[0] + sb[1]) + (sb[2] + sb[3])) + im_far;
  for (; j < n; ++j) {
    re += std::cos(omega * x[j]);
    im -= std::sin(omega * x[j]);
  }
  return {re, im};
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + j + 4), _mm256_loadu_pd(b + j + 4), acc1);
  }
  alignas(32) double buf[4];
  _mm256_store_pd(buf, _mm256_add_pd(acc0, acc1));
  double s = (buf[0] + buf[1]) + (buf[2] + buf[3]);
  for (; j < n; ++j) s += a[j] * b[j];
  return s;
}

double abs_sum_avx2(const double* a, std::size_t n) {
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_and_pd(_mm256_loadu_pd(a + j), abs_mask));
    acc1 = _mm256_add_pd(acc1, _mm256_and_pd(_mm256_loadu_pd(a + j + 4), abs_mask));
  }
  alignas(32) double buf[4];
  _mm256_store_pd(buf, _mm256_add_pd(acc0, acc1));
  double s = (buf[0] + buf[1]) + (buf[2] + buf[3]);
  for (; j < n; ++j) s += std::fabs(a[j]);
  return s;
}

}  // namespace

const KernelTable kAvx2Table{Backend::Avx2, &phase_sum_avx2, &dot_avx2, &abs_sum_avx2};

}  // namespace orient::simd::detail

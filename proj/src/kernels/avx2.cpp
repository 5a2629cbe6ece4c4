// Built with -mavx2 (and without -mfma) on x86-64 only.
#include <immintrin.h>

#include "tables.hpp"

namespace onpack::kernels::detail {

namespace {

// _mm256_max_pd(a, b) returns b when a and b compare equal or either is NaN,
// which matches `a > b ? a : b` in the scalar reference, including -0.0.
inline __m256d huber4(__m256d x, __m256d theta, __m256d half, __m256d twice) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d upper = _mm256_sub_pd(x, half);
  const __m256d middle = _mm256_div_pd(_mm256_mul_pd(x, x), twice);
  const __m256d gt0 = _mm256_cmp_pd(x, zero, _CMP_GT_OQ);
  const __m256d gtt = _mm256_cmp_pd(x, theta, _CMP_GT_OQ);
  return _mm256_blendv_pd(_mm256_blendv_pd(zero, middle, gt0), upper, gtt);
}

inline __m256d deriv4(__m256d x, __m256d theta) {
  const __m256d p = _mm256_max_pd(x, _mm256_setzero_pd());
  const __m256d q = _mm256_div_pd(p, theta);
  return _mm256_min_pd(q, _mm256_set1_pd(1.0));
}

inline double hsum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

void huber(const double* x, double* out, std::size_t n, double theta) {
  const __m256d th = _mm256_set1_pd(theta);
  const __m256d half = _mm256_set1_pd(0.5 * theta);
  const __m256d twice = _mm256_set1_pd(2.0 * theta);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) _mm256_storeu_pd(out + k, huber4(_mm256_loadu_pd(x + k), th, half, twice));
  for (; k < n; ++k) out[k] = huber_ref(x[k], theta);
}

void huber_deriv(const double* x, double* out, std::size_t n, double theta) {
  const __m256d th = _mm256_set1_pd(theta);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) _mm256_storeu_pd(out + k, deriv4(_mm256_loadu_pd(x + k), th));
  for (; k < n; ++k) out[k] = huber_deriv_ref(x[k], theta);
}

double huber_sum_shifted(const double* x, const double* shift, std::size_t n, double theta) {
  const __m256d th = _mm256_set1_pd(theta);
  const __m256d half = _mm256_set1_pd(0.5 * theta);
  const __m256d twice = _mm256_set1_pd(2.0 * theta);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(shift + k));
    acc = _mm256_add_pd(acc, huber4(d, th, half, twice));
  }
  double sum = hsum(acc);
  for (; k < n; ++k) sum += huber_ref(x[k] - shift[k], theta);
  return sum;
}

double hinge_sum_shifted(const double* x, const double* shift, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(shift + k));
    acc = _mm256_add_pd(acc, _mm256_max_pd(d, _mm256_setzero_pd()));
  }
  double sum = hsum(acc);
  for (; k < n; ++k) {
    const double d = x[k] - shift[k];
    sum += d > 0.0 ? d : 0.0;
  }
  return sum;
}

void momentum_step(const double* x, const double* prev, const double* g, double* out, std::size_t n, double beta,
                   double alpha) {
  const __m256d b1 = _mm256_set1_pd(1.0 + beta);
  const __m256d b = _mm256_set1_pd(beta);
  const __m256d a = _mm256_set1_pd(alpha);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d y = _mm256_sub_pd(_mm256_mul_pd(b1, _mm256_loadu_pd(x + k)), _mm256_mul_pd(b, _mm256_loadu_pd(prev + k)));
    const __m256d z = _mm256_add_pd(y, _mm256_mul_pd(a, _mm256_loadu_pd(g + k)));
    // min_pd(z, 1) is `z < 1 ? z : 1`; max_pd(lo, 0) is `lo > 0 ? lo : 0`.
    _mm256_storeu_pd(out + k, _mm256_max_pd(_mm256_min_pd(z, one), zero));
  }
  for (; k < n; ++k) out[k] = momentum_ref(x[k], prev[k], g[k], beta, alpha);
}

const KernelTable kAvx2Table = {Isa::Avx2, huber, huber_deriv, huber_sum_shifted, hinge_sum_shifted, momentum_step};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2Table; }

}  // namespace onpack::kernels::detail

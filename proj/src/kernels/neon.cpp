// AArch64 only. Uses compare-and-select instead of vmaxq/vminq so that signed
// zeros and NaNs resolve exactly as in the scalar reference.
#include <arm_neon.h>

#include "tables.hpp"

namespace onpack::kernels::detail {

namespace {

inline float64x2_t select_gt(float64x2_t a, float64x2_t b) { return vbslq_f64(vcgtq_f64(a, b), a, b); }
inline float64x2_t select_lt(float64x2_t a, float64x2_t b) { return vbslq_f64(vcltq_f64(a, b), a, b); }

inline float64x2_t huber2(float64x2_t x, float64x2_t theta, float64x2_t half, float64x2_t twice) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t upper = vsubq_f64(x, half);
  const float64x2_t middle = vdivq_f64(vmulq_f64(x, x), twice);
  const float64x2_t low = vbslq_f64(vcgtq_f64(x, zero), middle, zero);
  return vbslq_f64(vcgtq_f64(x, theta), upper, low);
}

inline float64x2_t deriv2(float64x2_t x, float64x2_t theta) {
  const float64x2_t p = select_gt(x, vdupq_n_f64(0.0));
  return select_lt(vdivq_f64(p, theta), vdupq_n_f64(1.0));
}

void huber(const double* x, double* out, std::size_t n, double theta) {
  const float64x2_t th = vdupq_n_f64(theta), half = vdupq_n_f64(0.5 * theta), twice = vdupq_n_f64(2.0 * theta);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) vst1q_f64(out + k, huber2(vld1q_f64(x + k), th, half, twice));
  for (; k < n; ++k) out[k] = huber_ref(x[k], theta);
}

void huber_deriv(const double* x, double* out, std::size_t n, double theta) {
  const float64x2_t th = vdupq_n_f64(theta);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) vst1q_f64(out + k, deriv2(vld1q_f64(x + k), th));
  for (; k < n; ++k) out[k] = huber_deriv_ref(x[k], theta);
}

double huber_sum_shifted(const double* x, const double* shift, std::size_t n, double theta) {
  const float64x2_t th = vdupq_n_f64(theta), half = vdupq_n_f64(0.5 * theta), twice = vdupq_n_f64(2.0 * theta);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    acc = vaddq_f64(acc, huber2(vsubq_f64(vld1q_f64(x + k), vld1q_f64(shift + k)), th, half, twice));
  }
  double sum = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; k < n; ++k) sum += huber_ref(x[k] - shift[k], theta);
  return sum;
}

double hinge_sum_shifted(const double* x, const double* shift, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    acc = vaddq_f64(acc, select_gt(vsubq_f64(vld1q_f64(x + k), vld1q_f64(shift + k)), vdupq_n_f64(0.0)));
  }
  double sum = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; k < n; ++k) {
    const double d = x[k] - shift[k];
    sum += d > 0.0 ? d : 0.0;
  }
  return sum;
}

void momentum_step(const double* x, const double* prev, const double* g, double* out, std::size_t n, double beta,
                   double alpha) {
  const float64x2_t b1 = vdupq_n_f64(1.0 + beta), b = vdupq_n_f64(beta), a = vdupq_n_f64(alpha);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t y = vsubq_f64(vmulq_f64(b1, vld1q_f64(x + k)), vmulq_f64(b, vld1q_f64(prev + k)));
    const float64x2_t z = vaddq_f64(y, vmulq_f64(a, vld1q_f64(g + k)));
    vst1q_f64(out + k, select_gt(select_lt(z, vdupq_n_f64(1.0)), vdupq_n_f64(0.0)));
  }
  for (; k < n; ++k) out[k] = momentum_ref(x[k], prev[k], g[k], beta, alpha);
}

const KernelTable kNeonTable = {Isa::Neon, huber, huber_deriv, huber_sum_shifted, hinge_sum_shifted, momentum_step};

}  // namespace

const KernelTable* neon_table() { return &kNeonTable; }

}  // namespace onpack::kernels::detail

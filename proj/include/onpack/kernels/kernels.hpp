#pragma once

#include <cstddef>

namespace onpack::kernels {

enum class Isa { Scalar, Avx2, Neon };

const char* isa_name(Isa isa);

// Vectorized inner loops. Elementwise kernels are bitwise identical across
// ISAs (same IEEE operations in the same order, no FMA). The two reductions
// use lane-wise partial sums and agree with the scalar order to rounding.
struct KernelTable {
  Isa isa;
  // out[k] = phi_theta(x[k])
  void (*huber)(const double* x, double* out, std::size_t n, double theta);
  // out[k] = phi'_theta(x[k]) = min(max(x, 0) / theta, 1)
  void (*huber_deriv)(const double* x, double* out, std::size_t n, double theta);
  // sum_k phi_theta(x[k] - shift[k])
  double (*huber_sum_shifted)(const double* x, const double* shift, std::size_t n, double theta);
  // sum_k (x[k] - shift[k])^+
  double (*hinge_sum_shifted)(const double* x, const double* shift, std::size_t n);
  // out[k] = clamp((1 + beta) x[k] - beta prev[k] + alpha g[k], 0, 1)
  void (*momentum_step)(const double* x, const double* prev, const double* g, double* out, std::size_t n,
                        double beta, double alpha);
};

// Table picked on first use: the best ISA the CPU supports, unless the
// ONPACK_ISA environment variable (scalar | avx2 | neon) names another
// supported one.
const KernelTable& active();

// Table for a given ISA, or nullptr when it is not compiled in or the CPU
// lacks it.
const KernelTable* table_for(Isa isa);

// Scalar reference formulas. The vector kernels reproduce these exactly.
inline double huber_ref(double x, double theta) {
  const double half = 0.5 * theta;
  const double twice = 2.0 * theta;
  if (x > theta) return x - half;
  if (x > 0.0) return (x * x) / twice;
  return 0.0;
}

inline double huber_deriv_ref(double x, double theta) {
  const double p = x > 0.0 ? x : 0.0;
  const double q = p / theta;
  return q < 1.0 ? q : 1.0;
}

// (1 + beta) x - beta prev, the extrapolated point of the momentum schedule.
inline double extrapolate_ref(double beta, double x, double prev) {
  const double a = (1.0 + beta) * x;
  const double b = beta * prev;
  return a - b;
}

inline double momentum_ref(double x, double prev, double g, double beta, double alpha) {
  const double y = extrapolate_ref(beta, x, prev);
  const double step = alpha * g;
  const double z = y + step;
  const double lo = z < 1.0 ? z : 1.0;
  return lo > 0.0 ? lo : 0.0;
}

}  // namespace onpack::kernels

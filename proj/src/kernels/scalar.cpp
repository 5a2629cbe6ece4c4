#include "tables.hpp"

namespace onpack::kernels::detail {

namespace {

void huber(const double* x, double* out, std::size_t n, double theta) {
  for (std::size_t k = 0; k < n; ++k) out[k] = huber_ref(x[k], theta);
}

void huber_deriv(const double* x, double* out, std::size_t n, double theta) {
  for (std::size_t k = 0; k < n; ++k) out[k] = huber_deriv_ref(x[k], theta);
}

double huber_sum_shifted(const double* x, const double* shift, std::size_t n, double theta) {
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += huber_ref(x[k] - shift[k], theta);
  return sum;
}

double hinge_sum_shifted(const double* x, const double* shift, std::size_t n) {
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = x[k] - shift[k];
    sum += d > 0.0 ? d : 0.0;
  }
  return sum;
}

void momentum_step(const double* x, const double* prev, const double* g, double* out, std::size_t n, double beta,
                   double alpha) {
  for (std::size_t k = 0; k < n; ++k) out[k] = momentum_ref(x[k], prev[k], g[k], beta, alpha);
}

}  // namespace

const KernelTable kScalarTable = {Isa::Scalar, huber, huber_deriv, huber_sum_shifted, hinge_sum_shifted,
                                  momentum_step};

}  // namespace onpack::kernels::detail

#include "onpack/engine/theory.hpp"

#include <algorithm>
#include <cmath>

#include "onpack/errors.hpp"

namespace onpack {

namespace {

std::uint64_t ceil_snapped(long double x) {
  if (!(x < 9.0e18L)) throw ParameterError("theory parameter overflows 64 bits");
  const long double r = std::round(x);
  if (std::fabs(x - r) <= 1e-12L * std::max(1.0L, std::fabs(x))) return static_cast<std::uint64_t>(r);
  return static_cast<std::uint64_t>(std::ceil(x));
}

}  // namespace

TheoryParams theory_params(Momentum mode, double epsilon, std::size_t L, double iota, double theta, std::size_t T,
                           std::size_t U, std::size_t W) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ParameterError("epsilon must lie in (0, 1]");
  if (T == 0) throw ParameterError("T must be positive");
  if (!(theta > 0.0 && theta <= static_cast<double>(T))) throw ParameterError("theta must lie in (0, T]");
  if (!(iota > 0.0 && iota <= 1.0)) throw ParameterError("iota must lie in (0, 1]");
  if (L == 0) throw ParameterError("L must be positive");

  const long double l2 = static_cast<long double>(L) * L;
  const long double i2 = static_cast<long double>(iota) * iota;
  const long double e2 = static_cast<long double>(epsilon) * epsilon;
  const long double t2 = static_cast<long double>(T) * T;
  const long double th2 = static_cast<long double>(theta) * theta;

  TheoryParams p;
  if (mode == Momentum::Unaccelerated) {
    p.alpha = static_cast<double>(i2 * epsilon / (24.0L * l2));
    p.K = ceil_snapped(288.0L * l2 / (e2 * i2));
    p.eta1 = ceil_snapped(2304.0L * l2 / (i2 * e2));
    p.eta2 = std::min<std::uint64_t>(ceil_snapped(20736.0L * l2 * t2 / (i2 * th2 * e2)), T);
    return p;
  }
  if (U == 0 || W == 0) throw ParameterError("U and W must be positive");
  const long double ulw = static_cast<long double>(U) * L * W;
  p.c = ceil_snapped(std::pow(ulw, 0.25L) / std::sqrt(static_cast<long double>(iota) * theta));
  p.alpha = static_cast<double>(0.25L / (static_cast<long double>(p.c) * p.c));
  p.K = 8 * p.c * ceil_snapped(1.0L / std::sqrt(static_cast<long double>(epsilon)));
  p.eta1 = ceil_snapped(45696.0L * l2 / (i2 * e2));
  p.eta2 = std::min<std::uint64_t>(ceil_snapped(221184.0L * l2 * t2 / (i2 * th2 * e2)), T);
  return p;
}

double theta_default(double epsilon, std::size_t T, double iota, std::size_t V) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ParameterError("epsilon must lie in (0, 1]");
  if (V == 0) throw ParameterError("V must be positive");
  return epsilon * iota * static_cast<double>(T) / (4.0 * static_cast<double>(V));
}

SolverConfig theory_config(Momentum mode, double epsilon, const InstanceSpec& instance, std::uint64_t seed) {
  SolverConfig cfg;
  cfg.epsilon = epsilon;
  cfg.momentum = mode;
  cfg.theta = theta_default(epsilon, instance.T, instance.iota, instance.V_or_default());
  const TheoryParams tp = theory_params(mode, epsilon, instance.L, instance.iota, cfg.theta, instance.T,
                                        instance.U_or_default(), instance.W_or_default());
  cfg.alpha = tp.alpha;
  cfg.K = tp.K;
  cfg.eta1 = tp.eta1;
  cfg.eta2 = tp.eta2;
  cfg.master_seed = seed;
  cfg.practical_override = false;
  return cfg;
}

}  // namespace onpack

#include "onpack/engine/config.hpp"

#include <cmath>
#include <string>
#include <string_view>

#include "onpack/engine/theory.hpp"
#include "onpack/errors.hpp"

namespace onpack {

const char* momentum_name(Momentum m) {
  return m == Momentum::Accelerated ? "accelerated" : "unaccelerated";
}

Momentum parse_momentum(const char* name) {
  const std::string_view s(name);
  if (s == "unaccelerated") return Momentum::Unaccelerated;
  if (s == "accelerated") return Momentum::Accelerated;
  throw ConfigError("unknown momentum schedule '" + std::string(s) + "'");
}

double SolverConfig::beta(std::size_t k) const {
  if (momentum == Momentum::Unaccelerated || k == 0) return 0.0;
  return (static_cast<double>(k) - 1.0) / (static_cast<double>(k) + 2.0);
}

void SolverConfig::validate_basic() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("step size alpha must be positive");
  if (!(theta > 0.0) || !std::isfinite(theta)) throw ParameterError("theta must be positive");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ParameterError("epsilon must lie in (0, 1]");
  if (K == 0) throw ParameterError("K must be at least 1");
  if (eta1 == 0) throw ParameterError("eta1 must be at least 1");
  if (eta2 == 0) throw ParameterError("eta2 must be at least 1");
}

void SolverConfig::validate(const InstanceSpec& instance) const {
  validate_basic();
  if (eta2 > instance.T) throw ParameterError("eta2 must not exceed T");
  if (theta > static_cast<double>(instance.T)) throw ParameterError("theta must not exceed T");
  if (practical_override) return;
  const TheoryParams tp = theory_params(momentum, epsilon, instance.L, instance.iota, theta, instance.T,
                                        instance.U_or_default(), instance.W_or_default());
  if (K < tp.K || eta1 < tp.eta1 || eta2 < tp.eta2) {
    throw ParameterError("K, eta1, eta2 below the theory values (K=" + std::to_string(tp.K) + ", eta1=" +
                         std::to_string(tp.eta1) + ", eta2=" + std::to_string(tp.eta2) +
                         "); set practical_override to run anyway");
  }
}

}  // namespace onpack

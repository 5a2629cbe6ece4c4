#pragma once

#include <cstddef>
#include <cstdint>

#include "onpack/model/instance.hpp"

namespace onpack {

enum class Momentum { Unaccelerated, Accelerated };

const char* momentum_name(Momentum m);
Momentum parse_momentum(const char* name);

struct SolverConfig {
  double epsilon = 0.1;
  double theta = 1.0;
  double alpha = 0.05;
  Momentum momentum = Momentum::Unaccelerated;
  std::size_t K = 10;
  std::size_t eta1 = 8;
  std::size_t eta2 = 1;
  std::uint64_t master_seed = 1;
  // Allows K, eta1, eta2 below the theoretical minimums.
  bool practical_override = true;

  // beta_k: 0 when unaccelerated; accelerated beta_0 = 0, beta_k = (k-1)/(k+2).
  double beta(std::size_t k) const;

  // Range checks against an instance (eta2 <= T, ...). When
  // practical_override is off, also requires K, eta1, eta2 to reach the
  // theory values for this instance.
  void validate(const InstanceSpec& instance) const;
  // Instance-free checks only.
  void validate_basic() const;
};

}  // namespace onpack

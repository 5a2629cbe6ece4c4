#pragma once

#include <cstddef>
#include <cstdint>

#include "onpack/engine/config.hpp"

namespace onpack {

struct TheoryParams {
  double alpha = 0.0;
  std::uint64_t K = 0;
  std::uint64_t eta1 = 0;
  std::uint64_t eta2 = 0;
  // ceil((U L W)^(1/4) / sqrt(iota theta)); accelerated schedule only.
  std::uint64_t c = 0;
};

// Step size, iteration count and sample sizes sufficient for an eps*T gap on
// the smoothed problem.
//   unaccelerated: alpha = iota^2 eps / (24 L^2), K = ceil(288 L^2 / (eps^2 iota^2)),
//                  eta1 = ceil(2304 L^2 / (iota^2 eps^2)),
//                  eta2 = min(ceil(20736 L^2 T^2 / (iota^2 theta^2 eps^2)), T)
//   accelerated:   c = ceil((U L W)^(1/4) / sqrt(iota theta)), alpha = 1 / (4 c^2),
//                  K = 8 c ceil(eps^(-1/2)), eta1 = ceil(45696 L^2 / (iota^2 eps^2)),
//                  eta2 = min(ceil(221184 L^2 T^2 / (iota^2 theta^2 eps^2)), T)
// Ceilings snap values within 1e-12 (relative) of an integer to it, so exact
// integers are not pushed up by representation error.
TheoryParams theory_params(Momentum mode, double epsilon, std::size_t L, double iota, double theta, std::size_t T,
                           std::size_t U = 2, std::size_t W = 1);

// eps iota T / (4 V), the smoothing level used for the unsmoothed problem.
double theta_default(double epsilon, std::size_t T, double iota, std::size_t V);

// SolverConfig with the theory values filled in; theta from theta_default
// with V from the instance.
SolverConfig theory_config(Momentum mode, double epsilon, const InstanceSpec& instance, std::uint64_t seed);

}  // namespace onpack

#include "onpack/engine/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "onpack/errors.hpp"
#include "onpack/model/rng.hpp"

namespace onpack {

bool IndexSample::contains(std::size_t t) const {
  if (t == 0 || t > T) return false;
  if (full) return true;
  return std::binary_search(indices.begin(), indices.end(), static_cast<std::uint32_t>(t));
}

IndexSample sample_index_set(std::uint64_t seed, std::size_t T, std::size_t eta2, std::size_t k) {
  if (eta2 == 0 || eta2 > T) throw ParameterError("eta2 must lie in [1, T]");
  IndexSample s;
  s.T = T;
  s.indices.reserve(eta2);
  if (eta2 == T) {
    s.full = true;
    s.indices.resize(T);
    std::iota(s.indices.begin(), s.indices.end(), 1u);
    return s;
  }
  KeyedStream stream(DrawKey{seed, Stream::IndexSample, {k, 0, 0}});
  std::unordered_set<std::uint32_t> chosen;
  chosen.reserve(eta2 * 2);
  for (std::size_t j = T - eta2 + 1; j <= T; ++j) {
    const auto r = static_cast<std::uint32_t>(1 + stream.next_below(j));
    const auto pick = chosen.count(r) ? static_cast<std::uint32_t>(j) : r;
    chosen.insert(pick);
    s.indices.push_back(pick);
  }
  std::sort(s.indices.begin(), s.indices.end());
  return s;
}

}  // namespace onpack

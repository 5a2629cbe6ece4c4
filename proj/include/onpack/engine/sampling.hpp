#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace onpack {

// Index set aleph^k: eta2 periods drawn uniformly without replacement from
// {1..T}, shared by every prefix within gradient iteration k.
struct IndexSample {
  std::size_t T = 0;
  bool full = false;                   // eta2 == T, every period present
  std::vector<std::uint32_t> indices;  // sorted, 1-based

  bool contains(std::size_t t) const;
  std::size_t size() const noexcept { return indices.size(); }
};

// Floyd's algorithm on the IndexSample stream keyed by (seed, k).
IndexSample sample_index_set(std::uint64_t seed, std::size_t T, std::size_t eta2, std::size_t k);

}  // namespace onpack

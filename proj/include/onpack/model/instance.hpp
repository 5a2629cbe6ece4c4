#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace onpack {

struct SparseEntry {
  std::uint32_t index = 0;
  double value = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

// Resource consumption vector a(S^t), nonzeros only, sorted by index.
using ConsumptionVector = std::vector<SparseEntry>;

// Reward and r.c.v. revealed at one prefix. An all-zero item is a no-show.
struct Item {
  double reward = 0.0;
  ConsumptionVector consumption;

  bool no_show() const noexcept { return reward == 0.0 && consumption.empty(); }
  double consumption_of(std::uint32_t i) const noexcept;

  friend bool operator==(const Item&, const Item&) = default;
};

struct InstanceSpec {
  std::size_t T = 0;
  std::size_t m = 0;
  std::vector<double> budgets;
  std::size_t L = 1;
  double iota = 1.0;
  // Structure constants; when absent, callers fall back to derived or
  // worst-case values (U <= T, V <= v_bound(), W <= L*T).
  std::optional<std::size_t> U;
  std::optional<std::size_t> V;
  std::optional<std::size_t> W;

  // nu = min_i b_i / T.
  double nu() const;
  // lambda = min(m, L*T / min_i b_i); m when some budget is zero.
  double lambda() const;
  // min(m, ceil(L / nu)); m when nu = 0.
  std::size_t v_bound() const;

  std::size_t U_or_default() const;
  std::size_t V_or_default() const;
  std::size_t W_or_default() const;

  // Throws InstanceError when the header itself is malformed.
  void validate() const;
  // Throws InstanceError when an item violates the packing assumptions:
  // Z in [0,1], a_i in {0} U [iota,1], at most L nonzeros, indices < m, sorted.
  void check_item(const Item& item) const;
};

// Sorts by index and drops explicit zeros.
ConsumptionVector make_consumption(std::vector<SparseEntry> entries);

}  // namespace onpack

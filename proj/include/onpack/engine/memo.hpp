#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <deque>
#include <unordered_map>
#include <vector>

#include "onpack/engine/config.hpp"
#include "onpack/engine/sampling.hpp"
#include "onpack/model/instance.hpp"
#include "onpack/model/prefix.hpp"

namespace onpack {

// One use of a sampled prefix S'^t in a gradient estimate at S: draw j took
// resource slot `slot` of a+(S) through period t in the index set, with
// a = a_i(S'^t) > 0. `node` names S'^t for the Y lookup (a memo id or a tree
// node id, depending on who built the record).
struct DrawUse {
  std::uint32_t slot = 0;
  std::uint32_t draw = 0;
  std::uint32_t t = 0;
  double a = 0.0;
  std::uint32_t node = 0;
};

// Everything the gradient estimate at (S, k) needs from its conditional
// draws. uses is sorted by (slot, draw, t).
struct DrawRecord {
  std::size_t eta1 = 0;
  std::vector<DrawUse> uses;
  std::vector<Trajectory> trajectories;  // kept only when requested
};

struct MemoCounters {
  std::uint64_t sim_calls = 0;      // trajectory completions
  std::uint64_t oracle_calls = 0;   // item readouts
  std::uint64_t hits = 0;           // R lookups answered from the table
  std::uint64_t misses = 0;         // R evaluations performed
  std::uint64_t r_invocations = 0;  // values written at k >= 1
  std::uint64_t draw_sets = 0;      // conditional draw sets generated

  MemoCounters operator-(const MemoCounters& o) const {
    return {sim_calls - o.sim_calls, oracle_calls - o.oracle_calls, hits - o.hits,
            misses - o.misses, r_invocations - o.r_invocations, draw_sets - o.draw_sets};
  }
};

// Write-once table of Upsilon(S, k) keyed by canonical prefix key, plus the
// per-iteration index sets and the draw sets awaiting use.
class MemoTable {
 public:
  explicit MemoTable(const SolverConfig& config);

  const SolverConfig& config() const noexcept { return config_; }

  std::uint32_t intern(std::string_view key, std::size_t length);
  std::optional<std::uint32_t> find(std::string_view key) const;
  std::size_t size() const noexcept { return entries_.size(); }

  std::string_view key(std::uint32_t id) const { return entries_.at(id).key; }
  std::size_t length(std::uint32_t id) const { return entries_.at(id).length; }

  const Item* item(std::uint32_t id) const;
  void set_item(std::uint32_t id, const Item& item);

  // Upsilon(S, k); k <= 0 is the all-zero start.
  bool has(std::uint32_t id, std::size_t k) const;
  double get(std::uint32_t id, std::size_t k) const;
  // Throws InvariantError on a second write of the same (S, k).
  void put(std::uint32_t id, std::size_t k, double value);
  // Number of prefixes with a stored value at k.
  std::size_t count_at(std::size_t k) const;

  DrawRecord* draws(std::uint32_t id, std::size_t k);
  DrawRecord& store_draws(std::uint32_t id, std::size_t k, DrawRecord record);
  void release_draws(std::uint32_t id, std::size_t k);
  std::size_t pending_draws() const noexcept { return draws_.size(); }

  const IndexSample& index_sample(std::size_t k, std::size_t T);

  MemoCounters& counters() noexcept { return counters_; }
  const MemoCounters& counters() const noexcept { return counters_; }

 private:
  struct Entry {
    std::string key;
    std::size_t length = 0;
    std::optional<Item> item;
    std::vector<double> values;  // values[k-1]; NaN when unset
  };

  static std::uint64_t draw_slot(std::uint32_t id, std::size_t k) {
    return (static_cast<std::uint64_t>(k) << 32) | id;
  }

  SolverConfig config_;
  std::deque<Entry> entries_;  // stable references: items are read while new prefixes are interned
  std::unordered_multimap<std::uint64_t, std::uint32_t> by_hash_;
  std::unordered_map<std::uint64_t, DrawRecord> draws_;
  std::unordered_map<std::size_t, IndexSample> samples_;
  MemoCounters counters_;
};

}  // namespace onpack

#include "onpack/engine/memo.hpp"

#include <cmath>
#include <limits>

#include "onpack/errors.hpp"

namespace onpack {

namespace {
constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
}

MemoTable::MemoTable(const SolverConfig& config) : config_(config) {}

std::uint32_t MemoTable::intern(std::string_view key, std::size_t length) {
  const std::uint64_t h = key_hash(key);
  auto [lo, hi] = by_hash_.equal_range(h);
  for (auto it = lo; it != hi; ++it) {
    if (entries_[it->second].key == key) return it->second;
  }
  if (entries_.size() >= std::numeric_limits<std::uint32_t>::max()) throw CapacityError("memo table is full");
  const auto id = static_cast<std::uint32_t>(entries_.size());
  entries_.push_back(Entry{std::string(key), length, std::nullopt, {}});
  by_hash_.emplace(h, id);
  return id;
}

std::optional<std::uint32_t> MemoTable::find(std::string_view key) const {
  auto [lo, hi] = by_hash_.equal_range(key_hash(key));
  for (auto it = lo; it != hi; ++it) {
    if (entries_[it->second].key == key) return it->second;
  }
  return std::nullopt;
}

const Item* MemoTable::item(std::uint32_t id) const {
  const auto& e = entries_.at(id);
  return e.item ? &*e.item : nullptr;
}

void MemoTable::set_item(std::uint32_t id, const Item& item) {
  auto& e = entries_.at(id);
  if (!e.item) e.item = item;
}

bool MemoTable::has(std::uint32_t id, std::size_t k) const {
  if (k == 0) return true;
  const auto& v = entries_.at(id).values;
  return k <= v.size() && !std::isnan(v[k - 1]);
}

double MemoTable::get(std::uint32_t id, std::size_t k) const {
  if (k == 0) return 0.0;
  const auto& v = entries_.at(id).values;
  if (k > v.size() || std::isnan(v[k - 1])) throw InvariantError("memo value read before it was written");
  return v[k - 1];
}

void MemoTable::put(std::uint32_t id, std::size_t k, double value) {
  if (k == 0) throw InvariantError("the k = 0 iterate is fixed at zero");
  if (!(value >= 0.0 && value <= 1.0)) throw InvariantError("memo value outside [0, 1]");
  auto& v = entries_.at(id).values;
  if (v.size() < k) v.resize(k, kUnset);
  if (!std::isnan(v[k - 1])) throw InvariantError("memo entry written twice");
  v[k - 1] = value;
  ++counters_.r_invocations;
}

std::size_t MemoTable::count_at(std::size_t k) const {
  std::size_t n = 0;
  for (const auto& e : entries_) {
    if (k >= 1 && k <= e.values.size() && !std::isnan(e.values[k - 1])) ++n;
  }
  return n;
}

DrawRecord* MemoTable::draws(std::uint32_t id, std::size_t k) {
  auto it = draws_.find(draw_slot(id, k));
  return it == draws_.end() ? nullptr : &it->second;
}

DrawRecord& MemoTable::store_draws(std::uint32_t id, std::size_t k, DrawRecord record) {
  auto [it, inserted] = draws_.insert_or_assign(draw_slot(id, k), std::move(record));
  (void)inserted;
  return it->second;
}

void MemoTable::release_draws(std::uint32_t id, std::size_t k) { draws_.erase(draw_slot(id, k)); }

const IndexSample& MemoTable::index_sample(std::size_t k, std::size_t T) {
  auto it = samples_.find(k);
  if (it == samples_.end()) {
    it = samples_.emplace(k, sample_index_set(config_.master_seed, T, config_.eta2, k)).first;
  }
  return it->second;
}

}  // namespace onpack

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace onpack {

// Canonical byte serialization of a run of observation values: each value is
// written as an 8-byte little-endian IEEE double, -0.0 is folded into +0.0.
// The key of a length-t prefix is therefore the leading t*D*8 bytes of the key
// of any trajectory extending it.
std::string canonical_key(std::span<const double> values);

// Stable 64-bit hash of a canonical key. Independent of platform and of the
// standard library implementation.
std::uint64_t key_hash(std::string_view key);

// Byte length of the key of a length-t prefix with observation dimension dim.
constexpr std::size_t key_bytes(std::size_t dim, std::size_t t) { return dim * t * sizeof(double); }

// Partial history S = (M_1, ..., M_t) of the information process, stored as a
// flat D x t matrix in time order. Identity is by canonical serialization.
class Prefix {
 public:
  Prefix() = default;
  explicit Prefix(std::size_t dim);
  Prefix(std::size_t dim, std::vector<double> values);

  static Prefix from_key(std::size_t dim, std::string_view key);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t length() const noexcept { return dim_ == 0 ? 0 : values_.size() / dim_; }
  bool empty() const noexcept { return values_.empty(); }

  // Observation of period t, 1-based.
  std::span<const double> observation(std::size_t t) const;
  std::span<const double> values() const noexcept { return values_; }

  Prefix truncated(std::size_t t) const;
  Prefix extended(std::span<const double> observation) const;
  void push_back(std::span<const double> observation);

  std::string key() const { return canonical_key(values_); }

  // True when this prefix is the length-length() truncation of `other`.
  bool is_prefix_of(const Prefix& other) const;

  friend bool operator==(const Prefix& a, const Prefix& b) {
    return a.dim_ == b.dim_ && a.values_ == b.values_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

// A complete realization S of the information process (length exactly T).
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(Prefix path, std::size_t horizon);

  const Prefix& path() const noexcept { return path_; }
  std::size_t horizon() const noexcept { return path_.length(); }
  std::size_t dim() const noexcept { return path_.dim(); }
  Prefix prefix(std::size_t t) const { return path_.truncated(t); }
  std::string key() const { return path_.key(); }

  friend bool operator==(const Trajectory& a, const Trajectory& b) { return a.path_ == b.path_; }

 private:
  Prefix path_;
};

}  // namespace onpack

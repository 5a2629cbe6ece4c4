#include "onpack/model/prefix.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "onpack/errors.hpp"

namespace onpack {

namespace {

double normalized(double v) {
  if (!std::isfinite(v)) throw ContractViolation("observation values must be finite");
  return v == 0.0 ? 0.0 : v;
}

std::uint64_t to_little_endian(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::little) {
    return bits;
  } else {
    return __builtin_bswap64(bits);
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::string canonical_key(std::span<const double> values) {
  std::string out(values.size() * sizeof(double), '\0');
  char* dst = out.data();
  for (double v : values) {
    const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v));
    std::memcpy(dst, &bits, sizeof bits);
    dst += sizeof bits;
  }
  return out;
}

std::uint64_t key_hash(std::string_view key) {
  std::uint64_t h = splitmix64(0x6F6E7061636BULL ^ key.size());
  std::size_t i = 0;
  for (; i + 8 <= key.size(); i += 8) {
    std::uint64_t word;
    std::memcpy(&word, key.data() + i, 8);
    h = splitmix64(h ^ to_little_endian(word));
  }
  if (i < key.size()) {
    std::uint64_t word = 0;
    for (std::size_t j = 0; i + j < key.size(); ++j) {
      word |= static_cast<std::uint64_t>(static_cast<unsigned char>(key[i + j])) << (8 * j);
    }
    h = splitmix64(h ^ word ^ 0xA5A5A5A5ULL);
  }
  return h;
}

Prefix::Prefix(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ContractViolation("observation dimension must be positive");
}

Prefix::Prefix(std::size_t dim, std::vector<double> values) : dim_(dim), values_(std::move(values)) {
  if (dim == 0) throw ContractViolation("observation dimension must be positive");
  if (values_.size() % dim != 0) throw ContractViolation("prefix values are not a whole number of observations");
  for (double& v : values_) v = normalized(v);
}

Prefix Prefix::from_key(std::size_t dim, std::string_view key) {
  if (dim == 0 || key.size() % (dim * sizeof(double)) != 0) {
    throw ContractViolation("key length does not match the observation dimension");
  }
  std::vector<double> values(key.size() / sizeof(double));
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, key.data() + i * sizeof(double), sizeof bits);
    values[i] = std::bit_cast<double>(to_little_endian(bits));
  }
  Prefix p(dim);
  p.values_ = std::move(values);
  return p;
}

std::span<const double> Prefix::observation(std::size_t t) const {
  if (t == 0 || t > length()) throw ContractViolation("observation index out of range");
  return std::span<const double>(values_).subspan((t - 1) * dim_, dim_);
}

Prefix Prefix::truncated(std::size_t t) const {
  if (t > length()) throw ContractViolation("cannot truncate a prefix beyond its length");
  Prefix p(dim_);
  p.values_.assign(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(t * dim_));
  return p;
}

Prefix Prefix::extended(std::span<const double> observation) const {
  Prefix p = *this;
  p.push_back(observation);
  return p;
}

void Prefix::push_back(std::span<const double> observation) {
  if (observation.size() != dim_) throw ContractViolation("observation has the wrong dimension");
  for (double v : observation) values_.push_back(normalized(v));
}

bool Prefix::is_prefix_of(const Prefix& other) const {
  if (dim_ != other.dim_ || values_.size() > other.values_.size()) return false;
  return std::equal(values_.begin(), values_.end(), other.values_.begin());
}

Trajectory::Trajectory(Prefix path, std::size_t horizon) : path_(std::move(path)) {
  if (path_.length() != horizon) throw ContractViolation("trajectory length must equal the horizon");
}

}  // namespace onpack

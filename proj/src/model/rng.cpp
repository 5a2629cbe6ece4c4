#include "onpack/model/rng.hpp"

namespace onpack {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
inline std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, ctr[0], hi0, lo0);
    mulhilo(kM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

KeyedStream::KeyedStream(const DrawKey& key) {
  // Two chained blocks compress (seed, stream, three counters) into a 64-bit
  // Philox key plus 64 bits of counter tag.
  const auto first = Philox4x32::block(
      {lo32(key.counters[0]), hi32(key.counters[0]), lo32(key.counters[1]), hi32(key.counters[1])},
      {lo32(key.seed), hi32(key.seed)});
  const auto second = Philox4x32::block(
      {lo32(key.counters[2]), hi32(key.counters[2]), static_cast<std::uint32_t>(key.stream), 0x6F6E7061u},
      {first[0] ^ first[2], first[1] ^ first[3]});
  key_ = {second[0], second[1]};
  tag_lo_ = second[2];
  tag_hi_ = second[3];
}

std::uint64_t KeyedStream::bits_at(std::uint64_t index) const {
  const std::uint64_t pair = index >> 1;
  const auto out = Philox4x32::block({lo32(pair), hi32(pair), tag_lo_, tag_hi_}, key_);
  if (index & 1) return (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

double KeyedStream::uniform_at(std::uint64_t index) const {
  return static_cast<double>(bits_at(index) >> 11) * 0x1.0p-53;
}

std::uint64_t KeyedStream::next_below(std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    const std::uint64_t r = next_bits();
    if (r < limit) return r % n;
  }
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace onpack

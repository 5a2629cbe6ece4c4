#pragma once

#include <array>
#include <cstdint>

namespace onpack {

// Philox4x32-10 block function (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key);
};

// Label separating the independent uses of randomness. Values are part of the
// on-disk reproducibility contract; do not renumber.
enum class Stream : std::uint32_t {
  Trajectory = 1,     // conditional draws: {gradient iteration, prefix hash, draw index}
  IndexSample = 2,    // index sets: {gradient iteration}
  Episode = 3,        // trajectory of an evaluation episode: {episode}
  Round = 4,          // Bernoulli rounding: {episode, period}
  SharedUniform = 5,  // threshold rounding uniform: {episode}
  Generator = 6,      // instance generators
  Test = 7,
};

struct DrawKey {
  std::uint64_t seed = 0;
  Stream stream = Stream::Test;
  std::array<std::uint64_t, 3> counters{};
};

// Random-access view of the uniform sequence selected by a DrawKey. Element i
// is a pure function of (key, i), so callers may address values by position
// (for instance by tree level) instead of by consumption order.
class KeyedStream {
 public:
  explicit KeyedStream(const DrawKey& key);

  std::uint64_t bits_at(std::uint64_t index) const;
  // Uniform on [0, 1) with 53 random bits.
  double uniform_at(std::uint64_t index) const;

  // Sequential interface over the same elements, starting at index 0.
  std::uint64_t next_bits() { return bits_at(cursor_++); }
  double next_uniform() { return uniform_at(cursor_++); }
  // Uniform integer in [0, n), n > 0, by rejection (unbiased).
  std::uint64_t next_below(std::uint64_t n);

 private:
  Philox4x32::Key key_{};
  std::uint32_t tag_hi_ = 0;
  std::uint32_t tag_lo_ = 0;
  std::uint64_t cursor_ = 0;
};

// Mix two 64-bit values into one (splitmix-style finalizer). Used to derive
// per-episode solver seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace onpack

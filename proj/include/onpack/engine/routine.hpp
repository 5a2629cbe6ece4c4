#pragma once

#include <cstddef>
#include <cstdint>

#include "onpack/engine/memo.hpp"
#include "onpack/model/prefix.hpp"
#include "onpack/model/process.hpp"

namespace onpack {

// Upsilon(S, k): coordinate S of the k-th iterate, computed lazily from the
// coordinates it depends on at k-1 and k-2. Upsilon(S, k) = 0 for k <= 0. Results are
// memoized in `memo`; the evaluation order uses an explicit stack, so deep
// recursions do not grow the call stack.
double recursive_R(const Simulator& sim, MemoTable& memo, const Prefix& prefix, std::int64_t k);

// Same as recursive_R for a prefix already interned in `memo`.
double routine_value(const Simulator& sim, MemoTable& memo, std::uint32_t id, std::size_t k);

// Fractional decision A_pen(S) = (1/K) sum_{k=1..K} Upsilon(S, k).
double decide_pen(const Simulator& sim, MemoTable& memo, const Prefix& prefix);

}  // namespace onpack

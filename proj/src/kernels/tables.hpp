#pragma once

#include "onpack/kernels/kernels.hpp"

namespace onpack::kernels::detail {

extern const KernelTable kScalarTable;
// nullptr when the translation unit was not built for this target.
const KernelTable* avx2_table();
const KernelTable* neon_table();

}  // namespace onpack::kernels::detail

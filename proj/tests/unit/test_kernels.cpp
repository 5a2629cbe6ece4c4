#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <vector>

#include "onpack/kernels/kernels.hpp"
#include "support/fixtures.hpp"

using namespace onpack;
using kernels::Isa;
using kernels::KernelTable;

namespace {

std::vector<const KernelTable*> vector_tables() {
  std::vector<const KernelTable*> out;
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (const KernelTable* t = kernels::table_for(isa)) out.push_back(t);
  }
  return out;
}

std::vector<double> sample(fixtures::TestRng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  // Hit the branch boundaries explicitly.
  if (n > 3) {
    v[0] = 0.0;
    v[1] = -0.0;
    v[2] = 1.0;
  }
  return v;
}

}  // namespace

TEST(Kernels, ScalarTableAlwaysAvailable) {
  const KernelTable* s = kernels::table_for(Isa::Scalar);
  ASSERT_NE(s, nullptr);
  EXPECT_EQ(s->isa, Isa::Scalar);
  EXPECT_NE(kernels::isa_name(kernels::active().isa), nullptr);
}

TEST(Kernels, ReferenceFormulas) {
  EXPECT_EQ(kernels::huber_ref(-1.0, 2.0), 0.0);
  EXPECT_EQ(kernels::huber_ref(1.0, 2.0), 0.25);
  EXPECT_EQ(kernels::huber_ref(3.0, 2.0), 2.0);
  EXPECT_EQ(kernels::huber_deriv_ref(1.0, 2.0), 0.5);
  EXPECT_EQ(kernels::huber_deriv_ref(5.0, 2.0), 1.0);
  EXPECT_EQ(kernels::momentum_ref(0.5, 0.0, 10.0, 0.0, 0.1), 1.0);
  EXPECT_EQ(kernels::momentum_ref(0.5, 0.0, -10.0, 0.0, 0.1), 0.0);
  EXPECT_EQ(kernels::extrapolate_ref(0.5, 1.0, 0.0), 1.5);
}

TEST(Kernels, ScalarTableMatchesReference) {
  const KernelTable& s = *kernels::table_for(Isa::Scalar);
  fixtures::TestRng rng(1);
  const auto x = sample(rng, 41, -3, 3);
  std::vector<double> out(x.size());
  s.huber(x.data(), out.data(), x.size(), 0.7);
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_EQ(out[k], kernels::huber_ref(x[k], 0.7));
  s.huber_deriv(x.data(), out.data(), x.size(), 0.7);
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_EQ(out[k], kernels::huber_deriv_ref(x[k], 0.7));
}

TEST(Kernels, ElementwiseBitwiseEqualAcrossIsa) {
  const KernelTable& s = *kernels::table_for(Isa::Scalar);
  const auto tables = vector_tables();
  if (tables.empty()) GTEST_SKIP() << "no vector ISA on this machine";
  fixtures::TestRng rng(2);
  for (std::size_t n = 0; n <= 67; ++n) {
    for (double theta : {1e-3, 0.5, 1.0, 7.0}) {
      const auto x = sample(rng, n, -2 * theta, 3 * theta);
      std::vector<double> ref(n), got(n);
      for (const KernelTable* t : tables) {
        s.huber(x.data(), ref.data(), n, theta);
        t->huber(x.data(), got.data(), n, theta);
        for (std::size_t k = 0; k < n; ++k) ASSERT_EQ(std::bit_cast<std::uint64_t>(ref[k]), std::bit_cast<std::uint64_t>(got[k]));
        s.huber_deriv(x.data(), ref.data(), n, theta);
        t->huber_deriv(x.data(), got.data(), n, theta);
        for (std::size_t k = 0; k < n; ++k) ASSERT_EQ(std::bit_cast<std::uint64_t>(ref[k]), std::bit_cast<std::uint64_t>(got[k]));
      }
    }
  }
}

TEST(Kernels, MomentumBitwiseEqualAcrossIsa) {
  const KernelTable& s = *kernels::table_for(Isa::Scalar);
  const auto tables = vector_tables();
  fixtures::TestRng rng(3);
  for (std::size_t n = 0; n <= 67; ++n) {
    const auto x = sample(rng, n, 0, 1);
    const auto prev = sample(rng, n, 0, 1);
    const auto g = sample(rng, n, -3, 3);
    for (double beta : {0.0, 0.25, 0.8}) {
      std::vector<double> ref(n), got(n);
      s.momentum_step(x.data(), prev.data(), g.data(), ref.data(), n, beta, 0.07);
      for (std::size_t k = 0; k < n; ++k) {
        ASSERT_EQ(ref[k], kernels::momentum_ref(x[k], prev[k], g[k], beta, 0.07));
        ASSERT_GE(ref[k], 0.0);
        ASSERT_LE(ref[k], 1.0);
      }
      for (const KernelTable* t : tables) {
        t->momentum_step(x.data(), prev.data(), g.data(), got.data(), n, beta, 0.07);
        for (std::size_t k = 0; k < n; ++k) ASSERT_EQ(std::bit_cast<std::uint64_t>(ref[k]), std::bit_cast<std::uint64_t>(got[k]));
      }
    }
  }
}

TEST(Kernels, ReductionsAgreeToRounding) {
  const KernelTable& s = *kernels::table_for(Isa::Scalar);
  const auto tables = vector_tables();
  fixtures::TestRng rng(4);
  for (std::size_t n = 0; n <= 300; n += 7) {
    const auto x = sample(rng, n, 0, 2);
    const auto shift = sample(rng, n, 0, 2);
    double exact_h = 0.0, exact_p = 0.0, mag = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      exact_h += kernels::huber_ref(x[k] - shift[k], 0.3);
      exact_p += std::max(x[k] - shift[k], 0.0);
      mag += std::fabs(x[k]) + std::fabs(shift[k]);
    }
    const double tol = 1e-14 * (1.0 + mag);
    EXPECT_NEAR(s.huber_sum_shifted(x.data(), shift.data(), n, 0.3), exact_h, tol);
    EXPECT_NEAR(s.hinge_sum_shifted(x.data(), shift.data(), n), exact_p, tol);
    for (const KernelTable* t : tables) {
      EXPECT_NEAR(t->huber_sum_shifted(x.data(), shift.data(), n, 0.3), exact_h, tol);
      EXPECT_NEAR(t->hinge_sum_shifted(x.data(), shift.data(), n), exact_p, tol);
    }
  }
}

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "onpack/errors.hpp"
#include "onpack/model/structure.hpp"
#include "onpack/oracle.hpp"
#include "onpack/penalty.hpp"
#include "support/fixtures.hpp"

using namespace onpack;

TEST(Simplex, SmallLpWithDualCertificate) {
  const std::vector<double> c{1, 1};
  const std::vector<double> A{1, 2, 3, 1};
  const std::vector<double> b{4, 6};
  const LpResult r = simplex_max(c, A, b);
  EXPECT_NEAR(r.value, 2.8, 1e-12);
  EXPECT_NEAR(r.x[0], 1.6, 1e-12);
  EXPECT_NEAR(r.x[1], 1.2, 1e-12);
  ASSERT_EQ(r.duals.size(), 2u);
  EXPECT_NEAR(r.duals[0], 0.4, 1e-12);
  EXPECT_NEAR(r.duals[1], 0.2, 1e-12);
}

TEST(Simplex, RandomLpsSatisfyStrongDuality) {
  fixtures::TestRng rng(31);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 2 + rng.below(8), m = 1 + rng.below(8);
    std::vector<double> c(n), A(m * n), b(m);
    for (auto& v : c) v = rng.uniform(-0.5, 1);
    for (auto& v : A) v = rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.1, 1);
    for (auto& v : b) v = rng.uniform(0, 2);
    // Box rows keep the problem bounded.
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> row(n, 0.0);
      row[j] = 1.0;
      A.insert(A.end(), row.begin(), row.end());
      b.push_back(1.0);
    }
    const std::size_t rows = b.size();
    const LpResult r = simplex_max(c, A, b);
    double dual = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      EXPECT_GE(r.duals[i], -1e-12);
      dual += b[i] * r.duals[i];
      double lhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) lhs += A[i * n + j] * r.x[j];
      EXPECT_LE(lhs, b[i] + 1e-9);
    }
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_GE(r.x[j], -1e-12);
      double col = 0.0;
      for (std::size_t i = 0; i < rows; ++i) col += A[i * n + j] * r.duals[i];
      EXPECT_GE(col, c[j] - 1e-9);
    }
    EXPECT_NEAR(r.value, dual, 1e-9);
  }
}

TEST(Simplex, UnboundedThrows) {
  const std::vector<double> c{1, 0};
  const std::vector<double> A{0, 1};
  const std::vector<double> b{1};
  EXPECT_THROW(simplex_max(c, A, b), ConvergenceError);
}

TEST(PackDp, TwoPeriodExample) {
  auto tree = fixtures::two_period();
  const PackSolution s = solve_pack_dp(*tree);
  EXPECT_NEAR(s.value, 0.6, 1e-12);
  EXPECT_FALSE(s.approximate);
  EXPECT_EQ(s.policy[0], 0.0);
  for (std::size_t leaf : tree->leaves()) EXPECT_EQ(s.policy[leaf], 1.0);
  EXPECT_NEAR(eval_policy_exact(*tree, s.policy), s.value, 1e-12);
}

TEST(PackDp, DegenerateInstances) {
  EXPECT_EQ(solve_pack_dp(*fixtures::one_node_tree(0.0, 1.0, 1.0)).value, 0.0);
  EXPECT_EQ(solve_pack_dp(*fixtures::one_node_tree(0.7, 1.0, 0.0)).value, 0.0);
}

TEST(PackDp, MatchesBruteForce) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const ScenarioTree tree = fixtures::random_dp_tree(seed, 2 + seed % 3, 1 + seed % 3, 12);
    const PackSolution s = solve_pack_dp(tree);
    EXPECT_FALSE(s.approximate);
    EXPECT_NEAR(s.value, fixtures::brute_force_pack(tree), 1e-12) << "seed " << seed;
    EXPECT_NEAR(eval_policy_exact(tree, s.policy), s.value, 1e-12);
  }
}

TEST(PackDp, OffGridIsApproximate) {
  auto tree = fixtures::one_node_tree(0.5, 0.123456789, 1.0, 0.1);
  EXPECT_TRUE(solve_pack_dp(*tree).approximate);
}

TEST(LpExplicit, TwoPeriodExample) {
  const LpSolution s = solve_lp_explicit(*fixtures::two_period());
  EXPECT_NEAR(s.value, 0.6, 1e-12);
  EXPECT_NEAR(s.x[0], 0.0, 1e-12);
  EXPECT_NEAR(solve_lp_explicit(*fixtures::one_node_tree(0.0, 1.0, 1.0)).value, 0.0, 1e-15);
}

TEST(LpExplicit, RelaxationChain) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const ScenarioTree tree = fixtures::random_dp_tree(seed, 4, 2, 40);
    const double pack = solve_pack_dp(tree).value;
    const LpSolution lp = solve_lp_explicit(tree);
    const double pen = solve_pen_unsmoothed(tree).value;
    const PenSolution pen_theta = solve_pen_explicit(tree, SmoothingParam(0.2));
    EXPECT_LE(pack, lp.value + 1e-9);
    EXPECT_LE(lp.value, pen + 1e-9);
    EXPECT_LE(pen, pen_theta.value + 1e-7);
    EXPECT_NEAR(eval_policy_exact(tree, lp.x), lp.value, 1e-9);
    EXPECT_NEAR(aggregate_violation(tree, lp.x), 0.0, 1e-9);
  }
}

TEST(PenExplicit, SmallThetaApproachesLp) {
  auto tree = fixtures::two_period();
  const StructureConstants sc = derive_structure_constants(*tree);
  const double lp = solve_lp_explicit(*tree).value;
  for (double theta : {0.5, 0.1, 0.01, 0.001}) {
    const PenSolution s = solve_pen_explicit(*tree, SmoothingParam(theta), 1e-10);
    EXPECT_GE(s.value, lp - static_cast<double>(sc.V) * theta / tree->instance().iota - 1e-9);
    EXPECT_LE(s.stationarity, 1e-10);
    EXPECT_NEAR(eval_f_theta(*tree, s.x, SmoothingParam(theta)), s.value, 1e-12);
  }
}

TEST(PenExplicit, OptimumDominatesRandomPoints) {
  const ScenarioTree tree = fixtures::random_dp_tree(4, 4, 2, 40);
  const SmoothingParam theta(0.3);
  const PenSolution s = solve_pen_explicit(tree, theta);
  for (std::uint64_t r = 0; r < 50; ++r) {
    EXPECT_LE(eval_f_theta(tree, fixtures::random_solution(tree, r), theta), s.value + 1e-9);
  }
}

TEST(EvalExact, TwoPeriodSums) {
  auto tree = fixtures::two_period();
  EXPECT_NEAR(eval_policy_exact(*tree, std::vector<double>(tree->size(), 1.0)), 1.1, 1e-12);
  EXPECT_EQ(eval_policy_exact(*tree, std::vector<double>(tree->size(), 0.0)), 0.0);
}

TEST(MonteCarlo, DeterministicPolicyOnDeterministicProcess) {
  auto tree = fixtures::one_node_tree(0.5, 1.0, 1.0);
  auto sim = tree_as_simulator(tree);
  const EvalReport r = eval_rule_mc(*sim, [](std::uint64_t, const Prefix&) { return 0.8; }, 100, 1);
  EXPECT_EQ(r.std_error, 0.0);
  EXPECT_DOUBLE_EQ(r.mean_reward, 0.4);
}

TEST(MonteCarlo, ReplayedDpPolicyMatchesOptimum) {
  auto tree = fixtures::two_period();
  auto sim = tree_as_simulator(tree);
  const PackSolution s = solve_pack_dp(*tree);
  const DecisionRule rule = [&](std::uint64_t, const Prefix& p) { return s.policy[*tree->find(p)]; };
  const EvalReport r = eval_rule_mc(*sim, rule, 20000, 3);
  EXPECT_NEAR(r.mean_reward, 0.6, 3 * r.std_error + 1e-12);
  EXPECT_EQ(r.violation_count, 0u);
}

TEST(MonteCarlo, DeterministicAcrossRunsAndThreads) {
  auto tree = std::make_shared<ScenarioTree>(fixtures::random_dp_tree(6, 4, 2, 40));
  SolverConfig cfg;
  cfg.K = 3;
  cfg.eta1 = 2;
  cfg.eta2 = 2;
  PolicyFactory f(PolicyKind::Lp, tree_as_simulator(tree), cfg, 3);
  EvalOptions one;
  one.threads = 1;
  one.keep_rewards = true;
  EvalOptions many = one;
  many.threads = 4;
  const EvalReport a = eval_policy_mc(f, 300, 9, one);
  PolicyFactory g(PolicyKind::Lp, tree_as_simulator(tree), cfg, 3);
  const EvalReport b = eval_policy_mc(g, 300, 9, many);
  EXPECT_EQ(a.rewards, b.rewards);
  EXPECT_EQ(a.mean_reward, b.mean_reward);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_EQ(a.counters.sim_calls, b.counters.sim_calls);
}

TEST(MonteCarlo, StdErrorScalesWithEpisodes) {
  auto tree = fixtures::two_period();
  auto sim = tree_as_simulator(tree);
  const DecisionRule rule = [](std::uint64_t, const Prefix& p) { return p.length() == 2 ? 1.0 : 0.0; };
  double ratio = 0.0;
  const int reps = 10;
  for (int s = 0; s < reps; ++s) {
    const double a = eval_rule_mc(*sim, rule, 2000, 100 + s).std_error;
    const double b = eval_rule_mc(*sim, rule, 4000, 200 + s).std_error;
    ratio += b / a;
  }
  EXPECT_NEAR(ratio / reps, 1.0 / std::sqrt(2.0), 0.03);
}

TEST(MonteCarlo, AuditFailureCarriesTrace) {
  auto tree = fixtures::two_period();
  auto sim = tree_as_simulator(tree);
  const DecisionRule greedy = [](std::uint64_t, const Prefix&) { return 1.0; };
  try {
    eval_rule_mc(*sim, greedy, 10, 1);
    FAIL() << "expected an audit failure";
  } catch (const AuditFailure& e) {
    EXPECT_NE(e.trace().find("\"remaining\""), std::string::npos);
  }
  EvalOptions keep;
  keep.abort_on_violation = false;
  const EvalReport r = eval_rule_mc(*sim, greedy, 10, 1, keep);
  EXPECT_EQ(r.violation_count, 10u);
  EXPECT_NEAR(r.max_violation[0], 1.0, 1e-12);
}

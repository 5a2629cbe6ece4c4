#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "onpack/errors.hpp"
#include "onpack/model/encodings.hpp"
#include "onpack/model/nrm.hpp"
#include "onpack/model/rng.hpp"
#include "onpack/model/scenario_tree.hpp"
#include "onpack/model/structure.hpp"
#include "support/fixtures.hpp"

using namespace onpack;

namespace {

// Two-branch tree, T=2: root-level node with two children of probability p, 1-p.
std::shared_ptr<ScenarioTree> fork_tree(double p) {
  InstanceSpec spec;
  spec.T = 2;
  spec.m = 1;
  spec.budgets = {1.0};
  std::vector<NodeSpec> nodes = {
      {0, -1, 1.0, Item{}, std::nullopt},
      {1, 0, p, Item{1.0, make_consumption({{0, 1.0}})}, std::nullopt},
      {2, 0, 1.0 - p, Item{}, std::nullopt},
  };
  return std::make_shared<ScenarioTree>(ScenarioTree::build(spec, std::move(nodes)));
}

DrawKey key(std::uint64_t j) { return DrawKey{99, Stream::Test, {j, 0, 0}}; }

}  // namespace

TEST(Philox, KnownAnswerZero) {
  const auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
  const auto out = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out, (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
  const auto out = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out, (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(KeyedStream, RandomAccessMatchesSequential) {
  KeyedStream a(key(3));
  const KeyedStream b(key(3));
  for (std::uint64_t i = 0; i < 64; ++i) {
    const double u = a.next_uniform();
    EXPECT_EQ(u, b.uniform_at(i));
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_NE(KeyedStream(key(3)).uniform_at(0), KeyedStream(key(4)).uniform_at(0));
  const DrawKey other{99, Stream::Round, {3, 0, 0}};
  EXPECT_NE(KeyedStream(key(3)).uniform_at(0), KeyedStream(other).uniform_at(0));
}

TEST(Prefix, CanonicalKeyFoldsNegativeZero) {
  const Prefix a(1, {0.0, 1.0});
  const Prefix b(1, {-0.0, 1.0});
  EXPECT_EQ(a.key(), b.key());
  EXPECT_EQ(a, Prefix::from_key(1, b.key()));
  EXPECT_EQ(a.key().size(), key_bytes(1, 2));
}

TEST(Prefix, TruncationIsKeyPrefix) {
  const Prefix p(2, {1, 2, 3, 4, 5, 6});
  ASSERT_EQ(p.length(), 3u);
  const Prefix q = p.truncated(2);
  EXPECT_EQ(p.key().substr(0, q.key().size()), q.key());
  EXPECT_TRUE(q.is_prefix_of(p));
  EXPECT_FALSE(p.is_prefix_of(q));
  EXPECT_EQ(key_hash(q.key()), key_hash(Prefix(2, {1, 2, 3, 4}).key()));
}

TEST(Simulator, DeterministicProcessReturnsUniqueTrajectory) {
  auto tree = fixtures::one_node_tree(0.5, 1.0, 1.0);
  auto sim = tree_as_simulator(tree);
  const Prefix p = tree->prefix_of(0);
  const Trajectory tr = simulate_completion(*sim, p, key(1));
  EXPECT_EQ(tr.path(), p);
}

TEST(Simulator, FullLengthPrefixUnchanged) {
  auto sim = tree_as_simulator(fixtures::two_period());
  const ScenarioTree& tree = sim->tree();
  for (std::size_t leaf : tree.leaves()) {
    const Prefix p = tree.prefix_of(leaf);
    EXPECT_EQ(simulate_completion(*sim, p, key(leaf)).path(), p);
  }
}

TEST(Simulator, CompletionExtendsPrefixAndIsPure) {
  auto tree = std::make_shared<ScenarioTree>(fixtures::random_dp_tree(5, 4, 2, 40));
  auto sim = tree_as_simulator(tree);
  for (std::size_t id = 0; id < tree->size(); ++id) {
    if (tree->node(id).mu == 0.0) continue;
    const Prefix p = tree->prefix_of(id);
    const Trajectory a = simulate_completion(*sim, p, key(id));
    EXPECT_TRUE(p.is_prefix_of(a.path()));
    EXPECT_EQ(a.horizon(), tree->instance().T);
    EXPECT_EQ(a, simulate_completion(*sim, p, key(id)));
  }
}

TEST(Simulator, BranchFrequency) {
  auto sim = tree_as_simulator(fork_tree(0.5));
  const Prefix root = sim->tree().prefix_of(0);
  std::size_t up = 0;
  const std::size_t n = 10000;
  for (std::size_t j = 0; j < n; ++j) {
    const Trajectory tr = simulate_completion(*sim, root, key(j));
    up += sim->path_ids(tr)[1] == 1;
  }
  EXPECT_NEAR(static_cast<double>(up) / n, 0.5, 0.02);
}

TEST(Simulator, TwoPeriodFrequenciesMatchMu) {
  auto sim = tree_as_simulator(fixtures::two_period());
  const ScenarioTree& tree = sim->tree();
  std::map<std::size_t, std::size_t> hits;
  const std::size_t n = 10000;
  for (std::size_t j = 0; j < n; ++j) {
    const DrawKey k{7, Stream::Episode, {j, 0, 0}};
    const Trajectory tr = sim->complete(Prefix(tree.dim()), k);
    ++hits[sim->path_ids(tr).back()];
  }
  for (std::size_t leaf : tree.leaves()) {
    const double mu = tree.node(leaf).mu;
    const double sigma = std::sqrt(mu * (1 - mu) / n);
    EXPECT_NEAR(static_cast<double>(hits[leaf]) / n, mu, 3 * sigma);
  }
}

TEST(Simulator, ZeroProbabilityBranchNeverSampled) {
  auto sim = tree_as_simulator(fork_tree(1.0));
  const Prefix root = sim->tree().prefix_of(0);
  for (std::size_t j = 0; j < 100000; ++j) {
    ASSERT_EQ(sim->path_ids(simulate_completion(*sim, root, key(j)))[1], 1u);
  }
  EXPECT_THROW(simulate_completion(*sim, sim->tree().prefix_of(2), key(0)), SupportError);
}

TEST(Simulator, RejectsPrefixOutsideSupport) {
  auto sim = tree_as_simulator(fixtures::two_period());
  EXPECT_THROW(simulate_completion(*sim, Prefix(1, {42.0}), key(0)), SupportError);
  EXPECT_THROW(simulate_completion(*sim, Prefix(1), key(0)), ContractViolation);
}

TEST(ScenarioTree, MassSumsToHorizon) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ScenarioTree tree = fixtures::random_dp_tree(seed, 5, 3, 80);
    EXPECT_NEAR(tree.total_mass(), 5.0, 1e-9);
    double roots = 0.0;
    for (std::size_t r : tree.roots()) roots += tree.node(r).mu;
    EXPECT_NEAR(roots, 1.0, 1e-12);
  }
}

TEST(ScenarioTree, RejectsProbabilitiesNotSummingToOne) {
  InstanceSpec spec;
  spec.T = 1;
  spec.m = 1;
  spec.budgets = {1.0};
  std::vector<NodeSpec> nodes = {{0, -1, 0.4, Item{}, std::nullopt}, {1, -1, 0.4, Item{}, std::nullopt}};
  EXPECT_THROW(ScenarioTree::build(spec, nodes), InstanceError);
}

TEST(Instance, CheckItemEnforcesAssumptions) {
  InstanceSpec spec;
  spec.T = 1;
  spec.m = 2;
  spec.budgets = {1, 1};
  spec.L = 1;
  spec.iota = 0.5;
  EXPECT_NO_THROW(spec.check_item({0.3, make_consumption({{0, 0.5}})}));
  EXPECT_THROW(spec.check_item({0.3, make_consumption({{0, 0.4}})}), InstanceError);
  EXPECT_THROW(spec.check_item({1.5, {}}), InstanceError);
  EXPECT_THROW(spec.check_item({0.3, make_consumption({{0, 1.0}, {1, 1.0}})}), InstanceError);
  EXPECT_THROW(spec.check_item({0.3, make_consumption({{2, 1.0}})}), InstanceError);
}

TEST(Structure, TwoPeriodConstants) {
  const StructureConstants s = derive_structure_constants(*fixtures::two_period());
  EXPECT_EQ(s.U, 2u);
  EXPECT_EQ(s.V, 1u);
  EXPECT_EQ(s.W, 2u);
  EXPECT_EQ(s.L, 1u);
  EXPECT_DOUBLE_EQ(s.nu, 0.5);
  EXPECT_EQ(s.V_bound, 1u);
}

TEST(Structure, EmptyConsumptionClamps) {
  InstanceSpec spec;
  spec.T = 2;
  spec.m = 2;
  spec.budgets = {1.0, 1.0};
  std::vector<NodeSpec> nodes = {{0, -1, 1.0, Item{0.5, {}}, std::nullopt}, {1, 0, 1.0, Item{0.2, {}}, std::nullopt}};
  const StructureConstants s = derive_structure_constants(ScenarioTree::build(spec, nodes));
  EXPECT_EQ(s.U_raw, 0u);
  EXPECT_EQ(s.U, 2u);
  EXPECT_EQ(s.V_raw, 0u);
  EXPECT_EQ(s.V, 1u);
  EXPECT_EQ(s.W, 0u);
}

TEST(Encodings, IsSingleEdge) {
  IsProcess p;
  p.n = 2;
  p.delta = 1;
  p.side = {0, 1};
  p.scenarios = {{1.0, IsGraph{{1.0, 1.0}, {{0, 1}}}}};
  const EncodedInstance e = encode_is(p);
  EXPECT_EQ(e.tree->instance().m, 1u);
  EXPECT_EQ(e.tree->instance().T, 2u);
  ASSERT_EQ(e.tree->size(), 2u);
  EXPECT_EQ(e.tree->node(0).item.consumption_of(0), 1.0);
  EXPECT_EQ(e.tree->node(1).item.consumption_of(0), 1.0);
  EXPECT_EQ(derive_structure_constants(*e.tree).U, 2u);
  EXPECT_EQ(is_partite_of(e.tree->prefix_of(0)), 0);
  EXPECT_EQ(is_partite_of(e.tree->prefix_of(1)), 1);
}

TEST(Encodings, IsEdgelessAndResourceCount) {
  IsProcess p;
  p.n = 4;
  p.delta = 2;
  p.side = {0, 1, 0, 1};
  p.scenarios = {{1.0, IsGraph{{0.1, 0.2, 0.3, 0.4}, {}}}};
  const EncodedInstance e = encode_is(p);
  EXPECT_EQ(e.tree->instance().m, 4u);
  for (const TreeNode& n : e.tree->nodes()) EXPECT_TRUE(n.item.consumption.empty());
}

TEST(Encodings, IsRejectsDegreeViolation) {
  IsProcess p;
  p.n = 3;
  p.delta = 1;
  p.side = {0, 1, 1};
  p.scenarios = {{1.0, IsGraph{{1, 1, 1}, {{0, 1}, {0, 2}}}}};
  EXPECT_THROW(encode_is(p), InstanceError);
}

TEST(Encodings, EdgeResourcesUsedZeroOrTwice) {
  const EncodedInstance is = encode_is(random_is_process(3, 6, 2, 4));
  MwmProcess mp = random_mwm_process(4, 5, 2, 4);
  const EncodedInstance mwm = encode_mwm(mp);
  for (const auto* tree : {is.tree.get(), mwm.tree.get()}) {
    const std::size_t m = tree->instance().m;
    for (std::size_t leaf : tree->leaves()) {
      std::vector<double> used(m, 0.0);
      for (std::size_t id : tree->path_to(leaf))
        for (const auto& a : tree->node(id).item.consumption) used[a.index] += a.value;
      for (std::size_t i = 0; i < m; ++i) {
        if (tree == is.tree.get()) EXPECT_TRUE(used[i] == 0.0 || used[i] == 2.0) << used[i];
        else EXPECT_LE(used[i], 2.0);
      }
    }
  }
}

TEST(Encodings, MwmSingleEdge) {
  MwmProcess p;
  p.n = 2;
  p.delta = 1;
  p.scenarios = {{1.0, {WeightedEdge{0, 1, 1.0}}}};
  const EncodedInstance e = encode_mwm(p);
  const Item& it = e.tree->node(0).item;
  EXPECT_EQ(it.reward, 1.0);
  EXPECT_EQ(it.consumption_of(0), 1.0);
  EXPECT_EQ(it.consumption_of(1), 1.0);
}

TEST(Encodings, MwmUnrealizedPeriodIsNoShow) {
  MwmProcess p;
  p.n = 4;
  p.delta = 2;
  p.scenarios = {{1.0, {WeightedEdge{0, 1, 0.5}}}};
  const EncodedInstance e = encode_mwm(p);
  ASSERT_EQ(e.tree->instance().T, 4u);
  for (std::size_t id = 1; id < e.tree->size(); ++id) EXPECT_TRUE(e.tree->node(id).item.no_show());
}

TEST(Encodings, MwmRejectsBadEndpoint) {
  MwmProcess p;
  p.n = 2;
  p.delta = 1;
  p.scenarios = {{1.0, {WeightedEdge{0, 5, 0.5}}}};
  EXPECT_THROW(encode_mwm(p), InstanceError);
}

TEST(Encodings, MmoBlockLookup) {
  MmoProcess p;
  p.n_offline = 2;
  p.n_online = 1;
  p.delta = 2;
  p.scenarios = {{1.0, {{1, 0}}}};
  const EncodedInstance e = encode_mmo(p);
  const auto block = e.sim->block(e.tree->prefix_of(0));
  ASSERT_TRUE(block.has_value());
  EXPECT_EQ(block->t1, 1u);
  EXPECT_EQ(block->t2, 2u);
  EXPECT_EQ(block->offline, (std::vector<std::uint32_t>{0, 1}));
  ASSERT_EQ(block->prefixes.size(), 2u);
  EXPECT_EQ(block->prefixes[1], e.tree->prefix_of(1));
  EXPECT_EQ(e.sim->block(e.tree->prefix_of(1))->t1, 1u);
}

TEST(Nrm, GenerationIsDeterministic) {
  NrmParams p;
  p.seed = 17;
  p.T = 3;
  const NrmInstance a = generate_nrm(p, NrmMode::Explicit);
  const NrmInstance b = generate_nrm(p, NrmMode::Explicit);
  ASSERT_EQ(a.tree->size(), b.tree->size());
  for (std::size_t id = 0; id < a.tree->size(); ++id) {
    EXPECT_EQ(a.tree->node(id).item, b.tree->node(id).item);
    EXPECT_EQ(a.tree->node(id).mu, b.tree->node(id).mu);
  }
}

TEST(Nrm, BudgetRatioSetsNu) {
  NrmParams p;
  p.T = 6;
  p.m = 3;
  p.budget_ratio = 0.25;
  const NrmInstance inst = generate_nrm(p, NrmMode::Generative);
  for (double b : inst.process->instance().budgets) EXPECT_DOUBLE_EQ(b, 1.5);
  EXPECT_DOUBLE_EQ(inst.process->instance().nu(), 0.25);
}

TEST(Nrm, SampledItemsSatisfyAssumptions) {
  NrmParams p;
  p.seed = 3;
  p.T = 50;
  p.m = 4;
  p.L = 2;
  p.iota = 0.4;
  p.products = 5;
  const NrmInstance inst = generate_nrm(p, NrmMode::Generative);
  const InstanceSpec& spec = inst.sim->instance();
  std::size_t periods = 0;
  for (std::uint64_t e = 0; periods < 10000; ++e) {
    const DrawKey k{5, Stream::Episode, {e, 0, 0}};
    const auto items = inst.sim->readout(inst.sim->complete(Prefix(inst.sim->dim()), k));
    for (const Item& it : items) {
      ASSERT_NO_THROW(spec.check_item(it));
      ++periods;
    }
  }
}

TEST(Nrm, ExplicitModeRespectsNodeCap) {
  NrmParams p;
  p.T = 12;
  EXPECT_THROW(generate_nrm(p, NrmMode::Explicit, 1000), CapacityError);
}

#include "onpack/penalty.hpp"

#include <algorithm>
#include <cmath>

#include "onpack/errors.hpp"
#include "onpack/kernels/kernels.hpp"

namespace onpack {

namespace {

void check_size(const ScenarioTree& tree, std::span<const double> x) {
  if (x.size() != tree.size()) throw ContractViolation("solution vector does not cover every prefix");
}

// Partial sums sum_{r<=t} a_i(S^r) x(S^r) for every node, row-major [node][i].
std::vector<double> node_resource_sums(const ScenarioTree& tree, std::span<const double> x) {
  const std::size_t m = tree.instance().m;
  std::vector<double> sums(tree.size() * m, 0.0);
  for (std::size_t id = 0; id < tree.size(); ++id) {
    const TreeNode& n = tree.node(id);
    double* row = sums.data() + id * m;
    if (n.parent >= 0) {
      const double* up = sums.data() + static_cast<std::size_t>(n.parent) * m;
      std::copy(up, up + m, row);
    }
    for (const auto& e : n.item.consumption) row[e.index] += e.value * x[id];
  }
  return sums;
}

}  // namespace

SmoothingParam::SmoothingParam(double theta) : theta_(theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw ParameterError("smoothing parameter theta must be positive");
}

double huber(double x, SmoothingParam theta) { return kernels::huber_ref(x, theta.value()); }

double huber_deriv(double x, SmoothingParam theta) { return kernels::huber_deriv_ref(x, theta.value()); }

SolutionVector::SolutionVector(const ScenarioTree& tree, double fill) : values_(tree.size(), fill) {
  if (!(fill >= 0.0 && fill <= 1.0)) throw ContractViolation("solution values must lie in [0, 1]");
}

SolutionVector::SolutionVector(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw ContractViolation("solution values must lie in [0, 1]");
  }
}

double SolutionVector::at(std::size_t id) const {
  if (id >= values_.size()) throw ContractViolation("missing prefix value");
  return values_[id];
}

void SolutionVector::set(std::size_t id, double value) {
  if (id >= values_.size()) throw ContractViolation("missing prefix value");
  if (!(value >= 0.0 && value <= 1.0)) throw ContractViolation("solution values must lie in [0, 1]");
  values_[id] = value;
}

std::vector<double> leaf_resource_sums(const ScenarioTree& tree, std::span<const double> x) {
  check_size(tree, x);
  const std::size_t m = tree.instance().m;
  const auto sums = node_resource_sums(tree, x);
  std::vector<double> out;
  out.reserve(tree.leaves().size() * m);
  for (std::size_t leaf : tree.leaves()) out.insert(out.end(), sums.begin() + leaf * m, sums.begin() + (leaf + 1) * m);
  return out;
}

double expected_reward(const ScenarioTree& tree, std::span<const double> x) {
  check_size(tree, x);
  long double sum = 0.0L;
  for (std::size_t id = 0; id < tree.size(); ++id) {
    const TreeNode& n = tree.node(id);
    sum += static_cast<long double>(n.mu) * n.item.reward * x[id];
  }
  return static_cast<double>(sum);
}

double eval_f_theta(const ScenarioTree& tree, std::span<const double> x, SmoothingParam theta) {
  const std::size_t m = tree.instance().m;
  const auto sums = leaf_resource_sums(tree, x);
  const auto& k = kernels::active();
  const double* b = tree.instance().budgets.data();
  long double penalty = 0.0L;
  for (std::size_t l = 0; l < tree.leaves().size(); ++l) {
    const double mu = tree.node(tree.leaves()[l]).mu;
    penalty += static_cast<long double>(mu) * k.huber_sum_shifted(sums.data() + l * m, b, m, theta.value());
  }
  return expected_reward(tree, x) - static_cast<double>(2.0L / tree.instance().iota * penalty);
}

double aggregate_violation(const ScenarioTree& tree, std::span<const double> x) {
  const std::size_t m = tree.instance().m;
  const auto sums = leaf_resource_sums(tree, x);
  const auto& k = kernels::active();
  const double* b = tree.instance().budgets.data();
  long double total = 0.0L;
  for (std::size_t l = 0; l < tree.leaves().size(); ++l) {
    const double mu = tree.node(tree.leaves()[l]).mu;
    total += static_cast<long double>(mu) * k.hinge_sum_shifted(sums.data() + l * m, b, m);
  }
  return static_cast<double>(total);
}

double eval_f(const ScenarioTree& tree, std::span<const double> x) {
  return expected_reward(tree, x) - 2.0 / tree.instance().iota * aggregate_violation(tree, x);
}

std::vector<double> exact_grad_f_theta(const ScenarioTree& tree, std::span<const double> x, SmoothingParam theta) {
  check_size(tree, x);
  const std::size_t m = tree.instance().m;
  const auto& budgets = tree.instance().budgets;
  const auto& k = kernels::active();
  auto sums = node_resource_sums(tree, x);
  // expect[node][i] = E[phi'(sum_t a_i X - b_i) | node], filled bottom-up.
  std::vector<double> expect(tree.size() * m, 0.0);
  std::vector<double> shifted(m);
  for (std::size_t id = tree.size(); id-- > 0;) {
    const TreeNode& n = tree.node(id);
    double* row = expect.data() + id * m;
    if (n.children.empty()) {
      for (std::size_t i = 0; i < m; ++i) shifted[i] = sums[id * m + i] - budgets[i];
      k.huber_deriv(shifted.data(), row, m, theta.value());
      continue;
    }
    for (std::size_t c : n.children) {
      const double p = tree.node(c).prob;
      const double* child = expect.data() + c * m;
      for (std::size_t i = 0; i < m; ++i) row[i] += p * child[i];
    }
  }
  std::vector<double> grad(tree.size());
  const double scale = 2.0 / tree.instance().iota;
  for (std::size_t id = 0; id < tree.size(); ++id) {
    const TreeNode& n = tree.node(id);
    double pen = 0.0;
    for (const auto& e : n.item.consumption) pen += e.value * expect[id * m + e.index];
    grad[id] = n.item.reward - scale * pen;
  }
  return grad;
}

}  // namespace onpack

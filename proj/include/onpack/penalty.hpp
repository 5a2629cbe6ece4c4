#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "onpack/model/scenario_tree.hpp"

namespace onpack {

class SmoothingParam {
 public:
  // Throws ParameterError unless theta is finite and positive.
  explicit SmoothingParam(double theta);
  double value() const noexcept { return theta_; }

 private:
  double theta_;
};

// One-sided Huber: 0 for x <= 0, x^2 / (2 theta) on [0, theta], x - theta/2 above.
double huber(double x, SmoothingParam theta);
// min(x^+ / theta, 1).
double huber_deriv(double x, SmoothingParam theta);

// A value in [0, 1] for every node of an explicit tree, indexed by node id.
class SolutionVector {
 public:
  SolutionVector() = default;
  explicit SolutionVector(const ScenarioTree& tree, double fill = 0.0);
  explicit SolutionVector(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t id) const { return values_[id]; }
  double at(std::size_t id) const;
  void set(std::size_t id, double value);
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

// The functions below accept any real vector over the nodes (the gradient
// methods evaluate them at extrapolated points); SolutionVector overloads add
// the [0, 1] guarantee. A size mismatch throws ContractViolation.

// sum_S mu Z X - 2/iota sum_leaves mu sum_i phi_theta(sum_t a_i X - b_i)
double eval_f_theta(const ScenarioTree& tree, std::span<const double> x, SmoothingParam theta);
// Same with (.)^+ in place of phi_theta.
double eval_f(const ScenarioTree& tree, std::span<const double> x);
// sum_leaves mu sum_i (sum_t a_i X - b_i)^+
double aggregate_violation(const ScenarioTree& tree, std::span<const double> x);
// sum_S mu Z X
double expected_reward(const ScenarioTree& tree, std::span<const double> x);

// Conditional-expectation form of the gradient of f_theta:
//   g_S = Z(S) - 2/iota sum_{i in a+(S)} a_i(S) E[phi'(sum_t a_i X - b_i) | S],
// which is d f_theta / d X(S) divided by mu(S). Defined for mu(S) = 0 too,
// through the conditional probabilities.
std::vector<double> exact_grad_f_theta(const ScenarioTree& tree, std::span<const double> x, SmoothingParam theta);

inline double eval_f_theta(const ScenarioTree& tree, const SolutionVector& x, SmoothingParam theta) {
  return eval_f_theta(tree, x.values(), theta);
}
inline double eval_f(const ScenarioTree& tree, const SolutionVector& x) { return eval_f(tree, x.values()); }
inline std::vector<double> exact_grad_f_theta(const ScenarioTree& tree, const SolutionVector& x,
                                              SmoothingParam theta) {
  return exact_grad_f_theta(tree, x.values(), theta);
}

// Per-leaf resource sums sum_t a_i(S^t) x(S^t), row-major [leaf index][i].
std::vector<double> leaf_resource_sums(const ScenarioTree& tree, std::span<const double> x);

}  // namespace onpack

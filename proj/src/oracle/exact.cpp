#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "onpack/errors.hpp"
#include "onpack/kernels/kernels.hpp"
#include "onpack/oracle.hpp"

namespace onpack {

// ---- integer program by backward induction ---------------------------------------

namespace {

constexpr std::int64_t kMaxGrid = 10000;
constexpr std::int64_t kFineGrid = 1000000000;

// Smallest q <= kMaxGrid with a*q integral (to 1e-9), or 0.
std::int64_t denominator_of(double a) {
  for (std::int64_t q = 1; q <= kMaxGrid; ++q) {
    const double s = a * static_cast<double>(q);
    if (std::fabs(s - std::round(s)) <= 1e-9 * static_cast<double>(q)) return q;
  }
  return 0;
}

class PackDp {
 public:
  PackDp(const ScenarioTree& tree, std::size_t cap) : tree_(tree), cap_(cap), m_(tree.instance().m) {
    std::int64_t q = 1;
    bool exact = true;
    for (const TreeNode& n : tree.nodes()) {
      for (const auto& e : n.item.consumption) {
        const std::int64_t d = denominator_of(e.value);
        if (d == 0) {
          exact = false;
          break;
        }
        q = std::lcm(q, d);
        if (q > kMaxGrid) {
          exact = false;
          break;
        }
      }
      if (!exact) break;
    }
    approximate_ = !exact;
    grid_ = exact ? q : kFineGrid;
    const double g = static_cast<double>(grid_);
    for (double b : tree.instance().budgets) limit_.push_back(static_cast<std::int64_t>(std::floor(b * g + 1e-9 * g)));
    units_.resize(tree.size());
    for (std::size_t id = 0; id < tree.size(); ++id) {
      for (const auto& e : tree.node(id).item.consumption) {
        units_[id].emplace_back(e.index, static_cast<std::int64_t>(std::llround(e.value * g)));
      }
    }
  }

  bool approximate() const { return approximate_; }
  std::size_t states() const { return memo_.size(); }

  bool fits(std::size_t id, const std::vector<std::int64_t>& used) const {
    for (auto [i, u] : units_[id]) {
      if (used[i] + u > limit_[i]) return false;
    }
    return true;
  }

  std::vector<std::int64_t> charged(std::size_t id, std::vector<std::int64_t> used) const {
    for (auto [i, u] : units_[id]) used[i] += u;
    return used;
  }

  double children_value(std::size_t id, const std::vector<std::int64_t>& used) {
    double v = 0.0;
    for (std::size_t c : tree_.node(id).children) v += tree_.node(c).prob * value(c, used);
    return v;
  }

  // Best expected reward from node id onward given consumption `used` before it.
  double value(std::size_t id, const std::vector<std::int64_t>& used) {
    std::string key(sizeof(std::size_t) + m_ * sizeof(std::int64_t), '\0');
    std::memcpy(key.data(), &id, sizeof(std::size_t));
    std::memcpy(key.data() + sizeof(std::size_t), used.data(), m_ * sizeof(std::int64_t));
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const auto [skip, take] = options(id, used);
    const double v = std::max(skip, take);
    if (memo_.size() >= cap_) throw CapacityError("DP state space exceeds the cap");
    memo_.emplace(std::move(key), v);
    return v;
  }

  // (value if skipped, value if taken or -inf).
  std::pair<double, double> options(std::size_t id, const std::vector<std::int64_t>& used) {
    const double skip = children_value(id, used);
    double take = -INFINITY;
    if (fits(id, used)) take = tree_.node(id).item.reward + children_value(id, charged(id, used));
    return {skip, take};
  }

 private:
  const ScenarioTree& tree_;
  std::size_t cap_;
  std::size_t m_;
  bool approximate_ = false;
  std::int64_t grid_ = 1;
  std::vector<std::int64_t> limit_;
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> units_;
  std::unordered_map<std::string, double> memo_;
};

}  // namespace

PackSolution solve_pack_dp(const ScenarioTree& tree, std::size_t state_cap) {
  PackDp dp(tree, state_cap);
  PackSolution sol;
  sol.policy.assign(tree.size(), 0.0);
  const std::size_t m = tree.instance().m;
  double total = 0.0;
  for (std::size_t r : tree.roots()) total += tree.node(r).prob * dp.value(r, std::vector<std::int64_t>(m, 0));
  // Replay the argmax along every path to read off the policy.
  struct Pending {
    std::size_t id;
    std::vector<std::int64_t> used;
  };
  std::vector<Pending> stack;
  for (std::size_t r : tree.roots()) stack.push_back({r, std::vector<std::int64_t>(m, 0)});
  while (!stack.empty()) {
    Pending cur = std::move(stack.back());
    stack.pop_back();
    const auto [skip, take] = dp.options(cur.id, cur.used);
    const bool pick = take > skip;
    sol.policy[cur.id] = pick ? 1.0 : 0.0;
    const auto next = pick ? dp.charged(cur.id, cur.used) : cur.used;
    for (std::size_t c : tree.node(cur.id).children) stack.push_back({c, next});
  }
  sol.value = total;
  sol.approximate = dp.approximate();
  sol.states = dp.states();
  return sol;
}

// ---- linear programs -------------------------------------------------------------

namespace {

// Rows sum_t a_i(S^t) x(S^t) <= b_i for every leaf and touched resource,
// written into a dense row-major matrix with `width` columns.
void append_leaf_rows(const ScenarioTree& tree, std::size_t width, std::vector<double>& A, std::vector<double>& b,
                      std::vector<std::pair<std::size_t, std::uint32_t>>* row_ids) {
  const std::size_t m = tree.instance().m;
  for (std::size_t leaf : tree.leaves()) {
    std::vector<std::vector<std::pair<std::size_t, double>>> rows(m);
    for (std::size_t id : tree.path_to(leaf)) {
      for (const auto& e : tree.node(id).item.consumption) rows[e.index].emplace_back(id, e.value);
    }
    for (std::uint32_t i = 0; i < m; ++i) {
      if (rows[i].empty()) continue;
      const std::size_t base = A.size();
      A.resize(base + width, 0.0);
      for (auto [id, a] : rows[i]) A[base + id] += a;
      b.push_back(tree.instance().budgets[i]);
      if (row_ids) row_ids->emplace_back(leaf, i);
    }
  }
}

void append_box_rows(std::size_t n, std::size_t width, std::vector<double>& A, std::vector<double>& b) {
  for (std::size_t id = 0; id < n; ++id) {
    const std::size_t base = A.size();
    A.resize(base + width, 0.0);
    A[base + id] = 1.0;
    b.push_back(1.0);
  }
}

}  // namespace

LpSolution solve_lp_explicit(const ScenarioTree& tree) {
  const std::size_t n = tree.size();
  std::vector<double> c(n);
  for (std::size_t id = 0; id < n; ++id) c[id] = tree.node(id).mu * tree.node(id).item.reward;
  std::vector<double> A, b;
  append_leaf_rows(tree, n, A, b, nullptr);
  append_box_rows(n, n, A, b);
  const LpResult r = simplex_max(c, A, b);
  LpSolution sol;
  sol.x.resize(n);
  for (std::size_t id = 0; id < n; ++id) sol.x[id] = std::clamp(r.x[id], 0.0, 1.0);
  sol.value = r.value;
  return sol;
}

LpSolution solve_pen_unsmoothed(const ScenarioTree& tree) {
  const std::size_t n = tree.size();
  // Count slack columns first: one per (leaf, touched resource).
  std::vector<double> A0, b0;
  std::vector<std::pair<std::size_t, std::uint32_t>> ids;
  append_leaf_rows(tree, n, A0, b0, &ids);
  const std::size_t ns = ids.size();
  const std::size_t width = n + ns;
  std::vector<double> c(width, 0.0);
  for (std::size_t id = 0; id < n; ++id) c[id] = tree.node(id).mu * tree.node(id).item.reward;
  const double scale = 2.0 / tree.instance().iota;
  std::vector<double> A, b;
  A.reserve((ns + n) * width);
  for (std::size_t r = 0; r < ns; ++r) {
    A.insert(A.end(), A0.begin() + r * n, A0.begin() + (r + 1) * n);
    A.resize(A.size() + ns, 0.0);
    A[r * width + n + r] = -1.0;
    b.push_back(b0[r]);
    c[n + r] = -scale * tree.node(ids[r].first).mu;
  }
  append_box_rows(n, width, A, b);
  const LpResult r = simplex_max(c, A, b);
  LpSolution sol;
  sol.x.resize(n);
  for (std::size_t id = 0; id < n; ++id) sol.x[id] = std::clamp(r.x[id], 0.0, 1.0);
  sol.value = r.value;
  return sol;
}

// ---- smoothed penalty by projected gradient ascent ------------------------------------

namespace {

double mu_inner(const ScenarioTree& tree, std::span<const double> g, std::span<const double> d) {
  long double s = 0.0L;
  for (std::size_t id = 0; id < tree.size(); ++id) s += static_cast<long double>(tree.node(id).mu) * g[id] * d[id];
  return static_cast<double>(s);
}

void project_step(const ScenarioTree& tree, std::span<const double> from, std::span<const double> g, double step,
                  std::vector<double>& out) {
  for (std::size_t id = 0; id < tree.size(); ++id) {
    out[id] = tree.node(id).mu > 0.0 ? std::clamp(from[id] + step * g[id], 0.0, 1.0) : 0.0;
  }
}

}  // namespace

PenSolution solve_pen_explicit(const ScenarioTree& tree, SmoothingParam theta, double tol,
                               std::size_t max_iterations) {
  const std::size_t n = tree.size();
  std::vector<double> x(n, 0.0), x_prev(n, 0.0), y(n, 0.0), next(n), diff(n);
  double step = 1.0;
  double tk = 1.0;
  double fx = eval_f_theta(tree, x, theta);
  PenSolution sol;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    const std::vector<double> gy = exact_grad_f_theta(tree, y, theta);
    const double fy = eval_f_theta(tree, y, theta);
    double fn = 0.0;
    for (;;) {
      project_step(tree, y, gy, step, next);
      for (std::size_t id = 0; id < n; ++id) diff[id] = next[id] - y[id];
      fn = eval_f_theta(tree, next, theta);
      const double model = fy + mu_inner(tree, gy, diff) - mu_inner(tree, diff, diff) / (2.0 * step);
      if (fn >= model - 1e-13 * std::max(1.0, std::fabs(fy))) break;
      step *= 0.5;
      if (step < 1e-14) throw ConvergenceError("line search failed in the penalty solve");
    }
    // Gradient restart: drop momentum once the step opposes the previous move.
    double align = 0.0;
    for (std::size_t id = 0; id < n; ++id) {
      const double mu = tree.node(id).mu;
      align += mu * (y[id] - next[id]) * (next[id] - x[id]);
    }
    x_prev.swap(x);
    x = next;
    fx = fn;
    double mom = 0.0;
    if (align > 0.0) {
      tk = 1.0;
    } else {
      const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
      mom = (tk - 1.0) / tn;
      tk = tn;
    }
    for (std::size_t id = 0; id < n; ++id) y[id] = x[id] + mom * (x[id] - x_prev[id]);

    if (it % 10 == 0) {
      const std::vector<double> gx = exact_grad_f_theta(tree, x, theta);
      project_step(tree, x, gx, step, next);
      for (std::size_t id = 0; id < n; ++id) diff[id] = (next[id] - x[id]) / step;
      const double gm = std::sqrt(mu_inner(tree, diff, diff));
      if (gm <= tol) {
        sol.value = fx;
        sol.x = x;
        sol.stationarity = gm;
        sol.iterations = it;
        return sol;
      }
    }
  }
  throw ConvergenceError("penalty solve did not reach the stationarity tolerance");
}

double eval_policy_exact(const ScenarioTree& tree, std::span<const double> x) {
  if (x.size() != tree.size()) throw ContractViolation("policy is missing decisions");
  return expected_reward(tree, x);
}

}  // namespace onpack

#include <algorithm>
#include <cmath>
#include <vector>

#include "onpack/errors.hpp"
#include "onpack/oracle.hpp"

namespace onpack {

namespace {
constexpr double kPivotTol = 1e-11;
constexpr std::size_t kDegenerateSwitch = 50;
}  // namespace

LpResult simplex_max(std::span<const double> c, std::span<const double> A, std::span<const double> b,
                     std::size_t max_pivots) {
  const std::size_t n = c.size();
  const std::size_t m = b.size();
  if (A.size() != n * m) throw ContractViolation("constraint matrix has the wrong shape");
  for (double v : b) {
    if (!(v >= 0.0)) throw ContractViolation("simplex_max needs b >= 0");
  }
  // Tableau rows 0..m-1 are constraints, row m the objective (reduced costs
  // stored negated). Columns 0..n-1 structural, n..n+m-1 slack, n+m the rhs.
  const std::size_t w = n + m + 1;
  std::vector<double> tab((m + 1) * w, 0.0);
  auto at = [&](std::size_t r, std::size_t col) -> double& { return tab[r * w + col]; };
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) at(r, j) = A[r * n + j];
    at(r, n + r) = 1.0;
    at(r, n + m) = b[r];
    basis[r] = n + r;
  }
  for (std::size_t j = 0; j < n; ++j) at(m, j) = -c[j];

  LpResult res;
  bool bland = false;
  std::size_t degenerate_run = 0;
  for (;;) {
    std::size_t enter = w;
    double best = -kPivotTol;
    for (std::size_t j = 0; j + 1 < w; ++j) {
      const double rc = at(m, j);
      if (rc < -kPivotTol) {
        if (bland) {
          enter = j;
          break;
        }
        if (rc < best) {
          best = rc;
          enter = j;
        }
      }
    }
    if (enter == w) break;
    std::size_t leave = m;
    double ratio = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      const double a = at(r, enter);
      if (a <= kPivotTol) continue;
      const double q = at(r, n + m) / a;
      if (leave == m || q < ratio - 1e-14 || (std::fabs(q - ratio) <= 1e-14 && basis[r] < basis[leave])) {
        leave = r;
        ratio = q;
      }
    }
    if (leave == m) throw ConvergenceError("linear program is unbounded");
    if (++res.pivots > max_pivots) throw ConvergenceError("simplex pivot cap reached");
    if (ratio <= 1e-14) {
      if (++degenerate_run >= kDegenerateSwitch) bland = true;
    } else {
      degenerate_run = 0;
    }
    const double piv = at(leave, enter);
    for (std::size_t j = 0; j < w; ++j) at(leave, j) /= piv;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == leave) continue;
      const double f = at(r, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < w; ++j) at(r, j) -= f * at(leave, j);
      at(r, enter) = 0.0;
    }
    basis[leave] = enter;
  }

  res.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) res.x[basis[r]] = std::max(0.0, at(r, n + m));
  }
  res.duals.resize(m);
  for (std::size_t r = 0; r < m; ++r) res.duals[r] = at(m, n + r);
  double v = 0.0;
  for (std::size_t j = 0; j < n; ++j) v += c[j] * res.x[j];
  res.value = v;
  return res;
}

}  // namespace onpack

#include "onpack/model/instance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "onpack/errors.hpp"

namespace onpack {

namespace {

// Absorbs representation error when the ratio is an integer in exact
// arithmetic, e.g. L / nu with nu = 0.1.
std::size_t ceil_snapped(double x) {
  const double r = std::round(x);
  if (std::fabs(x - r) <= 1e-12 * std::max(1.0, std::fabs(x))) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(x));
}

}  // namespace

double Item::consumption_of(std::uint32_t i) const noexcept {
  auto it = std::lower_bound(consumption.begin(), consumption.end(), i,
                             [](const SparseEntry& e, std::uint32_t idx) { return e.index < idx; });
  return (it != consumption.end() && it->index == i) ? it->value : 0.0;
}

double InstanceSpec::nu() const {
  if (T == 0 || budgets.empty()) return 0.0;
  return *std::min_element(budgets.begin(), budgets.end()) / static_cast<double>(T);
}

double InstanceSpec::lambda() const {
  if (budgets.empty()) return 0.0;
  const double bmin = *std::min_element(budgets.begin(), budgets.end());
  if (bmin <= 0.0) return static_cast<double>(m);
  return std::min(static_cast<double>(m), static_cast<double>(L) * static_cast<double>(T) / bmin);
}

std::size_t InstanceSpec::v_bound() const {
  const double n = nu();
  if (n <= 0.0) return m;
  return std::min(m, ceil_snapped(static_cast<double>(L) / n));
}

std::size_t InstanceSpec::U_or_default() const { return std::max<std::size_t>(U.value_or(T), 2); }
std::size_t InstanceSpec::V_or_default() const { return std::max<std::size_t>(V.value_or(v_bound()), 1); }
std::size_t InstanceSpec::W_or_default() const { return W.value_or(L * T); }

void InstanceSpec::validate() const {
  if (T == 0) throw InstanceError("horizon T must be positive");
  if (budgets.size() != m) throw InstanceError("budget vector length must equal m");
  for (double b : budgets) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw InstanceError("budgets must be finite and nonnegative");
  }
  if (L == 0) throw InstanceError("L must be at least 1");
  if (!(iota > 0.0 && iota <= 1.0)) throw InstanceError("iota must lie in (0, 1]");
}

void InstanceSpec::check_item(const Item& item) const {
  if (!(item.reward >= 0.0 && item.reward <= 1.0)) {
    throw InstanceError("reward " + std::to_string(item.reward) + " outside [0, 1]");
  }
  if (item.consumption.size() > L) throw InstanceError("more than L resources requested by one item");
  for (std::size_t k = 0; k < item.consumption.size(); ++k) {
    const auto& e = item.consumption[k];
    if (e.index >= m) throw InstanceError("resource index out of range");
    if (k > 0 && item.consumption[k - 1].index >= e.index) {
      throw InstanceError("consumption entries must be sorted and distinct");
    }
    if (!(e.value >= iota && e.value <= 1.0)) {
      throw InstanceError("consumption " + std::to_string(e.value) + " outside [iota, 1]");
    }
  }
}

ConsumptionVector make_consumption(std::vector<SparseEntry> entries) {
  std::erase_if(entries, [](const SparseEntry& e) { return e.value == 0.0; });
  std::sort(entries.begin(), entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
  return entries;
}

}  // namespace onpack

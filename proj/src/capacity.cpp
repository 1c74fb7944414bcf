#include "mcda/capacity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "mcda/errors.hpp"

namespace mcda {

namespace {

void check_size(std::size_t n) {
  if (n > kMaxCriteria) throw InvalidArgument("more than 64 elementary criteria");
}

void check_subset(std::size_t n, CriteriaMask subset) {
  if ((subset & ~all_criteria(n)) != 0) {
    throw InvalidArgument("subset references criterion ordinal " +
                          std::to_string(std::countr_zero(subset & ~all_criteria(n))) +
                          " outside 0.." + std::to_string(n == 0 ? 0 : n - 1));
  }
}

double factorial(std::size_t k) {
  double f = 1.0;
  for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
  return f;
}

}  // namespace

EvaluationVector::EvaluationVector(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw InvalidArgument("evaluation " + std::to_string(i) + " = " + std::to_string(v) +
                            " is outside [0,1]");
    }
  }
}

MobiusCapacity2Add::MobiusCapacity2Add(std::size_t criteria)
    : n_(criteria), coefficients_(coefficient_count(criteria), 0.0) {
  check_size(criteria);
}

MobiusCapacity2Add::MobiusCapacity2Add(std::vector<double> singletons, std::vector<double> pairs)
    : n_(singletons.size()) {
  check_size(n_);
  if (pairs.size() != n_ * (n_ - (n_ > 0 ? 1 : 0)) / 2) {
    throw InvalidArgument("expected " + std::to_string(coefficient_count(n_) - n_) +
                          " pair coefficients, got " + std::to_string(pairs.size()));
  }
  coefficients_ = std::move(singletons);
  coefficients_.insert(coefficients_.end(), pairs.begin(), pairs.end());
}

MobiusCapacity2Add MobiusCapacity2Add::from_coefficients(std::size_t criteria,
                                                         std::span<const double> coefficients) {
  if (coefficients.size() != coefficient_count(criteria)) {
    throw InvalidArgument("coefficient vector has wrong length for " + std::to_string(criteria) +
                          " criteria");
  }
  MobiusCapacity2Add m(criteria);
  std::copy(coefficients.begin(), coefficients.end(), m.coefficients_.begin());
  return m;
}

MobiusCapacity2Add MobiusCapacity2Add::additive(std::vector<double> weights) {
  const std::size_t n = weights.size();
  return MobiusCapacity2Add(std::move(weights), std::vector<double>(n * (n - (n > 0 ? 1 : 0)) / 2, 0.0));
}

std::size_t MobiusCapacity2Add::pair_index(std::size_t n, std::size_t i, std::size_t j) {
  if (i == j) throw InvalidArgument("pair of identical criteria");
  if (i > j) std::swap(i, j);
  if (j >= n) throw InvalidArgument("criterion ordinal out of range");
  return n + i * (2 * n - i - 1) / 2 + (j - i - 1);
}

double MobiusCapacity2Add::singleton(std::size_t i) const { return coefficients_.at(i); }

double MobiusCapacity2Add::pair(std::size_t i, std::size_t j) const {
  return coefficients_[pair_index(n_, i, j)];
}

void MobiusCapacity2Add::set_singleton(std::size_t i, double value) { coefficients_.at(i) = value; }

void MobiusCapacity2Add::set_pair(std::size_t i, std::size_t j, double value) {
  coefficients_[pair_index(n_, i, j)] = value;
}

GeneralMobius::GeneralMobius(std::size_t criteria) : n_(criteria) {
  if (criteria > kMaxOracleCriteria) throw InvalidArgument("general Mobius oracle limited to 12 criteria");
  values_.assign(std::size_t{1} << criteria, 0.0);
}

GeneralMobius GeneralMobius::from_2additive(const MobiusCapacity2Add& m) {
  const std::size_t n = m.criteria_count();
  GeneralMobius g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[criterion_bit(i)] = m.singleton(i);
    for (std::size_t j = i + 1; j < n; ++j) g[criterion_bit(i) | criterion_bit(j)] = m.pair(i, j);
  }
  return g;
}

double capacity_from_mobius(const MobiusCapacity2Add& m, CriteriaMask subset) {
  const std::size_t n = m.criteria_count();
  check_subset(n, subset);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(subset & criterion_bit(i))) continue;
    total += m.singleton(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (subset & criterion_bit(j)) total += m.pair(i, j);
    }
  }
  return total;
}

double capacity_from_mobius(const MobiusCapacity2Add& m, std::span<const std::size_t> subset) {
  CriteriaMask mask = 0;
  for (std::size_t ordinal : subset) {
    if (ordinal >= m.criteria_count()) {
      throw InvalidArgument("unknown criterion ordinal " + std::to_string(ordinal));
    }
    mask |= criterion_bit(ordinal);
  }
  return capacity_from_mobius(m, mask);
}

double capacity_from_mobius(const GeneralMobius& m, CriteriaMask subset) {
  check_subset(m.criteria_count(), subset);
  // Enumerate submasks of subset, including the empty set (which holds 0).
  double total = 0.0;
  for (CriteriaMask r = subset;; r = (r - 1) & subset) {
    total += m[r];
    if (r == 0) break;
  }
  return total;
}

ValidationReport validate(const MobiusCapacity2Add& m, double tol) {
  if (tol < 0.0) throw InvalidArgument("negative validation tolerance");
  ValidationReport report;
  const std::size_t n = m.criteria_count();
  const auto coeffs = m.coefficients();
  const double total = std::accumulate(coeffs.begin(), coeffs.end(), 0.0);
  if (std::abs(total - 1.0) > tol) {
    report.violations.push_back({"normalization", std::nullopt, 1.0 - total});
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double own = m.singleton(i);
    double negative = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) negative += std::min(0.0, m.pair(i, j));
    }
    const double binding = std::min(own, own + negative);
    if (binding < -tol) report.violations.push_back({"monotonicity", i, binding});
  }
  return report;
}

double choquet_sorted(const CapacityFn& mu, const EvaluationVector& x) {
  const std::size_t n = x.size();
  check_size(n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Ties are broken by ordinal; the integral does not depend on it.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  CriteriaMask upper = all_criteria(n);
  double previous = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t c = order[k];
    total += (x[c] - previous) * mu(upper);
    previous = x[c];
    upper &= ~criterion_bit(c);
  }
  return total;
}

double choquet_sorted(const MobiusCapacity2Add& m, const EvaluationVector& x) {
  if (x.size() != m.criteria_count()) throw InvalidArgument("evaluation/capacity size mismatch");
  return choquet_sorted([&m](CriteriaMask s) { return capacity_from_mobius(m, s); }, x);
}

double choquet_mobius_general(const GeneralMobius& m, const EvaluationVector& x) {
  const std::size_t n = m.criteria_count();
  if (x.size() != n) throw InvalidArgument("evaluation/capacity size mismatch");
  double total = 0.0;
  for (CriteriaMask t = 1; t <= all_criteria(n); ++t) {
    double lowest = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (t & criterion_bit(i)) lowest = std::min(lowest, x[i]);
    }
    total += m[t] * lowest;
  }
  return total;
}

double choquet_2additive(const MobiusCapacity2Add& m, std::span<const double> x) {
  const std::size_t n = m.criteria_count();
  if (x.size() != n) throw InvalidArgument("evaluation/capacity size mismatch");
  const auto c = m.coefficients();
  double total = 0.0;
  std::size_t k = n;
  for (std::size_t i = 0; i < n; ++i) {
    total += c[i] * x[i];
    for (std::size_t j = i + 1; j < n; ++j) total += c[k++] * std::min(x[i], x[j]);
  }
  return total;
}

double choquet_2additive(const MobiusCapacity2Add& m, const EvaluationVector& x) {
  return choquet_2additive(m, x.values());
}

double shapley_exhaustive(const CapacityFn& mu, std::size_t criteria, std::size_t i) {
  if (criteria > kMaxOracleCriteria) throw InvalidArgument("exhaustive Shapley limited to 12 criteria");
  if (i >= criteria) throw InvalidArgument("criterion ordinal out of range");
  const CriteriaMask others = all_criteria(criteria) & ~criterion_bit(i);
  const double denom = factorial(criteria);
  double total = 0.0;
  for (CriteriaMask t = others;; t = (t - 1) & others) {
    const auto size = static_cast<std::size_t>(std::popcount(t));
    const double weight = factorial(criteria - size - 1) * factorial(size) / denom;
    total += weight * (mu(t | criterion_bit(i)) - mu(t));
    if (t == 0) break;
  }
  return total;
}

double shapley_2additive(const MobiusCapacity2Add& m, std::size_t i) {
  const std::size_t n = m.criteria_count();
  double value = m.singleton(i);
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i) value += m.pair(i, j) / 2.0;
  }
  return value;
}

double interaction_exhaustive(const CapacityFn& mu, std::size_t criteria, std::size_t i, std::size_t j) {
  if (criteria > kMaxOracleCriteria) throw InvalidArgument("exhaustive interaction limited to 12 criteria");
  if (i == j) throw InvalidArgument("interaction of a criterion with itself");
  if (i >= criteria || j >= criteria) throw InvalidArgument("criterion ordinal out of range");
  const CriteriaMask bi = criterion_bit(i);
  const CriteriaMask bj = criterion_bit(j);
  const CriteriaMask others = all_criteria(criteria) & ~bi & ~bj;
  const double denom = factorial(criteria - 1);
  double total = 0.0;
  for (CriteriaMask t = others;; t = (t - 1) & others) {
    const auto size = static_cast<std::size_t>(std::popcount(t));
    const double weight = factorial(criteria - size - 2) * factorial(size) / denom;
    total += weight * (mu(t | bi | bj) - mu(t | bi) - mu(t | bj) + mu(t));
    if (t == 0) break;
  }
  return total;
}

double interaction_2additive(const MobiusCapacity2Add& m, std::size_t i, std::size_t j) {
  return m.pair(i, j);
}

}  // namespace mcda

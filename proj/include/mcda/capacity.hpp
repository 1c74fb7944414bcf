#pragma once

// Capacities in Mobius form and the Choquet integral over a flat criteria set.
//
// Elementary criteria are addressed by their dense ordinal 0..n-1. Subsets of
// criteria are bitmasks, which caps a flat criteria set at 64 members.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mcda {

using CriteriaMask = std::uint64_t;

inline constexpr std::size_t kMaxCriteria = 64;
/// Largest criteria count accepted by the exhaustive (2^n) oracles.
inline constexpr std::size_t kMaxOracleCriteria = 12;

constexpr CriteriaMask criterion_bit(std::size_t ordinal) { return CriteriaMask{1} << ordinal; }
constexpr CriteriaMask all_criteria(std::size_t n) {
  return n >= 64 ? ~CriteriaMask{0} : (CriteriaMask{1} << n) - 1;
}

struct ElementaryCriterionId {
  std::string id;
  std::size_t ordinal = 0;
};

/// Normalized performance of one alternative; every entry lies in [0,1].
class EvaluationVector {
 public:
  EvaluationVector() = default;
  explicit EvaluationVector(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// A 2-additive capacity stored by its Mobius coefficients: one per criterion
/// followed by one per unordered pair {i,j}, i<j, in lexicographic order.
/// The empty-set coefficient is identically zero and not stored.
class MobiusCapacity2Add {
 public:
  MobiusCapacity2Add() = default;
  explicit MobiusCapacity2Add(std::size_t criteria);
  MobiusCapacity2Add(std::vector<double> singletons, std::vector<double> pairs);

  static MobiusCapacity2Add from_coefficients(std::size_t criteria, std::span<const double> coefficients);
  /// Additive capacity with the given weights and zero interactions.
  static MobiusCapacity2Add additive(std::vector<double> weights);

  static constexpr std::size_t coefficient_count(std::size_t n) { return n + n * (n - 1) / 2; }
  /// Position of m({i,j}) in the coefficient vector.
  static std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j);

  std::size_t criteria_count() const noexcept { return n_; }
  double singleton(std::size_t i) const;
  double pair(std::size_t i, std::size_t j) const;
  void set_singleton(std::size_t i, double value);
  void set_pair(std::size_t i, std::size_t j, double value);

  std::span<const double> coefficients() const noexcept { return coefficients_; }

  friend bool operator==(const MobiusCapacity2Add&, const MobiusCapacity2Add&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> coefficients_;
};

/// Mobius values for every subset of a small criteria set, indexed by bitmask.
/// Used as a test oracle; n <= kMaxOracleCriteria.
class GeneralMobius {
 public:
  explicit GeneralMobius(std::size_t criteria);
  static GeneralMobius from_2additive(const MobiusCapacity2Add& m);

  std::size_t criteria_count() const noexcept { return n_; }
  double operator[](CriteriaMask subset) const { return values_.at(subset); }
  double& operator[](CriteriaMask subset) { return values_.at(subset); }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

/// Any set function mu: 2^G -> R addressed by bitmask.
using CapacityFn = std::function<double(CriteriaMask)>;

struct ConstraintViolation {
  std::string constraint;               // "normalization" or "monotonicity"
  std::optional<std::size_t> criterion;  // set for monotonicity
  double residual = 0.0;                 // signed; negative means violated
};

struct ValidationReport {
  std::vector<ConstraintViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

inline constexpr double kDefaultValidationTol = 1e-9;

// mu(S) = sum of m(R) over R subset of S. Throws InvalidArgument on bits beyond n.
double capacity_from_mobius(const MobiusCapacity2Add& m, CriteriaMask subset);
double capacity_from_mobius(const MobiusCapacity2Add& m, std::span<const std::size_t> subset);
double capacity_from_mobius(const GeneralMobius& m, CriteriaMask subset);

/// Checks normalization and monotonicity. For monotonicity the binding
/// subset of the other criteria is exactly the set of negative pair terms.
ValidationReport validate(const MobiusCapacity2Add& m, double tol = kDefaultValidationTol);

/// Choquet integral by its sorted-increments definition; works for any capacity.
double choquet_sorted(const CapacityFn& mu, const EvaluationVector& x);
double choquet_sorted(const MobiusCapacity2Add& m, const EvaluationVector& x);

/// sum over T of m(T) * min over T of x.
double choquet_mobius_general(const GeneralMobius& m, const EvaluationVector& x);

double choquet_2additive(const MobiusCapacity2Add& m, const EvaluationVector& x);
double choquet_2additive(const MobiusCapacity2Add& m, std::span<const double> x);

double shapley_exhaustive(const CapacityFn& mu, std::size_t criteria, std::size_t i);
double shapley_2additive(const MobiusCapacity2Add& m, std::size_t i);

double interaction_exhaustive(const CapacityFn& mu, std::size_t criteria, std::size_t i, std::size_t j);
double interaction_2additive(const MobiusCapacity2Add& m, std::size_t i, std::size_t j);

}  // namespace mcda

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mcda/capacity.hpp"
#include "mcda/hierarchy.hpp"
#include "mcda/linprog.hpp"
#include "mcda/table.hpp"

namespace mcda {

struct EpsilonMode {
  enum class Kind { fixed, fraction_of_eps_star };
  Kind kind = Kind::fraction_of_eps_star;
  double value = 0.5;

  static EpsilonMode fixed(double eps) { return {Kind::fixed, eps}; }
  static EpsilonMode fraction(double ratio) { return {Kind::fraction_of_eps_star, ratio}; }
  friend bool operator==(const EpsilonMode&, const EpsilonMode&) = default;
};

struct SamplerConfig {
  std::size_t sample_count = 100000;
  std::size_t burn_in = 10000;
  std::size_t thinning = 5;
  std::uint64_t seed = 20130101;
  EpsilonMode epsilon_mode;

  /// Throws InvalidArgument on a zero sample count or thinning, or a ratio outside (0,1].
  void check() const;
};

/// Called with (done, total); returning false cancels the computation.
using ProgressFn = std::function<bool(std::size_t, std::size_t)>;

/// Sampled points, row-major. For a system with an epsilon variable, that
/// column is fixed before sampling and the rows cover the other variables.
struct SampleSet {
  std::vector<std::string> variables;
  std::vector<double> values;
  double epsilon = 0.0;  // value the epsilon variable was fixed at (0 if none)

  std::size_t dimension() const noexcept { return variables.size(); }
  std::size_t size() const noexcept { return variables.empty() ? 0 : values.size() / variables.size(); }
  std::span<const double> row(std::size_t k) const { return {values.data() + k * dimension(), dimension()}; }
};

/// Hit-and-run from the Chebyshev center with isotropic directions in the
/// affine hull of the equalities. Throws InfeasibleSystem, EmptyInterior,
/// InvalidArgument (fixed eps above eps*, unbounded polytope) or Cancelled.
SampleSet har_sample(const LinearConstraintSystem& sys, const SamplerConfig& cfg, const ProgressFn& progress = {});

/// rank(k) = 1 + number of values strictly greater than values[k].
std::vector<std::size_t> rank_function(std::span<const double> values);

/// Frequencies for one node, kept as integer counts.
struct NodeIndices {
  NodeId node;
  std::size_t alternatives = 0;
  std::size_t samples = 0;
  std::vector<std::uint64_t> rank_counts;  // [a * alternatives + (rank - 1)]
  std::vector<std::uint64_t> win_counts;   // [a * alternatives + b]: value(a) > value(b)

  double rai(std::size_t a, std::size_t rank) const;
  double pwi(std::size_t a, std::size_t b) const;
  double tie(std::size_t a, std::size_t b) const;
  double down_cum(std::size_t a, std::size_t rank) const;
  double up_cum(std::size_t a, std::size_t rank) const;
  /// Rows of frequencies: alternatives x ranks, alternatives x alternatives.
  std::vector<double> rai_matrix() const;
  std::vector<double> pwi_matrix() const;
  std::vector<double> down_cum_matrix() const;
  std::vector<double> up_cum_matrix() const;

  friend bool operator==(const NodeIndices&, const NodeIndices&) = default;
};

struct SmaaResult {
  std::vector<NodeIndices> nodes;
  MobiusCapacity2Add barycenter;
  std::size_t sample_count = 0;
  double epsilon = 0.0;

  const NodeIndices& at(const NodeId& node) const;
  friend bool operator==(const SmaaResult&, const SmaaResult&) = default;
};

/// Serial reference and OpenMP kernel; both produce identical counts.
std::vector<NodeIndices> compute_indices_serial(const SampleSet& samples, const CriteriaHierarchy& h,
                                                const PerformanceTable& table, std::span<const NodeId> nodes);
std::vector<NodeIndices> compute_indices(const SampleSet& samples, const CriteriaHierarchy& h,
                                         const PerformanceTable& table, std::span<const NodeId> nodes);

/// Coordinatewise mean of Möbius samples on n criteria.
MobiusCapacity2Add barycenter(const SampleSet& samples, std::size_t criteria);

struct NodeRanking {
  NodeId node;
  std::vector<double> values;       // hierarchical Choquet value per alternative
  std::vector<std::size_t> ranks;
};

std::vector<NodeRanking> barycenter_ranking(const MobiusCapacity2Add& bary, const CriteriaHierarchy& h,
                                            const PerformanceTable& table, std::span<const NodeId> nodes);

/// Sampling, indices at every listed node, and the barycenter. Progress
/// counts sampler steps, then one extra step for the indices.
SmaaResult run_smaa(const LinearConstraintSystem& sys, const CriteriaHierarchy& h, const PerformanceTable& table,
                    std::span<const NodeId> nodes, const SamplerConfig& cfg, const ProgressFn& progress = {});

/// Additive baseline: weights uniform on the simplex, weighted-sum values,
/// indices for a single flat root node.
NodeIndices smaa2_additive(const PerformanceTable& table, const SamplerConfig& cfg);

}  // namespace mcda

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcda/capacity.hpp"
#include "mcda/hierarchy.hpp"
#include "mcda/linprog.hpp"
#include "mcda/table.hpp"

namespace mcda {

enum class StatementKind {
  alt_strict,
  alt_indifferent,
  alt_intensity_strict,
  alt_intensity_equal,
  crit_more_important,
  crit_equal,
  crit_positive_interaction,
  crit_negative_interaction,
  crit_interaction_compare,
  crit_intensity_strict,
  crit_intensity_equal,
};

std::string_view to_string(StatementKind k);
StatementKind statement_kind_from_string(std::string_view text);
bool is_alternative_statement(StatementKind k);
std::size_t statement_arity(StatementKind k);

enum class InteractionSign { positive, negative };

std::string_view to_string(InteractionSign s);
InteractionSign interaction_sign_from_string(std::string_view text);

struct PreferenceStatement {
  StatementKind kind = StatementKind::alt_strict;
  NodeId scope;
  int level = 0;                      // criterion statements; 0 = children of scope
  std::vector<std::string> subjects;  // alternative ids, or criterion names / paths
  InteractionSign sign = InteractionSign::positive;  // crit_interaction_compare only
  std::string note;

  friend bool operator==(const PreferenceStatement&, const PreferenceStatement&) = default;
};

/// Linear forms over the 2-additive Möbius coefficients (length n + n(n-1)/2).
/// choquet_row . m = C_mu(x_r); importance_row . m = mu(E(g_r)).
std::vector<double> choquet_row(const CriteriaHierarchy& h, const NodeId& r, std::span<const double> x);
std::vector<double> importance_row(const CriteriaHierarchy& h, const NodeId& r);
/// Numerators of the hierarchical Shapley and interaction indices.
std::vector<double> shapley_row(const CriteriaHierarchy& h, const NodeId& r, const NodeId& member, int level);
std::vector<double> interaction_row(const CriteriaHierarchy& h, const NodeId& r, const NodeId& first,
                                    const NodeId& second, int level);

/// Monotonicity over the Möbius block as one lazily separated family:
/// m_i + sum_{j in T} m_ij >= 0 for every i and T subset of the others.
class MonotonicityFamily final : public ConstraintFamily {
 public:
  /// variables[k] is the system column of Möbius coefficient k.
  MonotonicityFamily(std::vector<std::string> criteria, std::vector<std::size_t> variables);

  std::string name() const override { return "monotonicity"; }
  std::vector<Constraint> seed_rows(std::size_t variable_count) const override;
  std::vector<Constraint> separate(std::span<const double> x, double tol,
                                   std::size_t variable_count) const override;
  std::vector<Constraint> candidates(std::span<const double> x, std::size_t variable_count) const override;
  double min_slack(std::span<const double> x) const override;
  std::pair<double, double> chord(std::span<const double> x, std::span<const double> d) const override;
  std::shared_ptr<const ConstraintFamily> remapped(std::span<const std::ptrdiff_t> map) const override;

 private:
  std::size_t n() const noexcept { return criteria_.size(); }
  std::size_t singleton_var(std::size_t i) const { return variables_[i]; }
  std::size_t pair_var(std::size_t i, std::size_t j) const;
  Constraint row(std::size_t i, CriteriaMask others, std::size_t variable_count) const;
  double upper_step(std::size_t i, std::span<const double> x, std::span<const double> d, double sign) const;

  std::vector<std::string> criteria_;
  std::vector<std::size_t> variables_;
};

/// Rows for one statement over the Möbius variables plus a trailing ε column.
/// Alternative statements need a table.
std::vector<Constraint> translate(const PreferenceStatement& st, const CriteriaHierarchy& h,
                                  const PerformanceTable* table, std::string_view tag);

/// Möbius variables m(..), then eps. Normalization equality, monotonicity family, the
/// statements, 0 <= eps <= 1, objective max eps. Errors from all statements
/// are collected into one ValidationFailed.
LinearConstraintSystem assemble_edm(std::span<const PreferenceStatement> statements, const CriteriaHierarchy& h,
                                    const PerformanceTable* table);

inline constexpr double kEpsilonTol = 1e-8;

struct ConsistencyResult {
  bool feasible = false;
  double eps_star = 0.0;
  LpStatus status = LpStatus::infeasible;
  std::vector<double> point;  // maximizer when the LP is optimal
};

ConsistencyResult check_consistency(const LinearConstraintSystem& sys);

/// a over b on node r, with a and b alternative rows of table. Both add
/// mu(E(g_r)) >= eps to the system.
bool necessary(const LinearConstraintSystem& sys, const CriteriaHierarchy& h, const PerformanceTable& table,
               const NodeId& r, std::size_t a, std::size_t b);
bool possible(const LinearConstraintSystem& sys, const CriteriaHierarchy& h, const PerformanceTable& table,
              const NodeId& r, std::size_t a, std::size_t b);

/// A x A relation, row-major (a * size + b).
struct DominanceMatrix {
  std::size_t size = 0;
  std::vector<std::uint8_t> cells;
  bool operator()(std::size_t a, std::size_t b) const { return cells[a * size + b] != 0; }
};

DominanceMatrix dominance(const PerformanceTable& table);
/// a >= b on every elementary criterion in mask (no strictness required).
bool weakly_dominates(const PerformanceTable& table, std::size_t a, std::size_t b, CriteriaMask mask);

struct NapRelation {
  NodeId node;
  std::size_t size = 0;
  std::vector<std::uint8_t> necessary_cells;
  std::vector<std::uint8_t> possible_cells;
  std::size_t lp_count = 0;  // LPs actually solved

  bool necessary(std::size_t a, std::size_t b) const { return necessary_cells[a * size + b] != 0; }
  bool possible(std::size_t a, std::size_t b) const { return possible_cells[a * size + b] != 0; }
};

struct NapOptions {
  bool parallel = true;
  /// Settle pairs from dominance and from feasible witness capacities before
  /// falling back to one LP per undecided pair.
  bool shortcuts = true;
};

/// Node-level systems also require mu(E(g_r)) >= eps. Throws InfeasibleSystem
/// when the statements admit no compatible capacity, ZeroImportance when none
/// of them gives g_r positive importance.
NapRelation nap_relation(const LinearConstraintSystem& sys, const CriteriaHierarchy& h,
                         const PerformanceTable& table, const NodeId& r, const NapOptions& options = {});

struct InconsistencyDiagnostic {
  bool heuristic = true;
  /// Statement index sets (0-based) whose removal restores feasibility.
  std::vector<std::vector<std::size_t>> removals;
};

/// Single-removal scan, then pair-removal scan. Throws InvalidArgument when
/// the statements are already consistent.
InconsistencyDiagnostic diagnose_inconsistency(std::span<const PreferenceStatement> statements,
                                               const CriteriaHierarchy& h, const PerformanceTable* table);

}  // namespace mcda

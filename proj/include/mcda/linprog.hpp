#pragma once

// Linear programs over named real variables, solved with a dense two-phase
// simplex. All variables are free; bounds are ordinary constraints.
//
// A system may carry constraint families: structured sets of inequalities too
// large to list row by row. The solver handles them by cutting planes, the
// polytope sampler through their closed-form chord.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mcda {

enum class Relation { less_equal, equal, greater_equal };

std::string_view to_string(Relation r);

struct Constraint {
  std::vector<double> coefficients;
  Relation relation = Relation::greater_equal;
  double bound = 0.0;
  std::string tag;

  double activity(std::span<const double> x) const;
  /// Signed distance to violation: >= 0 when satisfied. Equalities report -|residual|.
  double slack(std::span<const double> x) const;
};

class ConstraintFamily {
 public:
  virtual ~ConstraintFamily() = default;

  virtual std::string name() const = 0;
  /// Rows added to every LP before separation starts; they must keep the
  /// relaxation bounded whenever the complete system is.
  virtual std::vector<Constraint> seed_rows(std::size_t variable_count) const = 0;
  /// Members violated at x by more than tol; at most one per internal group.
  virtual std::vector<Constraint> separate(std::span<const double> x, double tol,
                                           std::size_t variable_count) const = 0;
  /// A small set of members worth checking when x must keep a ball inside the
  /// family; always includes the member with the smallest slack at x.
  virtual std::vector<Constraint> candidates(std::span<const double> x, std::size_t variable_count) const = 0;
  virtual double min_slack(std::span<const double> x) const = 0;
  /// Interval of t for which x + t*d satisfies every member. x must be feasible.
  virtual std::pair<double, double> chord(std::span<const double> x, std::span<const double> d) const = 0;
  /// The same family after variables are renumbered: map[old] is the new index,
  /// or -1 for a dropped variable (which the family must not use).
  virtual std::shared_ptr<const ConstraintFamily> remapped(std::span<const std::ptrdiff_t> map) const = 0;
};

class LinearConstraintSystem {
 public:
  std::size_t add_variable(std::string name);
  std::size_t variable_count() const noexcept { return variables_.size(); }
  const std::vector<std::string>& variables() const noexcept { return variables_; }
  std::optional<std::size_t> variable_index(std::string_view name) const;

  /// Throws InvalidArgument on a wrong row length, empty or duplicate tag.
  void add_constraint(Constraint c);
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }

  void add_family(std::shared_ptr<const ConstraintFamily> family);
  const std::vector<std::shared_ptr<const ConstraintFamily>>& families() const noexcept { return families_; }

  void set_objective(std::vector<double> objective);
  const std::vector<double>& objective() const noexcept { return objective_; }

  /// Marks the auxiliary variable that converts strict inequalities.
  void set_epsilon_variable(std::size_t index);
  std::optional<std::size_t> epsilon_variable() const noexcept { return epsilon_; }

  /// Substitutes a constant for one variable and removes its column. Rows that
  /// become constant and hold are dropped.
  LinearConstraintSystem with_fixed_variable(std::size_t index, double value) const;

  /// Smallest slack over explicit rows and families (negative = violated).
  double min_slack(std::span<const double> x) const;

  /// Human-readable LP dump, one constraint per line with its tag as comment.
  std::string to_lp_format() const;

 private:
  std::vector<std::string> variables_;
  std::vector<Constraint> constraints_;
  std::vector<std::shared_ptr<const ConstraintFamily>> families_;
  std::vector<double> objective_;
  std::optional<std::size_t> epsilon_;
};

enum class LpStatus { optimal, infeasible, unbounded };

std::string_view to_string(LpStatus s);

struct LpOutcome {
  LpStatus status = LpStatus::infeasible;
  double objective = 0.0;
  std::vector<double> point;
};

inline constexpr double kFeasibilityTol = 1e-8;

/// Maximizes the system objective. Deterministic for a given row order.
LpOutcome solve_max(const LinearConstraintSystem& sys);

/// A system solved once; variants with extra inequality rows continue from
/// its optimal basis instead of starting over. Copies share the solved state
/// and solve_with may run concurrently.
class WarmStartedLp {
 public:
  explicit WarmStartedLp(const LinearConstraintSystem& sys);

  const LpOutcome& base() const;
  /// Maximizes the system objective subject to the extra rows as well.
  LpOutcome solve_with(std::span<const Constraint> extra) const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

/// Center of the largest ball inside the inequalities, measured within the
/// affine hull of the equalities. Throws InfeasibleSystem, or EmptyInterior
/// when the inscribed radius is not positive.
std::vector<double> chebyshev_center(const LinearConstraintSystem& sys);

}  // namespace mcda

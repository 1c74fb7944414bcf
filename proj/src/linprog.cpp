#include "mcda/linprog.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "affine_hull.hpp"
#include "mcda/errors.hpp"

namespace mcda {

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::less_equal: return "<=";
    case Relation::equal: return "=";
    case Relation::greater_equal: return ">=";
  }
  return "?";
}

std::string_view to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "?";
}

double Constraint::activity(std::span<const double> x) const {
  double total = 0.0;
  for (std::size_t i = 0; i < coefficients.size(); ++i) total += coefficients[i] * x[i];
  return total;
}

double Constraint::slack(std::span<const double> x) const {
  const double lhs = activity(x);
  switch (relation) {
    case Relation::less_equal: return bound - lhs;
    case Relation::greater_equal: return lhs - bound;
    case Relation::equal: return -std::abs(lhs - bound);
  }
  return 0.0;
}

std::size_t LinearConstraintSystem::add_variable(std::string name) {
  if (!constraints_.empty()) throw InvalidArgument("variables must be declared before constraints");
  variables_.push_back(std::move(name));
  objective_.resize(variables_.size(), 0.0);
  return variables_.size() - 1;
}

std::optional<std::size_t> LinearConstraintSystem::variable_index(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i] == name) return i;
  }
  return std::nullopt;
}

void LinearConstraintSystem::add_constraint(Constraint c) {
  if (c.coefficients.size() != variables_.size()) {
    throw InvalidArgument("constraint '" + c.tag + "' has " + std::to_string(c.coefficients.size()) +
                          " coefficients for " + std::to_string(variables_.size()) + " variables");
  }
  if (c.tag.empty()) throw InvalidArgument("constraint without provenance tag");
  for (const auto& existing : constraints_) {
    if (existing.tag == c.tag) throw InvalidArgument("duplicate constraint tag '" + c.tag + "'");
  }
  for (double v : c.coefficients) {
    if (!std::isfinite(v)) throw InvalidArgument("non-finite coefficient in '" + c.tag + "'");
  }
  constraints_.push_back(std::move(c));
}

void LinearConstraintSystem::add_family(std::shared_ptr<const ConstraintFamily> family) {
  families_.push_back(std::move(family));
}

void LinearConstraintSystem::set_objective(std::vector<double> objective) {
  if (objective.size() != variables_.size()) throw InvalidArgument("objective has wrong length");
  objective_ = std::move(objective);
}

void LinearConstraintSystem::set_epsilon_variable(std::size_t index) {
  if (index >= variables_.size()) throw InvalidArgument("epsilon index out of range");
  epsilon_ = index;
}

LinearConstraintSystem LinearConstraintSystem::with_fixed_variable(std::size_t index, double value) const {
  if (index >= variables_.size()) throw InvalidArgument("variable index out of range");
  LinearConstraintSystem out;
  std::vector<std::ptrdiff_t> map(variables_.size(), -1);
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (i == index) continue;
    map[i] = static_cast<std::ptrdiff_t>(out.add_variable(variables_[i]));
  }
  for (const auto& c : constraints_) {
    Constraint reduced;
    reduced.relation = c.relation;
    reduced.tag = c.tag;
    reduced.bound = c.bound - c.coefficients[index] * value;
    bool constant = true;
    for (std::size_t i = 0; i < variables_.size(); ++i) {
      if (i == index) continue;
      reduced.coefficients.push_back(c.coefficients[i]);
      if (c.coefficients[i] != 0.0) constant = false;
    }
    if (constant && reduced.slack(reduced.coefficients) >= -1e-12) continue;
    out.constraints_.push_back(std::move(reduced));
  }
  for (const auto& family : families_) out.families_.push_back(family->remapped(map));
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (map[i] >= 0) out.objective_[static_cast<std::size_t>(map[i])] = objective_[i];
  }
  if (epsilon_ && *epsilon_ != index) out.epsilon_ = static_cast<std::size_t>(map[*epsilon_]);
  return out;
}

double LinearConstraintSystem::min_slack(std::span<const double> x) const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& c : constraints_) worst = std::min(worst, c.slack(x));
  for (const auto& f : families_) worst = std::min(worst, f->min_slack(x));
  return worst;
}

std::string LinearConstraintSystem::to_lp_format() const {
  std::ostringstream out;
  out.precision(17);
  auto write_row = [&](const std::vector<double>& row) {
    bool first = true;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] == 0.0) continue;
      const double v = row[i];
      if (!first) out << (v < 0 ? " - " : " + ");
      else if (v < 0) out << "-";
      out << std::abs(v) << " " << variables_[i];
      first = false;
    }
    if (first) out << "0";
  };
  out << "Maximize\n obj: ";
  write_row(objective_);
  out << "\nSubject To\n";
  for (const auto& c : constraints_) {
    out << " ";
    write_row(c.coefficients);
    out << " " << to_string(c.relation) << " " << c.bound << "  \\ " << c.tag << "\n";
  }
  for (const auto& f : families_) out << " \\ family: " << f->name() << " (separated lazily)\n";
  out << "Bounds\n";
  for (const auto& v : variables_) out << " " << v << " free\n";
  out << "End\n";
  return out.str();
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-10;
constexpr std::size_t kDegenerateSwitch = 64;
constexpr std::size_t kIterationLimit = 200000;
constexpr std::size_t kCutRounds = 1000;
constexpr std::size_t kRefactorInterval = 200;
constexpr double kDualFeasTol = 1e-10;

/// Dense tableau simplex over free variables, each split into x+ and x-.
/// Rows added after a solve are expressed in the current basis and repaired
/// by dual simplex pivots, so cutting-plane rounds reuse the previous optimum.
class DenseSimplex {
 public:
  DenseSimplex(std::size_t nv, std::span<const double> objective)
      : nv_(nv), objective_(objective.begin(), objective.end()), cols_(2 * nv) {
    artificial_.assign(cols_, 0);
    basic_.assign(cols_, 0);
    obj_.assign(cols_ + 1, 0.0);
    cost_.assign(cols_, 0.0);
  }

  void add_rows(std::span<const Constraint* const> rows) {
    // New columns: one slack per inequality, one artificial per row that needs one.
    std::vector<Relation> relation(rows.size());
    std::vector<double> sign(rows.size());
    std::size_t extra = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const Constraint& c = *rows[k];
      if (solved_) {
        if (c.relation == Relation::equal) throw Error("equality rows cannot be added after a solve");
        sign[k] = c.relation == Relation::less_equal ? 1.0 : -1.0;
        relation[k] = Relation::less_equal;
        ++extra;
        continue;
      }
      const bool flip = c.bound < 0.0 || (c.bound == 0.0 && c.relation == Relation::greater_equal);
      sign[k] = flip ? -1.0 : 1.0;
      relation[k] = c.relation;
      if (flip && c.relation != Relation::equal) {
        relation[k] = c.relation == Relation::less_equal ? Relation::greater_equal : Relation::less_equal;
      }
      if (relation[k] != Relation::equal) ++extra;
      if (relation[k] != Relation::less_equal) ++extra;
    }
    widen(extra);

    const std::size_t w = cols_ + 1;
    std::size_t next = cols_ - extra;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const Constraint& c = *rows[k];
      std::vector<double> row(w, 0.0);
      for (std::size_t j = 0; j < nv_; ++j) {
        row[j] = sign[k] * c.coefficients[j];
        row[nv_ + j] = -sign[k] * c.coefficients[j];
      }
      row[cols_] = sign[k] * c.bound;
      std::size_t basic = 0;
      if (relation[k] == Relation::less_equal) {
        row[next] = 1.0;
        basic = next++;
      } else {
        if (relation[k] == Relation::greater_equal) row[next++] = -1.0;
        row[next] = 1.0;
        artificial_[next] = 1;
        basic = next++;
      }
      a_.insert(a_.end(), row.begin(), row.end());
      if (solved_) {
        for (std::size_t r = 0; r < m_; ++r) {
          const double f = row[basis_[r]];
          if (f == 0.0) continue;
          const double* tr = &at(r, 0);
          for (std::size_t c2 = 0; c2 < w; ++c2) row[c2] -= f * tr[c2];
          row[basis_[r]] = 0.0;
        }
      }
      t_.insert(t_.end(), row.begin(), row.end());
      basis_.push_back(basic);
      basic_[basic] = 1;
      ++m_;
    }
  }

  LpOutcome solve() {
    if (solved_) {
      if (!dual_iterate()) return LpOutcome{LpStatus::infeasible, 0.0, {}};
      if (primal_iterate(false) == Step::unbounded) return LpOutcome{LpStatus::unbounded, 0.0, {}};
      return extract();
    }
    solved_ = true;
    // Phase 1: minimize the sum of artificials.
    if (std::find(artificial_.begin(), artificial_.end(), 1) != artificial_.end()) {
      std::vector<double> cost(cols_, 0.0);
      for (std::size_t j = 0; j < cols_; ++j) cost[j] = artificial_[j] ? 1.0 : 0.0;
      load_costs(cost);
      const auto status = primal_iterate(true);
      refactor();
      double scale = 1.0;
      for (std::size_t r = 0; r < m_; ++r) scale = std::max(scale, std::abs(at(r, cols_)));
      if (status != Step::optimal || -obj_[cols_] > kFeasibilityTol * scale) {
        return LpOutcome{LpStatus::infeasible, 0.0, {}};
      }
      drive_out_artificials();
    }
    // Phase 2: minimize -objective, artificials barred from entering.
    std::vector<double> cost(cols_, 0.0);
    for (std::size_t j = 0; j < nv_; ++j) {
      cost[j] = -objective_[j];
      cost[nv_ + j] = objective_[j];
    }
    load_costs(cost);
    if (primal_iterate(false) == Step::unbounded) return LpOutcome{LpStatus::unbounded, 0.0, {}};
    return extract();
  }

 private:
  enum class Step { optimal, unbounded };

  double& at(std::size_t r, std::size_t c) { return t_[r * (cols_ + 1) + c]; }

  std::size_t twin(std::size_t c) const { return c < nv_ ? c + nv_ : c - nv_; }

  // Inserts `extra` zero columns before the right-hand side.
  void widen(std::size_t extra) {
    if (extra == 0) return;
    const std::size_t old_w = cols_ + 1;
    const std::size_t new_w = old_w + extra;
    auto relayout = [&](std::vector<double>& buf, std::size_t rows) {
      std::vector<double> out(rows * new_w, 0.0);
      for (std::size_t r = 0; r < rows; ++r) {
        std::copy(buf.begin() + static_cast<std::ptrdiff_t>(r * old_w),
                  buf.begin() + static_cast<std::ptrdiff_t>(r * old_w + cols_),
                  out.begin() + static_cast<std::ptrdiff_t>(r * new_w));
        out[r * new_w + new_w - 1] = buf[r * old_w + cols_];
      }
      buf = std::move(out);
    };
    relayout(a_, m_);
    relayout(t_, m_);
    relayout(obj_, 1);
    cols_ += extra;
    artificial_.resize(cols_, 0);
    basic_.resize(cols_, 0);
    cost_.resize(cols_, 0.0);
  }

  // Rebuilds the tableau as B^-1 [A | b] from the original rows.
  void refactor() {
    if (m_ == 0) return;
    using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const auto rows = static_cast<Eigen::Index>(m_);
    const auto width = static_cast<Eigen::Index>(cols_ + 1);
    const Eigen::Map<const RowMatrix> a0(a_.data(), rows, width);
    Eigen::MatrixXd b(rows, rows);
    for (std::size_t r = 0; r < m_; ++r) {
      b.col(static_cast<Eigen::Index>(r)) = a0.col(static_cast<Eigen::Index>(basis_[r]));
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
    Eigen::Map<RowMatrix> t(t_.data(), rows, width);
    t = lu.solve(a0);
    for (auto& v : t_) {
      if (!std::isfinite(v)) throw Error("simplex basis became singular");
      if (std::abs(v) < 1e-13) v = 0.0;
    }
    for (std::size_t r = 0; r < m_; ++r) {
      for (std::size_t q = 0; q < m_; ++q) at(q, basis_[r]) = q == r ? 1.0 : 0.0;
    }
    load_costs(cost_);
  }

  void load_costs(std::vector<double> cost) {
    cost_ = std::move(cost);
    std::fill(obj_.begin(), obj_.end(), 0.0);
    std::copy(cost_.begin(), cost_.end(), obj_.begin());
    for (std::size_t r = 0; r < m_; ++r) {
      const double cb = cost_[basis_[r]];
      if (cb == 0.0) continue;
      const double* row = &at(r, 0);
      for (std::size_t c = 0; c <= cols_; ++c) obj_[c] -= cb * row[c];
    }
  }

  void pivot(std::size_t pr, std::size_t pc) {
    const std::size_t w = cols_ + 1;
    double* prow = &at(pr, 0);
    const double inv = 1.0 / prow[pc];
    for (std::size_t c = 0; c < w; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    auto eliminate = [&](double* row) {
      const double factor = row[pc];
      if (factor == 0.0) return;
      for (std::size_t c = 0; c < w; ++c) row[c] -= factor * prow[c];
      row[pc] = 0.0;
    };
    for (std::size_t r = 0; r < m_; ++r) {
      if (r != pr) eliminate(&at(r, 0));
    }
    eliminate(obj_.data());
    basic_[basis_[pr]] = 0;
    basic_[pc] = 1;
    basis_[pr] = pc;
    if (++pivots_ % kRefactorInterval == 0) refactor();
  }

  bool may_enter(std::size_t c, bool phase1) const {
    if (basic_[c]) return false;
    if (!phase1 && artificial_[c]) return false;
    // x+ and x- of one variable are never basic together.
    return c >= 2 * nv_ || !basic_[twin(c)];
  }

  // Dantzig pricing; a run of degenerate pivots switches to Bland's rule until
  // the next pivot that moves the vertex, which cannot cycle.
  Step primal_iterate(bool phase1) {
    std::size_t degenerate = 0;
    bool bland = false;
    for (std::size_t iter = 0; iter < kIterationLimit; ++iter) {
      std::size_t enter = cols_;
      double best = -kCostTol;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (obj_[c] < best && may_enter(c, phase1)) {
          enter = c;
          if (bland) break;
          best = obj_[c];
        }
      }
      if (enter == cols_) return Step::optimal;

      std::size_t leave = m_;
      double ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotTol) continue;
        const double q = std::max(0.0, at(r, cols_)) / a;
        if (leave == m_ || q < ratio - 1e-12) {
          ratio = q;
          leave = r;
        } else if (q <= ratio + 1e-12 && basis_[r] < basis_[leave]) {
          ratio = std::min(ratio, q);
          leave = r;
        }
      }
      if (leave == m_) return Step::unbounded;
      degenerate = ratio <= 1e-12 ? degenerate + 1 : 0;
      bland = degenerate > kDegenerateSwitch;
      pivot(leave, enter);
    }
    throw Error("simplex iteration limit reached");
  }

  // Restores primal feasibility while keeping reduced costs nonnegative.
  // Returns false when some row cannot be repaired (the rows are infeasible).
  bool dual_iterate() {
    std::size_t degenerate = 0;
    for (std::size_t iter = 0; iter < kIterationLimit; ++iter) {
      const bool bland = degenerate > kDegenerateSwitch;
      std::size_t leave = m_;
      double worst = -kDualFeasTol;
      for (std::size_t r = 0; r < m_; ++r) {
        const double v = at(r, cols_);
        if (v >= -kDualFeasTol) continue;
        if (bland ? (leave == m_ || basis_[r] < basis_[leave]) : v < worst) {
          leave = r;
          worst = v;
        }
      }
      if (leave == m_) return true;

      std::size_t enter = cols_;
      double ratio = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < cols_; ++c) {
        const double a = at(leave, c);
        if (a >= -kPivotTol || basic_[c] || artificial_[c]) continue;
        if (c < 2 * nv_ && basic_[twin(c)] && basis_[leave] != twin(c)) continue;
        const double q = std::max(0.0, obj_[c]) / -a;
        if (enter == cols_ || q < ratio - 1e-12 ||
            (q <= ratio + 1e-12 && (bland ? c < enter : -a > -at(leave, enter)))) {
          ratio = std::min(ratio, q);
          enter = c;
        }
      }
      if (enter == cols_) return false;
      degenerate = ratio <= 1e-12 ? degenerate + 1 : 0;
      pivot(leave, enter);
    }
    throw Error("dual simplex iteration limit reached");
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (!artificial_[basis_[r]]) continue;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (!artificial_[c] && !basic_[c] && std::abs(at(r, c)) > kPivotTol &&
            (c >= 2 * nv_ || !basic_[twin(c)])) {
          pivot(r, c);
          break;
        }
      }
      // A row left with only artificial entries is redundant; its artificial
      // stays basic at zero and never re-enters.
    }
  }

  LpOutcome extract() {
    refactor();
    std::vector<double> value(cols_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) value[basis_[r]] = at(r, cols_);
    LpOutcome out;
    out.point.resize(nv_);
    for (std::size_t j = 0; j < nv_; ++j) out.point[j] = value[j] - value[nv_ + j];
    out.status = LpStatus::optimal;
    for (std::size_t j = 0; j < nv_; ++j) out.objective += objective_[j] * out.point[j];
    return out;
  }

  std::size_t nv_;
  std::vector<double> objective_;
  std::size_t cols_;
  std::size_t m_ = 0;
  std::vector<double> a_;    // original rows, rhs last
  std::vector<double> t_;    // tableau rows, rhs last
  std::vector<double> obj_;  // reduced costs, minus the objective value last
  std::vector<double> cost_;
  std::vector<std::uint8_t> artificial_;
  std::vector<std::uint8_t> basic_;
  std::vector<std::size_t> basis_;
  std::size_t pivots_ = 0;
  bool solved_ = false;
};

/// Solves, asks `separator` for violated cuts, adds them and repeats until
/// none remain.
template <typename Separator>
LpOutcome cut_loop(DenseSimplex& simplex, std::set<std::string>& seen, Separator&& separator) {
  std::vector<const Constraint*> rows;
  for (std::size_t round = 0; round < kCutRounds; ++round) {
    LpOutcome out = simplex.solve();
    if (out.status != LpStatus::optimal) return out;
    std::vector<Constraint> cuts;
    for (auto& cut : separator(out.point)) {
      if (seen.insert(cut.tag).second) cuts.push_back(std::move(cut));
    }
    if (cuts.empty()) return out;
    rows.clear();
    for (const auto& c : cuts) rows.push_back(&c);
    simplex.add_rows(rows);
  }
  throw Error("cutting-plane loop did not converge");
}

/// Cutting-plane driver shared by the LP and the Chebyshev center.
template <typename Separator>
LpOutcome solve_with_cuts(std::vector<Constraint> owned, const std::vector<const Constraint*>& fixed,
                          std::size_t nv, std::span<const double> objective, Separator&& separator) {
  std::set<std::string> seen;
  for (const auto& c : owned) seen.insert(c.tag);
  DenseSimplex simplex(nv, objective);
  std::vector<const Constraint*> rows = fixed;
  for (const auto& c : owned) rows.push_back(&c);
  simplex.add_rows(rows);
  return cut_loop(simplex, seen, separator);
}

std::vector<Constraint> family_seeds(const LinearConstraintSystem& sys) {
  std::vector<Constraint> seeds;
  for (const auto& f : sys.families()) {
    auto rows = f->seed_rows(sys.variable_count());
    seeds.insert(seeds.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
  }
  return seeds;
}

std::vector<Constraint> family_cuts(const LinearConstraintSystem& sys, const std::vector<double>& x) {
  std::vector<Constraint> cuts;
  for (const auto& f : sys.families()) {
    auto rows = f->separate(x, 1e-10, sys.variable_count());
    cuts.insert(cuts.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
  }
  return cuts;
}

}  // namespace

LpOutcome solve_max(const LinearConstraintSystem& sys) {
  std::vector<const Constraint*> fixed;
  for (const auto& c : sys.constraints()) fixed.push_back(&c);
  return solve_with_cuts(family_seeds(sys), fixed, sys.variable_count(), sys.objective(),
                         [&](const std::vector<double>& x) { return family_cuts(sys, x); });
}

struct WarmStartedLp::State {
  LinearConstraintSystem sys;
  std::optional<DenseSimplex> simplex;
  std::set<std::string> seen;
  LpOutcome base;
};

WarmStartedLp::WarmStartedLp(const LinearConstraintSystem& sys) : state_(std::make_shared<State>()) {
  auto& st = *state_;
  st.sys = sys;
  auto seeds = family_seeds(st.sys);
  for (const auto& c : seeds) st.seen.insert(c.tag);
  for (const auto& c : st.sys.constraints()) st.seen.insert(c.tag);
  st.simplex.emplace(st.sys.variable_count(), st.sys.objective());
  std::vector<const Constraint*> rows;
  for (const auto& c : st.sys.constraints()) rows.push_back(&c);
  for (const auto& c : seeds) rows.push_back(&c);
  st.simplex->add_rows(rows);
  st.base = cut_loop(*st.simplex, st.seen, [&](const std::vector<double>& x) { return family_cuts(st.sys, x); });
}

const LpOutcome& WarmStartedLp::base() const { return state_->base; }

LpOutcome WarmStartedLp::solve_with(std::span<const Constraint> extra) const {
  const auto& st = *state_;
  for (const auto& c : extra) {
    if (c.coefficients.size() != st.sys.variable_count()) throw InvalidArgument("extra row has the wrong length");
    if (c.relation == Relation::equal) throw InvalidArgument("extra rows must be inequalities");
  }
  if (st.base.status == LpStatus::infeasible) return st.base;
  if (st.base.status == LpStatus::unbounded) {
    auto aug = st.sys;
    for (const auto& c : extra) aug.add_constraint(c);
    return solve_max(aug);
  }
  DenseSimplex simplex = *st.simplex;
  auto seen = st.seen;
  std::vector<const Constraint*> rows;
  for (const auto& c : extra) {
    seen.insert(c.tag);
    rows.push_back(&c);
  }
  simplex.add_rows(rows);
  return cut_loop(simplex, seen, [&](const std::vector<double>& x) { return family_cuts(st.sys, x); });
}

std::vector<double> chebyshev_center(const LinearConstraintSystem& sys) {
  const std::size_t nv = sys.variable_count();
  std::vector<const Constraint*> equalities;
  for (const auto& c : sys.constraints()) {
    if (c.relation == Relation::equal) equalities.push_back(&c);
  }
  const auto hull = detail::affine_hull(equalities, nv);
  if (hull.rank == 0) throw EmptyInterior("equality constraints leave no free direction");

  // Variables: x (nv) followed by the radius.
  const std::size_t radius = nv;
  auto lift = [&](const Constraint& c) {
    Constraint lifted;
    lifted.coefficients = c.coefficients;
    lifted.coefficients.push_back(0.0);
    lifted.relation = c.relation;
    lifted.bound = c.bound;
    lifted.tag = c.tag;
    if (c.relation != Relation::equal) {
      const double norm = hull.projected_norm(c.coefficients);
      lifted.coefficients[radius] = c.relation == Relation::less_equal ? norm : -norm;
    }
    return lifted;
  };

  std::vector<Constraint> owned;
  for (const auto& c : sys.constraints()) owned.push_back(lift(c));
  for (const auto& f : sys.families()) {
    for (const auto& c : f->seed_rows(nv)) owned.push_back(lift(c));
  }
  Constraint nonnegative{std::vector<double>(nv + 1, 0.0), Relation::greater_equal, 0.0, "radius>=0"};
  nonnegative.coefficients[radius] = 1.0;
  Constraint cap{std::vector<double>(nv + 1, 0.0), Relation::less_equal, 1.0, "radius<=1"};
  cap.coefficients[radius] = 1.0;
  owned.push_back(std::move(nonnegative));
  owned.push_back(std::move(cap));

  std::vector<double> objective(nv + 1, 0.0);
  objective[radius] = 1.0;
  const auto out = solve_with_cuts(std::move(owned), {}, nv + 1, objective, [&](const std::vector<double>& z) {
    std::vector<Constraint> cuts;
    const std::span<const double> x(z.data(), nv);
    for (const auto& f : sys.families()) {
      for (const auto& c : f->candidates(x, nv)) {
        auto lifted = lift(c);
        if (lifted.slack(z) < -1e-10) cuts.push_back(std::move(lifted));
      }
    }
    return cuts;
  });
  if (out.status == LpStatus::infeasible) throw InfeasibleSystem("constraint system has no feasible point");
  if (out.status != LpStatus::optimal) throw Error("Chebyshev LP did not reach an optimum");
  if (out.point[radius] <= 1e-9) throw EmptyInterior("polytope has an empty relative interior");
  std::vector<double> center(out.point.begin(), out.point.begin() + static_cast<std::ptrdiff_t>(nv));
  for (const auto& f : sys.families()) {
    if (f->min_slack(center) <= 0.0) throw EmptyInterior("center touches the " + f->name() + " family");
  }
  return center;
}

}  // namespace mcda

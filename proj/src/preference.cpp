#include "mcda/preference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "mcda/errors.hpp"

namespace mcda {

namespace {

struct KindInfo {
  StatementKind kind;
  std::string_view name;
  std::size_t arity;
  bool alternatives;
};

constexpr std::array<KindInfo, 11> kKinds{{
    {StatementKind::alt_strict, "alt-strict", 2, true},
    {StatementKind::alt_indifferent, "alt-indifferent", 2, true},
    {StatementKind::alt_intensity_strict, "alt-intensity-strict", 4, true},
    {StatementKind::alt_intensity_equal, "alt-intensity-equal", 4, true},
    {StatementKind::crit_more_important, "crit-more-important", 2, false},
    {StatementKind::crit_equal, "crit-equal", 2, false},
    {StatementKind::crit_positive_interaction, "crit-positive-interaction", 2, false},
    {StatementKind::crit_negative_interaction, "crit-negative-interaction", 2, false},
    {StatementKind::crit_interaction_compare, "crit-interaction-compare", 4, false},
    {StatementKind::crit_intensity_strict, "crit-intensity-strict", 4, false},
    {StatementKind::crit_intensity_equal, "crit-intensity-equal", 4, false},
}};

const KindInfo& info(StatementKind k) {
  for (const auto& i : kKinds) {
    if (i.kind == k) return i;
  }
  throw InvalidArgument("unknown statement kind");
}

std::size_t coefficient_count(const CriteriaHierarchy& h) {
  return MobiusCapacity2Add::coefficient_count(h.elementary_count());
}

// a - b, optionally scaled, into a row one longer than the Möbius block.
std::vector<double> lifted(const std::vector<double>& a, const std::vector<double>* b, double eps) {
  std::vector<double> out(a.size() + 1, 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - (b ? (*b)[k] : 0.0);
  out.back() = eps;
  return out;
}

std::vector<double> minus(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

Constraint make(std::vector<double> row, Relation rel, std::string tag) {
  return Constraint{std::move(row), rel, 0.0, std::move(tag)};
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

std::string_view to_string(StatementKind k) { return info(k).name; }

StatementKind statement_kind_from_string(std::string_view text) {
  for (const auto& i : kKinds) {
    if (i.name == text) return i.kind;
  }
  throw InvalidArgument("unknown statement kind '" + std::string(text) + "'");
}

bool is_alternative_statement(StatementKind k) { return info(k).alternatives; }
std::size_t statement_arity(StatementKind k) { return info(k).arity; }

std::string_view to_string(InteractionSign s) { return s == InteractionSign::positive ? "positive" : "negative"; }

InteractionSign interaction_sign_from_string(std::string_view text) {
  if (text == "positive" || text == "+") return InteractionSign::positive;
  if (text == "negative" || text == "-") return InteractionSign::negative;
  throw InvalidArgument("unknown interaction sign '" + std::string(text) + "'");
}

std::vector<double> choquet_row(const CriteriaHierarchy& h, const NodeId& r, std::span<const double> x) {
  const std::size_t n = h.elementary_count();
  if (x.size() != n) throw InvalidArgument("evaluation vector has the wrong length");
  const CriteriaMask e = elementary_descendants(h, r);
  std::vector<double> row(coefficient_count(h), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(e & criterion_bit(i))) continue;
    row[i] = x[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (e & criterion_bit(j)) row[MobiusCapacity2Add::pair_index(n, i, j)] = std::min(x[i], x[j]);
    }
  }
  return row;
}

std::vector<double> importance_row(const CriteriaHierarchy& h, const NodeId& r) {
  const std::vector<double> ones(h.elementary_count(), 1.0);
  return choquet_row(h, r, ones);
}

std::vector<double> shapley_row(const CriteriaHierarchy& h, const NodeId& r, const NodeId& member, int level) {
  const auto members = h.level_members(r, level);
  if (std::find(members.begin(), members.end(), member) == members.end()) {
    throw InvalidArgument("criterion " + member.str() + " is not at level " + std::to_string(level) + " below " +
                          r.str());
  }
  const CriteriaMask own = elementary_descendants(h, member);
  CriteriaMask rest = 0;
  for (const auto& other : members) {
    if (other != member) rest |= elementary_descendants(h, other);
  }
  const std::size_t n = h.elementary_count();
  std::vector<double> row(coefficient_count(h), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(own & criterion_bit(i))) continue;
    row[i] = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto k = MobiusCapacity2Add::pair_index(n, std::min(i, j), std::max(i, j));
      if ((own & criterion_bit(j)) && j > i) row[k] += 1.0;
      if (rest & criterion_bit(j)) row[k] += 0.5;
    }
  }
  return row;
}

std::vector<double> interaction_row(const CriteriaHierarchy& h, const NodeId& r, const NodeId& first,
                                    const NodeId& second, int level) {
  if (first == second) throw InvalidArgument("interaction of a criterion with itself");
  const auto members = h.level_members(r, level);
  for (const auto* id : {&first, &second}) {
    if (std::find(members.begin(), members.end(), *id) == members.end()) {
      throw InvalidArgument("criterion " + id->str() + " is not at level " + std::to_string(level) + " below " +
                            r.str());
    }
  }
  const CriteriaMask e1 = elementary_descendants(h, first);
  const CriteriaMask e2 = elementary_descendants(h, second);
  const std::size_t n = h.elementary_count();
  std::vector<double> row(coefficient_count(h), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(e1 & criterion_bit(i))) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (e2 & criterion_bit(j)) row[MobiusCapacity2Add::pair_index(n, std::min(i, j), std::max(i, j))] += 1.0;
    }
  }
  return row;
}

// ---------------------------------------------------------------------------

MonotonicityFamily::MonotonicityFamily(std::vector<std::string> criteria, std::vector<std::size_t> variables)
    : criteria_(std::move(criteria)), variables_(std::move(variables)) {
  if (variables_.size() != MobiusCapacity2Add::coefficient_count(criteria_.size())) {
    throw InvalidArgument("monotonicity family needs one variable per Möbius coefficient");
  }
}

std::size_t MonotonicityFamily::pair_var(std::size_t i, std::size_t j) const {
  return variables_[MobiusCapacity2Add::pair_index(n(), std::min(i, j), std::max(i, j))];
}

Constraint MonotonicityFamily::row(std::size_t i, CriteriaMask others, std::size_t variable_count) const {
  Constraint c;
  c.coefficients.assign(variable_count, 0.0);
  c.coefficients[singleton_var(i)] = 1.0;
  c.relation = Relation::greater_equal;
  std::string tag = "monotonicity(" + criteria_[i] + ";{";
  bool first = true;
  for (std::size_t j = 0; j < n(); ++j) {
    if (!(others & criterion_bit(j))) continue;
    c.coefficients[pair_var(i, j)] = 1.0;
    tag += (first ? "" : ",") + criteria_[j];
    first = false;
  }
  c.tag = tag + "})";
  return c;
}

std::vector<Constraint> MonotonicityFamily::seed_rows(std::size_t variable_count) const {
  std::vector<Constraint> rows;
  for (std::size_t i = 0; i < n(); ++i) {
    const CriteriaMask all = all_criteria(n()) & ~criterion_bit(i);
    rows.push_back(row(i, 0, variable_count));
    for (std::size_t j = 0; j < n(); ++j) {
      if (j != i) rows.push_back(row(i, criterion_bit(j), variable_count));
    }
    if (n() > 2) rows.push_back(row(i, all, variable_count));
  }
  return rows;
}

std::vector<Constraint> MonotonicityFamily::separate(std::span<const double> x, double tol,
                                                     std::size_t variable_count) const {
  std::vector<Constraint> rows;
  for (std::size_t i = 0; i < n(); ++i) {
    double value = x[singleton_var(i)];
    CriteriaMask t = 0;
    for (std::size_t j = 0; j < n(); ++j) {
      if (j == i) continue;
      const double mij = x[pair_var(i, j)];
      if (mij < 0.0) {
        value += mij;
        t |= criterion_bit(j);
      }
    }
    if (value < -tol) rows.push_back(row(i, t, variable_count));
  }
  return rows;
}

std::vector<Constraint> MonotonicityFamily::candidates(std::span<const double> x,
                                                       std::size_t variable_count) const {
  std::vector<Constraint> rows;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n(); ++i) {
    order.clear();
    for (std::size_t j = 0; j < n(); ++j) {
      if (j != i) order.push_back(j);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x[pair_var(i, a)] < x[pair_var(i, b)]; });
    CriteriaMask t = 0;
    rows.push_back(row(i, t, variable_count));
    for (std::size_t j : order) {
      t |= criterion_bit(j);
      rows.push_back(row(i, t, variable_count));
    }
  }
  return rows;
}

double MonotonicityFamily::min_slack(std::span<const double> x) const {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n(); ++i) {
    double value = x[singleton_var(i)];
    for (std::size_t j = 0; j < n(); ++j) {
      if (j != i) value += std::min(0.0, x[pair_var(i, j)]);
    }
    worst = std::min(worst, value);
  }
  return worst;
}

// Largest t >= 0 keeping g(t) = m_i + t d_i + sum_j min(0, m_ij + t d_ij) >= 0,
// with d scaled by sign. g is concave and piecewise linear.
double MonotonicityFamily::upper_step(std::size_t i, std::span<const double> x, std::span<const double> d,
                                      double sign) const {
  double g = x[singleton_var(i)];
  double slope = sign * d[singleton_var(i)];
  std::vector<std::pair<double, double>> events;  // (t, slope change)
  for (std::size_t j = 0; j < n(); ++j) {
    if (j == i) continue;
    const double m = x[pair_var(i, j)];
    const double dj = sign * d[pair_var(i, j)];
    if (m < 0.0 || (m == 0.0 && dj < 0.0)) {
      g += m;
      slope += dj;
    }
    if (dj != 0.0) {
      const double t = -m / dj;
      if (t > 0.0) events.emplace_back(t, dj < 0.0 ? dj : -dj);
    }
  }
  std::sort(events.begin(), events.end());
  g = std::max(g, 0.0);
  double t = 0.0;
  for (const auto& [te, delta] : events) {
    if (slope < 0.0) {
      const double root = t + g / -slope;
      if (root <= te) return root;
    }
    g += slope * (te - t);
    t = te;
    slope += delta;
  }
  if (slope < 0.0) return t + g / -slope;
  return std::numeric_limits<double>::infinity();
}

std::pair<double, double> MonotonicityFamily::chord(std::span<const double> x, std::span<const double> d) const {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n(); ++i) {
    hi = std::min(hi, upper_step(i, x, d, 1.0));
    lo = std::max(lo, -upper_step(i, x, d, -1.0));
  }
  return {lo, hi};
}

std::shared_ptr<const ConstraintFamily> MonotonicityFamily::remapped(std::span<const std::ptrdiff_t> map) const {
  std::vector<std::size_t> vars;
  vars.reserve(variables_.size());
  for (std::size_t v : variables_) {
    if (v >= map.size() || map[v] < 0) throw InvalidArgument("monotonicity family lost one of its variables");
    vars.push_back(static_cast<std::size_t>(map[v]));
  }
  return std::make_shared<MonotonicityFamily>(criteria_, std::move(vars));
}

// ---------------------------------------------------------------------------

namespace {

std::size_t alternative(const PerformanceTable& table, const std::string& id) {
  if (auto a = table.alternative_index(id)) return *a;
  throw InvalidArgument("unknown alternative '" + id + "'");
}

}  // namespace

std::vector<Constraint> translate(const PreferenceStatement& st, const CriteriaHierarchy& h,
                                  const PerformanceTable* table, std::string_view tag_view) {
  const std::string tag(tag_view);
  const auto& ki = info(st.kind);
  if (st.subjects.size() != ki.arity) {
    throw InvalidArgument(std::string(ki.name) + " takes " + std::to_string(ki.arity) + " subjects, got " +
                          std::to_string(st.subjects.size()));
  }
  if (!h.contains(st.scope)) throw UnknownNode(st.scope.str());
  if (h.node(st.scope).is_leaf()) throw InvalidArgument("scope " + st.scope.str() + " is an elementary criterion");

  std::vector<Constraint> out;
  using R = Relation;

  if (ki.alternatives) {
    if (table == nullptr) throw InvalidArgument("alternative statements need a performance table");
    if (table->criteria_count() != h.elementary_count()) {
      throw InvalidArgument("performance table and hierarchy disagree on the number of criteria");
    }
    std::vector<std::vector<double>> c;
    for (const auto& id : st.subjects) {
      c.push_back(choquet_row(h, st.scope, table->normalized_row(alternative(*table, id))));
    }
    switch (st.kind) {
      case StatementKind::alt_strict:
        out.push_back(make(lifted(c[0], &c[1], -1.0), R::greater_equal, tag));
        break;
      case StatementKind::alt_indifferent:
        out.push_back(make(lifted(c[0], &c[1], 0.0), R::equal, tag));
        break;
      case StatementKind::alt_intensity_strict:
      case StatementKind::alt_intensity_equal: {
        const auto lhs = minus(c[0], c[1]);
        const auto rhs = minus(c[2], c[3]);
        const bool strict = st.kind == StatementKind::alt_intensity_strict;
        out.push_back(make(lifted(lhs, &rhs, strict ? -1.0 : 0.0), strict ? R::greater_equal : R::equal, tag));
        out.push_back(make(lifted(c[2], &c[3], -1.0), R::greater_equal, tag + "#2"));
        break;
      }
      default:
        break;
    }
    return out;
  }

  const int level = st.level == 0 ? st.scope.level() + 1 : st.level;
  std::vector<NodeId> g;
  for (const auto& s : st.subjects) g.push_back(h.resolve(s));
  const auto members = h.level_members(st.scope, level);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (std::find(members.begin(), members.end(), g[k]) == members.end()) {
      throw InvalidArgument("criterion '" + st.subjects[k] + "' is not at level " + std::to_string(level) +
                            " below " + st.scope.str());
    }
  }
  auto phi = [&](std::size_t k) { return shapley_row(h, st.scope, g[k], level); };
  auto inter = [&](std::size_t k1, std::size_t k2) { return interaction_row(h, st.scope, g[k1], g[k2], level); };

  switch (st.kind) {
    case StatementKind::crit_more_important: {
      const auto b = phi(1);
      out.push_back(make(lifted(phi(0), &b, -1.0), R::greater_equal, tag));
      break;
    }
    case StatementKind::crit_equal: {
      const auto b = phi(1);
      out.push_back(make(lifted(phi(0), &b, 0.0), R::equal, tag));
      break;
    }
    case StatementKind::crit_positive_interaction:
      out.push_back(make(lifted(inter(0, 1), nullptr, -1.0), R::greater_equal, tag));
      break;
    case StatementKind::crit_negative_interaction:
      out.push_back(make(lifted(inter(0, 1), nullptr, 1.0), R::less_equal, tag));
      break;
    case StatementKind::crit_interaction_compare: {
      const auto second = inter(2, 3);
      if (st.sign == InteractionSign::positive) {
        out.push_back(make(lifted(inter(0, 1), &second, -1.0), R::greater_equal, tag));
        out.push_back(make(lifted(second, nullptr, -1.0), R::greater_equal, tag + "#2"));
      } else {
        out.push_back(make(lifted(inter(0, 1), &second, 1.0), R::less_equal, tag));
        out.push_back(make(lifted(second, nullptr, 1.0), R::less_equal, tag + "#2"));
      }
      break;
    }
    case StatementKind::crit_intensity_strict:
    case StatementKind::crit_intensity_equal: {
      const auto lhs = minus(phi(0), phi(1));
      const auto rhs = minus(phi(2), phi(3));
      if (st.kind == StatementKind::crit_intensity_strict) {
        out.push_back(make(lifted(lhs, &rhs, -1.0), R::greater_equal, tag));
        out.push_back(make(lifted(rhs, nullptr, -1.0), R::greater_equal, tag + "#2"));
      } else {
        out.push_back(make(lifted(lhs, &rhs, 0.0), R::equal, tag));
      }
      break;
    }
    default:
      break;
  }
  return out;
}

LinearConstraintSystem assemble_edm(std::span<const PreferenceStatement> statements, const CriteriaHierarchy& h,
                                    const PerformanceTable* table) {
  const std::size_t n = h.elementary_count();
  const std::size_t p = MobiusCapacity2Add::coefficient_count(n);
  std::vector<std::string> names;
  for (const auto& leaf : h.elementary()) names.push_back(leaf.id);

  LinearConstraintSystem sys;
  for (std::size_t i = 0; i < n; ++i) sys.add_variable("m(" + names[i] + ")");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) sys.add_variable("m(" + names[i] + "," + names[j] + ")");
  }
  const std::size_t eps = sys.add_variable("eps");

  std::vector<double> normalization(p + 1, 1.0);
  normalization[eps] = 0.0;
  sys.add_constraint(Constraint{std::move(normalization), Relation::equal, 1.0, "normalization"});

  std::vector<std::size_t> vars(p);
  std::iota(vars.begin(), vars.end(), std::size_t{0});
  sys.add_family(std::make_shared<MonotonicityFamily>(names, std::move(vars)));

  std::vector<std::string> problems;
  for (std::size_t s = 0; s < statements.size(); ++s) {
    try {
      for (auto& c : translate(statements[s], h, table, "statement " + std::to_string(s + 1))) {
        sys.add_constraint(std::move(c));
      }
    } catch (const Error& e) {
      problems.push_back("statement " + std::to_string(s + 1) + ": " + e.what());
    }
  }
  if (!problems.empty()) throw ValidationFailed(std::move(problems));

  std::vector<double> unit(p + 1, 0.0);
  unit[eps] = 1.0;
  sys.add_constraint(Constraint{unit, Relation::greater_equal, 0.0, "eps-nonnegative"});
  sys.add_constraint(Constraint{unit, Relation::less_equal, 1.0, "eps-cap"});
  sys.set_objective(unit);
  sys.set_epsilon_variable(eps);
  return sys;
}

ConsistencyResult check_consistency(const LinearConstraintSystem& sys) {
  const auto lp = solve_max(sys);
  ConsistencyResult out;
  out.status = lp.status;
  if (lp.status == LpStatus::optimal) {
    out.eps_star = lp.objective;
    out.feasible = lp.objective > kEpsilonTol;
    out.point = lp.point;
  }
  return out;
}

namespace {

std::size_t epsilon_of(const LinearConstraintSystem& sys) {
  if (!sys.epsilon_variable()) throw InvalidArgument("system has no epsilon variable");
  return *sys.epsilon_variable();
}

// max eps subject to sys and lhs - rhs - eps_coef * eps >= 0.
LpOutcome solve_augmented(const LinearConstraintSystem& sys, const std::vector<double>& lhs,
                          const std::vector<double>& rhs, double eps_coef, const char* tag) {
  const std::size_t eps = epsilon_of(sys);
  LinearConstraintSystem aug = sys;
  std::vector<double> row(sys.variable_count(), 0.0);
  for (std::size_t k = 0; k < lhs.size(); ++k) row[k] = lhs[k] - rhs[k];
  row[eps] = -eps_coef;
  aug.add_constraint(Constraint{std::move(row), Relation::greater_equal, 0.0, tag});
  return solve_max(aug);
}

constexpr std::size_t kNapBatch = 16;

Constraint pair_row(std::size_t nv, std::size_t eps, const std::vector<double>& lhs, const std::vector<double>& rhs,
                    double eps_coef, const char* tag) {
  std::vector<double> row(nv, 0.0);
  for (std::size_t k = 0; k < lhs.size(); ++k) row[k] = lhs[k] - rhs[k];
  row[eps] = -eps_coef;
  return Constraint{std::move(row), Relation::greater_equal, 0.0, tag};
}

bool necessary_lp(const LinearConstraintSystem& sys, const std::vector<double>& ca, const std::vector<double>& cb) {
  const auto lp = solve_augmented(sys, cb, ca, 1.0, "necessary-test");
  return lp.status != LpStatus::optimal || lp.objective <= kEpsilonTol;
}

bool possible_lp(const LinearConstraintSystem& sys, const std::vector<double>& ca, const std::vector<double>& cb) {
  const auto lp = solve_augmented(sys, ca, cb, 0.0, "possible-test");
  return lp.status == LpStatus::optimal && lp.objective > kEpsilonTol;
}

// C_{mu_r} needs mu(E(g_r)) > 0; ask for it at least at level eps.
LinearConstraintSystem node_system(const LinearConstraintSystem& sys, const CriteriaHierarchy& h, const NodeId& r) {
  const std::size_t eps = epsilon_of(sys);
  auto row = importance_row(h, r);
  row.resize(sys.variable_count(), 0.0);
  row[eps] = -1.0;
  LinearConstraintSystem out = sys;
  out.add_constraint(Constraint{std::move(row), Relation::greater_equal, 0.0, "node-importance"});
  return out;
}

std::vector<std::vector<double>> node_rows(const CriteriaHierarchy& h, const PerformanceTable& table,
                                           const NodeId& r) {
  if (table.criteria_count() != h.elementary_count()) {
    throw InvalidArgument("performance table and hierarchy disagree on the number of criteria");
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(table.alternative_count());
  for (std::size_t a = 0; a < table.alternative_count(); ++a) {
    rows.push_back(choquet_row(h, r, table.normalized_row(a)));
  }
  return rows;
}

}  // namespace

bool necessary(const LinearConstraintSystem& sys, const CriteriaHierarchy& h, const PerformanceTable& table,
               const NodeId& r, std::size_t a, std::size_t b) {
  return necessary_lp(node_system(sys, h, r), choquet_row(h, r, table.normalized_row(a)),
                      choquet_row(h, r, table.normalized_row(b)));
}

bool possible(const LinearConstraintSystem& sys, const CriteriaHierarchy& h, const PerformanceTable& table,
              const NodeId& r, std::size_t a, std::size_t b) {
  return possible_lp(node_system(sys, h, r), choquet_row(h, r, table.normalized_row(a)),
                     choquet_row(h, r, table.normalized_row(b)));
}

bool weakly_dominates(const PerformanceTable& table, std::size_t a, std::size_t b, CriteriaMask mask) {
  const auto xa = table.normalized_row(a);
  const auto xb = table.normalized_row(b);
  for (std::size_t i = 0; i < xa.size(); ++i) {
    if ((mask & criterion_bit(i)) && xa[i] < xb[i]) return false;
  }
  return true;
}

DominanceMatrix dominance(const PerformanceTable& table) {
  const std::size_t na = table.alternative_count();
  DominanceMatrix d{na, std::vector<std::uint8_t>(na * na, 0)};
  for (std::size_t a = 0; a < na; ++a) {
    const auto xa = table.normalized_row(a);
    for (std::size_t b = 0; b < na; ++b) {
      const auto xb = table.normalized_row(b);
      bool geq = true;
      bool strict = false;
      for (std::size_t i = 0; i < xa.size() && geq; ++i) {
        geq = xa[i] >= xb[i];
        strict = strict || xa[i] > xb[i];
      }
      d.cells[a * na + b] = geq && strict;
    }
  }
  return d;
}

NapRelation nap_relation(const LinearConstraintSystem& edm, const CriteriaHierarchy& h,
                         const PerformanceTable& table, const NodeId& r, const NapOptions& options) {
  const std::size_t na = table.alternative_count();
  const auto rows = node_rows(h, table, r);
  if (!check_consistency(edm).feasible) {
    throw InfeasibleSystem("the preference statements admit no compatible capacity");
  }
  const auto sys = node_system(edm, h, r);
  const auto consistency = check_consistency(sys);
  if (!consistency.feasible) throw ZeroImportance(r.str());

  NapRelation rel;
  rel.node = r;
  rel.size = na;
  rel.necessary_cells.assign(na * na, 0);
  rel.possible_cells.assign(na * na, 0);
  std::vector<std::uint8_t> settled_n(na * na, 0);
  std::vector<std::uint8_t> settled_p(na * na, 0);
  for (std::size_t a = 0; a < na; ++a) {
    rel.necessary_cells[a * na + a] = rel.possible_cells[a * na + a] = 1;
    settled_n[a * na + a] = settled_p[a * na + a] = 1;
  }

  const std::size_t p = rows.front().size();
  const std::size_t nv = sys.variable_count();
  const std::size_t eps = epsilon_of(sys);
  std::vector<double> values(na);
  // A compatible capacity with a positive eps settles every cell it orders.
  const auto apply_witness = [&](std::span<const double> point, double witness_eps) {
    if (witness_eps <= 2.0 * kEpsilonTol) return;
    for (std::size_t a = 0; a < na; ++a) values[a] = dot(rows[a], point.first(p));
    for (std::size_t a = 0; a < na; ++a) {
      for (std::size_t b = 0; b < na; ++b) {
        const std::size_t k = a * na + b;
        if (!settled_p[k] && values[a] - values[b] >= 0.0) {
          rel.possible_cells[k] = 1;
          settled_p[k] = 1;
        }
        if (!settled_n[k] && values[b] - values[a] > 2.0 * kEpsilonTol) {
          rel.necessary_cells[k] = 0;
          settled_n[k] = 1;
        }
      }
    }
  };

  if (options.shortcuts) {
    const CriteriaMask e = elementary_descendants(h, r);
    for (std::size_t a = 0; a < na; ++a) {
      for (std::size_t b = 0; b < na; ++b) {
        if (a != b && weakly_dominates(table, a, b, e)) {
          rel.necessary_cells[a * na + b] = rel.possible_cells[a * na + b] = 1;
          settled_n[a * na + b] = settled_p[a * na + b] = 1;
        }
      }
    }
    // Witnesses: the eps maximizer, and for each alternative a capacity
    // pushing it up, with eps held at half its optimum.
    apply_witness(consistency.point, consistency.eps_star);
    const auto fixed = sys.with_fixed_variable(eps, consistency.eps_star / 2.0);
    std::vector<double> mean(p, 0.0);
    for (const auto& row : rows) {
      for (std::size_t k = 0; k < p; ++k) mean[k] += row[k] / static_cast<double>(na);
    }
    std::vector<LpOutcome> pushes(na);
#pragma omp parallel for schedule(dynamic) if (options.parallel)
    for (std::ptrdiff_t a = 0; a < static_cast<std::ptrdiff_t>(na); ++a) {
      auto local = fixed;
      std::vector<double> objective(p);
      for (std::size_t k = 0; k < p; ++k) objective[k] = rows[static_cast<std::size_t>(a)][k] - mean[k];
      local.set_objective(std::move(objective));
      pushes[static_cast<std::size_t>(a)] = solve_max(local);
    }
    for (const auto& lp : pushes) {
      if (lp.status == LpStatus::optimal) apply_witness(lp.point, consistency.eps_star / 2.0);
    }
  }

  // LPs for the open cells, in batches; index 2k is necessary, 2k+1 possible.
  // With shortcuts, each optimum found is a witness for the cells still open
  // and the LPs start from the solved base system.
  const std::optional<WarmStartedLp> warm = options.shortcuts ? std::optional<WarmStartedLp>(sys) : std::nullopt;
  std::vector<std::size_t> work;
  std::size_t next = 0;
  const std::size_t batch = options.shortcuts ? kNapBatch : na * na * 2;
  while (true) {
    work.clear();
    for (; next < 2 * na * na && work.size() < batch; ++next) {
      const std::size_t k = next / 2;
      if (next % 2 == 0 ? !settled_n[k] : !settled_p[k]) work.push_back(next);
    }
    if (work.empty()) break;
    std::vector<LpOutcome> answers(work.size());
#pragma omp parallel for schedule(dynamic) if (options.parallel)
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(work.size()); ++t) {
      const std::size_t item = work[static_cast<std::size_t>(t)];
      const std::size_t k = item / 2;
      const auto& ca = rows[k / na];
      const auto& cb = rows[k % na];
      const Constraint row = item % 2 == 0 ? pair_row(nv, eps, cb, ca, 1.0, "necessary-test")
                                           : pair_row(nv, eps, ca, cb, 0.0, "possible-test");
      if (options.shortcuts) {
        answers[static_cast<std::size_t>(t)] = warm->solve_with(std::span(&row, 1));
      } else {
        auto aug = sys;
        aug.add_constraint(row);
        answers[static_cast<std::size_t>(t)] = solve_max(aug);
      }
    }
    rel.lp_count += work.size();
    for (std::size_t t = 0; t < work.size(); ++t) {
      const std::size_t k = work[t] / 2;
      const auto& lp = answers[t];
      const bool positive = lp.status == LpStatus::optimal && lp.objective > kEpsilonTol;
      if (work[t] % 2 == 0) {
        rel.necessary_cells[k] = !positive;
        settled_n[k] = 1;
      } else {
        rel.possible_cells[k] = positive;
        settled_p[k] = 1;
      }
    }
    if (options.shortcuts) {
      for (const auto& lp : answers) {
        if (lp.status == LpStatus::optimal) apply_witness(lp.point, lp.point[eps]);
      }
    }
  }
  return rel;
}

InconsistencyDiagnostic diagnose_inconsistency(std::span<const PreferenceStatement> statements,
                                               const CriteriaHierarchy& h, const PerformanceTable* table) {
  auto feasible_without = [&](const std::vector<std::size_t>& removed) {
    std::vector<PreferenceStatement> kept;
    for (std::size_t s = 0; s < statements.size(); ++s) {
      if (std::find(removed.begin(), removed.end(), s) == removed.end()) kept.push_back(statements[s]);
    }
    return check_consistency(assemble_edm(kept, h, table)).feasible;
  };
  if (feasible_without({})) throw InvalidArgument("statement set is consistent; nothing to diagnose");

  InconsistencyDiagnostic out;
  for (std::size_t s = 0; s < statements.size(); ++s) {
    if (feasible_without({s})) out.removals.push_back({s});
  }
  if (!out.removals.empty()) return out;
  for (std::size_t s = 0; s < statements.size(); ++s) {
    for (std::size_t t = s + 1; t < statements.size(); ++t) {
      if (feasible_without({s, t})) out.removals.push_back({s, t});
    }
  }
  return out;
}

}  // namespace mcda

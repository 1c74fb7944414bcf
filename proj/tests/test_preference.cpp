#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "mcda/errors.hpp"
#include "mcda/preference.hpp"
#include "support.hpp"

using namespace mcda;

namespace {

PerformanceTable two_by_two(std::vector<double> values) {
  return PerformanceTable::from_normalized({{"a", ""}, {"b", ""}}, {"g1", "g2"}, std::move(values));
}

PreferenceStatement alt(StatementKind k, std::vector<std::string> s) {
  return PreferenceStatement{k, NodeId{}, 0, std::move(s), {}, ""};
}

PreferenceStatement crit(StatementKind k, std::vector<std::string> s, NodeId scope = {}, int level = 0) {
  return PreferenceStatement{k, std::move(scope), level, std::move(s), {}, ""};
}

double eval(const Constraint& c, std::span<const double> m, double eps) {
  std::vector<double> x(m.begin(), m.end());
  x.push_back(eps);
  return c.activity(x) - c.bound;
}

double slack(const Constraint& c, std::span<const double> m, double eps) {
  std::vector<double> x(m.begin(), m.end());
  x.push_back(eps);
  return c.slack(x);
}

}  // namespace

TEST_CASE("statement kind names round-trip") {
  for (auto k : {StatementKind::alt_strict, StatementKind::crit_interaction_compare,
                 StatementKind::crit_intensity_equal}) {
    CHECK(statement_kind_from_string(to_string(k)) == k);
  }
  CHECK(to_string(StatementKind::alt_intensity_strict) == "alt-intensity-strict");
  CHECK_THROWS_AS(statement_kind_from_string("better"), InvalidArgument);
}

TEST_CASE("alternative strict preference expands the Choquet numerators") {
  const auto h = CriteriaHierarchy::flat({"g1", "g2"});
  const auto t = two_by_two({0.2, 0.8, 0.5, 0.1});
  const auto rows = translate(alt(StatementKind::alt_strict, {"a", "b"}), h, &t, "s");
  REQUIRE(rows.size() == 1);
  // 0.2m1 + 0.8m2 + 0.2m12 >= 0.5m1 + 0.1m2 + 0.1m12 + eps
  const std::vector<double> expected{0.2 - 0.5, 0.8 - 0.1, 0.2 - 0.1, -1.0};
  for (std::size_t k = 0; k < 4; ++k) CHECK(rows[0].coefficients[k] == doctest::Approx(expected[k]));
  CHECK(rows[0].relation == Relation::greater_equal);
  CHECK(rows[0].bound == 0.0);
  CHECK(rows[0].tag == "s");
}

TEST_CASE("positive interaction of LS and OU at En is m(LS,OU) >= eps") {
  const auto h = testsupport::case_study_hierarchy();
  const auto rows = translate(crit(StatementKind::crit_positive_interaction, {"LS", "OU"}, h.resolve("En")), h,
                              nullptr, "vi");
  REQUIRE(rows.size() == 1);
  const auto& c = rows[0].coefficients;
  const std::size_t ls_ou = MobiusCapacity2Add::pair_index(10, 8, 9);
  for (std::size_t k = 0; k < 55; ++k) CHECK(c[k] == (k == ls_ou ? 1.0 : 0.0));
  CHECK(c[55] == -1.0);
}

TEST_CASE("criterion equality on a flat hierarchy is a Shapley difference") {
  std::mt19937_64 rng(3);
  const auto h = CriteriaHierarchy::flat({"g1", "g2", "g3"});
  const auto rows = translate(crit(StatementKind::crit_equal, {"g1", "g3"}), h, nullptr, "eq");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].relation == Relation::equal);
  const auto m = testsupport::random_capacity(rng, 3);
  CHECK(eval(rows[0], m.coefficients(), 0.0) == doctest::Approx(shapley_2additive(m, 0) - shapley_2additive(m, 2)));
}

TEST_CASE("translated rows equal the direct index computations") {
  std::mt19937_64 rng(21);
  const auto h = testsupport::case_study_hierarchy();
  std::vector<Alternative> alts;
  for (int a = 0; a < 4; ++a) alts.push_back({"x" + std::to_string(a), ""});
  std::vector<double> vals;
  for (int k = 0; k < 40; ++k) vals.push_back(testsupport::random_evaluations(rng, 1)[0]);
  const auto table = PerformanceTable::from_normalized(alts, testsupport::case_study_leaves(), vals);
  const auto root = NodeId{};
  const auto en = h.resolve("En");
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = testsupport::random_capacity(rng, 10);
    const auto coef = m.coefficients();
    auto C = [&](const NodeId& r, int a) { return hierarchical_choquet(m, h, r, table.normalized_row(a)); };
    const double mu_en = capacity_from_mobius(m, elementary_descendants(h, en));

    auto r1 = translate(PreferenceStatement{StatementKind::alt_strict, en, 0, {"x0", "x1"}}, h, &table, "t");
    CHECK(std::abs(eval(r1[0], coef, 0.0) - mu_en * (C(en, 0) - C(en, 1))) <= 1e-10);

    auto r2 = translate(PreferenceStatement{StatementKind::alt_intensity_strict, root, 0, {"x0", "x1", "x2", "x3"}},
                        h, &table, "t");
    REQUIRE(r2.size() == 2);
    CHECK(std::abs(eval(r2[0], coef, 0.0) - (C(root, 0) - C(root, 1) - C(root, 2) + C(root, 3))) <= 1e-10);
    CHECK(std::abs(eval(r2[1], coef, 0.0) - (C(root, 2) - C(root, 3))) <= 1e-10);

    auto r3 = translate(crit(StatementKind::crit_more_important, {"TPR", "OU"}, en, 2), h, nullptr, "t");
    const double d3 = hierarchical_shapley(m, h, en, h.resolve("TPR"), 2) -
                      hierarchical_shapley(m, h, en, h.resolve("OU"), 2);
    CHECK(std::abs(eval(r3[0], coef, 0.0) - mu_en * d3) <= 1e-10);

    auto r4 = translate(crit(StatementKind::crit_more_important, {"So", "Ec"}), h, nullptr, "t");
    const double d4 = hierarchical_shapley(m, h, root, 2) - hierarchical_shapley(m, h, root, 1);
    CHECK(std::abs(eval(r4[0], coef, 0.0) - d4) <= 1e-10);

    auto st5 = crit(StatementKind::crit_interaction_compare, {"OH", "CP", "AA", "R"}, root, 2);
    st5.sign = InteractionSign::negative;
    auto r5 = translate(st5, h, nullptr, "t");
    REQUIRE(r5.size() == 2);
    CHECK(r5[0].relation == Relation::less_equal);
    const double i5 = hierarchical_interaction(m, h, root, h.resolve("OH"), h.resolve("CP"), 2) -
                      hierarchical_interaction(m, h, root, h.resolve("AA"), h.resolve("R"), 2);
    CHECK(std::abs(eval(r5[0], coef, 0.0) - i5) <= 1e-10);

    auto r6 = translate(crit(StatementKind::crit_intensity_equal, {"So", "Ec", "En", "Ec"}), h, nullptr, "t");
    REQUIRE(r6.size() == 1);
    const double d6 = hierarchical_shapley(m, h, root, 2) - hierarchical_shapley(m, h, root, 3);
    CHECK(std::abs(eval(r6[0], coef, 0.0) - d6) <= 1e-10);
  }
}

TEST_CASE("translation errors") {
  const auto h = testsupport::case_study_hierarchy();
  const auto t = two_by_two({0.2, 0.8, 0.5, 0.1});
  CHECK_THROWS_AS(translate(crit(StatementKind::crit_more_important, {"OH", "LS"}, h.resolve("En"), 2), h, nullptr,
                            "t"),
                  InvalidArgument);
  CHECK_THROWS_AS(translate(crit(StatementKind::crit_more_important, {"OH"}), h, nullptr, "t"), InvalidArgument);
  CHECK_THROWS_AS(translate(crit(StatementKind::crit_more_important, {"OH", "Nope"}, {}, 2), h, nullptr, "t"),
                  UnknownNode);
  const auto flat = CriteriaHierarchy::flat({"g1", "g2"});
  CHECK_THROWS_AS(translate(alt(StatementKind::alt_strict, {"a", "zzz"}), flat, &t, "t"), InvalidArgument);
  CHECK_THROWS_AS(translate(alt(StatementKind::alt_strict, {"a", "b"}), flat, nullptr, "t"), InvalidArgument);

  const std::vector<PreferenceStatement> bad{crit(StatementKind::crit_equal, {"g1", "g2"}),
                                             crit(StatementKind::crit_equal, {"g1", "x"}),
                                             alt(StatementKind::alt_strict, {"a", "q"})};
  try {
    assemble_edm(bad, flat, &t);
    FAIL("expected ValidationFailed");
  } catch (const ValidationFailed& e) {
    REQUIRE(e.problems().size() == 2);
    CHECK(e.problems()[0].rfind("statement 2:", 0) == 0);
    CHECK(e.problems()[1].rfind("statement 3:", 0) == 0);
  }
}

TEST_CASE("statement-free system on two criteria") {
  const auto h = CriteriaHierarchy::flat({"g1", "g2"});
  const auto sys = assemble_edm({}, h, nullptr);
  CHECK(sys.variable_count() == 4);
  CHECK(sys.epsilon_variable() == 3u);
  const auto r = check_consistency(sys);
  CHECK(r.feasible);
  CHECK(r.eps_star == doctest::Approx(1.0));  // only the cap binds
  // Every optimum is a valid capacity.
  const auto m = MobiusCapacity2Add::from_coefficients(2, std::span(r.point).first(3));
  CHECK(validate(m, 1e-9).ok());
}

TEST_CASE("contradictory importance statements are inconsistent") {
  const auto h = CriteriaHierarchy::flat({"g1", "g2", "g3"});
  const std::vector<PreferenceStatement> two{crit(StatementKind::crit_more_important, {"g1", "g2"}),
                                             crit(StatementKind::crit_more_important, {"g2", "g1"})};
  CHECK_FALSE(check_consistency(assemble_edm(two, h, nullptr)).feasible);
  const auto d2 = diagnose_inconsistency(two, h, nullptr);
  CHECK(d2.heuristic);
  CHECK(d2.removals == std::vector<std::vector<std::size_t>>{{0}, {1}});

  const std::vector<PreferenceStatement> cycle{crit(StatementKind::crit_more_important, {"g1", "g2"}),
                                               crit(StatementKind::crit_more_important, {"g2", "g3"}),
                                               crit(StatementKind::crit_more_important, {"g3", "g1"})};
  CHECK_FALSE(check_consistency(assemble_edm(cycle, h, nullptr)).feasible);
  CHECK(diagnose_inconsistency(cycle, h, nullptr).removals.size() == 3);

  const std::vector<PreferenceStatement> fine{crit(StatementKind::crit_more_important, {"g1", "g2"})};
  CHECK_THROWS_AS(diagnose_inconsistency(fine, h, nullptr), InvalidArgument);
}

TEST_CASE("pair removal when no single statement is to blame") {
  const auto h = CriteriaHierarchy::flat({"g1", "g2"});
  const std::vector<PreferenceStatement> st{crit(StatementKind::crit_more_important, {"g1", "g2"}),
                                            crit(StatementKind::crit_more_important, {"g1", "g2"}),
                                            crit(StatementKind::crit_more_important, {"g2", "g1"}),
                                            crit(StatementKind::crit_more_important, {"g2", "g1"})};
  const auto d = diagnose_inconsistency(st, h, nullptr);
  CHECK(d.removals == std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}});
}

TEST_CASE("case-study statements are consistent and the published barycenter satisfies them") {
  const auto h = testsupport::case_study_hierarchy();
  const auto statements = testsupport::case_study_statements();
  const auto sys = assemble_edm(statements, h, nullptr);
  const auto r = check_consistency(sys);
  CHECK(r.feasible);
  CHECK(r.eps_star > 1e-6);

  const auto m = testsupport::published_barycenter();
  for (const auto& st : statements) {
    for (const auto& c : translate(st, h, nullptr, "t")) CHECK(slack(c, m, 0.0) >= -5e-3);
  }
}

TEST_CASE("dominance relation") {
  const auto t = PerformanceTable::from_normalized({{"a", ""}, {"b", ""}, {"c", ""}, {"d", ""}}, {"g1", "g2"},
                                                   {0.5, 0.5, 0.4, 0.5, 0.4, 0.6, 0.5, 0.5});
  const auto d = dominance(t);
  CHECK(d(0, 1));
  CHECK_FALSE(d(1, 0));
  CHECK_FALSE(d(0, 2));
  CHECK_FALSE(d(2, 0));
  CHECK_FALSE(d(0, 3));
  CHECK_FALSE(d(3, 0));
  CHECK_FALSE(d(0, 0));
}

TEST_CASE("necessary and possible on small examples") {
  const auto h = CriteriaHierarchy::flat({"g1", "g2"});
  const auto t = PerformanceTable::from_normalized({{"a", ""}, {"b", ""}, {"c", ""}, {"d", ""}}, {"g1", "g2"},
                                                   {0.6, 0.5, 0.4, 0.5, 0.2, 0.9, 0.9, 0.2});
  const auto sys = assemble_edm({}, h, &t);
  CHECK(necessary(sys, h, t, NodeId{}, 0, 1));
  CHECK(necessary(sys, h, t, NodeId{}, 0, 0));
  CHECK(possible(sys, h, t, NodeId{}, 0, 0));
  CHECK_FALSE(necessary(sys, h, t, NodeId{}, 2, 3));
  CHECK(possible(sys, h, t, NodeId{}, 2, 3));
  CHECK(possible(sys, h, t, NodeId{}, 3, 2));

  const auto strict = PerformanceTable::from_normalized({{"a", ""}, {"b", ""}}, {"g1", "g2"}, {0.3, 0.3, 0.6, 0.7});
  const auto sys2 = assemble_edm({}, h, &strict);
  CHECK_FALSE(possible(sys2, h, strict, NodeId{}, 0, 1));
  CHECK(necessary(sys2, h, strict, NodeId{}, 1, 0));

  // A statement turns c over d into a necessary preference.
  const std::vector<PreferenceStatement> st{crit(StatementKind::crit_more_important, {"g2", "g1"})};
  const auto sys3 = assemble_edm(st, h, &t);
  CHECK(necessary(sys3, h, t, NodeId{}, 2, 3));
  CHECK_FALSE(possible(sys3, h, t, NodeId{}, 3, 2));
}

TEST_CASE("shortcut and parallel NaP agree with one LP per pair") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const auto t = testsupport::random_table(rng, 6, n);
    std::vector<std::string> names(t.criteria());
    const auto h = CriteriaHierarchy::flat(names);
    std::vector<PreferenceStatement> st;
    if (trial % 2) st.push_back(crit(StatementKind::crit_more_important, {"g1", "g2"}));
    if (trial % 3 == 0) st.push_back(alt(StatementKind::alt_strict, {"a2", "a5"}));
    const auto sys = assemble_edm(st, h, &t);
    if (!check_consistency(sys).feasible) continue;
    const auto full = nap_relation(sys, h, t, NodeId{}, {false, false});
    const auto fast = nap_relation(sys, h, t, NodeId{}, {true, true});
    CHECK(full.necessary_cells == fast.necessary_cells);
    CHECK(full.possible_cells == fast.possible_cells);
    CHECK(fast.lp_count <= full.lp_count);
  }
}

TEST_CASE("NaP on a hierarchy node ignores criteria outside it") {
  const auto h = CriteriaHierarchy::build({"root", {{"A", {{"a1"}, {"a2"}}}, {"B", {{"b1"}, {"b2"}}}}});
  // x is better on A, worse on B.
  const auto t = PerformanceTable::from_normalized({{"x", ""}, {"y", ""}}, {"a1", "a2", "b1", "b2"},
                                                   {0.9, 0.8, 0.1, 0.2, 0.5, 0.5, 0.6, 0.7});
  const auto sys = assemble_edm({}, h, &t);
  const auto on_a = nap_relation(sys, h, t, h.resolve("A"));
  CHECK(on_a.necessary(0, 1));
  CHECK_FALSE(on_a.possible(1, 0));
  const auto on_b = nap_relation(sys, h, t, h.resolve("B"));
  CHECK(on_b.necessary(1, 0));
  const auto at_root = nap_relation(sys, h, t, NodeId{});
  CHECK(at_root.possible(0, 1));
  CHECK(at_root.possible(1, 0));
}

TEST_CASE("NaP refuses an inconsistent system") {
  const auto h = CriteriaHierarchy::flat({"g1", "g2"});
  const auto t = two_by_two({0.2, 0.8, 0.5, 0.1});
  const std::vector<PreferenceStatement> st{alt(StatementKind::alt_strict, {"a", "b"}),
                                            alt(StatementKind::alt_strict, {"b", "a"})};
  CHECK_THROWS_AS(nap_relation(assemble_edm(st, h, &t), h, t, NodeId{}), InfeasibleSystem);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "mcda/errors.hpp"
#include "mcda/preference.hpp"
#include "mcda/smaa.hpp"
#include "support.hpp"

using namespace mcda;

namespace {

Constraint row(std::vector<double> a, Relation rel, double b, std::string tag) {
  return Constraint{std::move(a), rel, b, std::move(tag)};
}

LinearConstraintSystem triangle() {
  LinearConstraintSystem s;
  s.add_variable("x");
  s.add_variable("y");
  s.add_constraint(row({1, 0}, Relation::greater_equal, 0, "x0"));
  s.add_constraint(row({0, 1}, Relation::greater_equal, 0, "y0"));
  s.add_constraint(row({1, 1}, Relation::less_equal, 1, "sum"));
  return s;
}

LinearConstraintSystem square() {
  LinearConstraintSystem s;
  s.add_variable("x");
  s.add_variable("y");
  s.add_constraint(row({1, 0}, Relation::greater_equal, 0, "x0"));
  s.add_constraint(row({1, 0}, Relation::less_equal, 1, "x1"));
  s.add_constraint(row({0, 1}, Relation::greater_equal, 0, "y0"));
  s.add_constraint(row({0, 1}, Relation::less_equal, 1, "y1"));
  return s;
}

SamplerConfig config(std::size_t samples, std::uint64_t seed = 1) {
  SamplerConfig c;
  c.sample_count = samples;
  c.burn_in = 1000;
  c.thinning = 3;
  c.seed = seed;
  return c;
}

std::vector<double> mean(const SampleSet& s) {
  std::vector<double> m(s.dimension(), 0.0);
  for (std::size_t k = 0; k < s.size(); ++k) {
    for (std::size_t i = 0; i < s.dimension(); ++i) m[i] += s.row(k)[i] / static_cast<double>(s.size());
  }
  return m;
}

PerformanceTable table_of(std::vector<std::vector<double>> rows, std::size_t n) {
  std::vector<Alternative> alts;
  std::vector<double> v;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    alts.push_back({"a" + std::to_string(a + 1), ""});
    v.insert(v.end(), rows[a].begin(), rows[a].end());
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("g" + std::to_string(i + 1));
  return PerformanceTable::from_normalized(alts, names, v);
}

CriteriaHierarchy flat(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("g" + std::to_string(i + 1));
  return CriteriaHierarchy::flat(names);
}

}  // namespace

TEST_CASE("rank function") {
  CHECK(rank_function(std::vector<double>{0.9, 0.5, 0.9}) == std::vector<std::size_t>{1, 3, 1});
  CHECK(rank_function(std::vector<double>{4, 3, 2, 1}) == std::vector<std::size_t>{1, 2, 3, 4});
  CHECK(rank_function(std::vector<double>{2, 2, 2}) == std::vector<std::size_t>{1, 1, 1});
}

TEST_CASE("hit-and-run on the triangle and the square") {
  const auto t = har_sample(triangle(), config(30000));
  REQUIRE(t.size() == 30000);
  const auto mt = mean(t);
  CHECK(std::abs(mt[0] - 1.0 / 3.0) < 0.01);
  CHECK(std::abs(mt[1] - 1.0 / 3.0) < 0.01);

  const auto s = har_sample(square(), config(30000, 2));
  const auto ms = mean(s);
  for (std::size_t i = 0; i < 2; ++i) {
    double var = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) var += std::pow(s.row(k)[i] - ms[i], 2) / static_cast<double>(s.size());
    CHECK(std::abs(ms[i] - 0.5) < 0.01);
    CHECK(std::abs(var - 1.0 / 12.0) < 0.005);
  }
}

TEST_CASE("hit-and-run stays in the affine hull of the equalities") {
  LinearConstraintSystem s;
  for (const char* v : {"x", "y", "z"}) s.add_variable(v);
  s.add_constraint(row({1, 1, 1}, Relation::equal, 1, "sum"));
  s.add_constraint(row({1, 0, 0}, Relation::greater_equal, 0, "x0"));
  s.add_constraint(row({0, 1, 0}, Relation::greater_equal, 0, "y0"));
  s.add_constraint(row({0, 0, 1}, Relation::greater_equal, 0, "z0"));
  const auto out = har_sample(s, config(20000));
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto r = out.row(k);
    REQUIRE(std::abs(r[0] + r[1] + r[2] - 1.0) < 1e-10);
  }
  for (double m : mean(out)) CHECK(std::abs(m - 1.0 / 3.0) < 0.01);
}

TEST_CASE("hit-and-run is deterministic for a seed") {
  const auto a = har_sample(triangle(), config(500, 9));
  const auto b = har_sample(triangle(), config(500, 9));
  const auto c = har_sample(triangle(), config(500, 10));
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
}

TEST_CASE("capacity samples satisfy every constraint") {
  const auto h = testsupport::case_study_hierarchy();
  const auto sys = assemble_edm(testsupport::case_study_statements(), h, nullptr);
  const auto cons = check_consistency(sys);
  const auto out = har_sample(sys, config(3000));
  CHECK(out.epsilon == doctest::Approx(cons.eps_star / 2.0));
  CHECK(out.dimension() == 55);
  std::vector<double> full(56);
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::copy(out.row(k).begin(), out.row(k).end(), full.begin());
    full[55] = out.epsilon;
    REQUIRE(sys.min_slack(full) >= -1e-8);
  }
  const auto bary = barycenter(out, 10);
  CHECK(validate(bary, 1e-6).ok());
  std::copy(bary.coefficients().begin(), bary.coefficients().end(), full.begin());
  CHECK(sys.min_slack(full) >= -1e-8);
}

TEST_CASE("sampler argument errors") {
  const auto h = flat(2);
  const auto sys = assemble_edm({}, h, nullptr);
  auto cfg = config(10);
  cfg.thinning = 0;
  CHECK_THROWS_AS(har_sample(sys, cfg), InvalidArgument);
  cfg = config(10);
  cfg.epsilon_mode = EpsilonMode::fraction(1.5);
  CHECK_THROWS_AS(har_sample(sys, cfg), InvalidArgument);

  const std::vector<PreferenceStatement> st{
      {StatementKind::crit_more_important, NodeId{}, 0, {"g1", "g2"}, {}, ""}};
  const auto sys2 = assemble_edm(st, h, nullptr);
  cfg = config(10);
  cfg.epsilon_mode = EpsilonMode::fixed(1.5);
  CHECK_THROWS_AS(har_sample(sys2, cfg), InvalidArgument);

  // eps fixed at eps* leaves a face: no interior.
  cfg.epsilon_mode = EpsilonMode::fraction(1.0);
  CHECK_THROWS_AS(har_sample(sys2, cfg), EmptyInterior);

  LinearConstraintSystem open;
  open.add_variable("x");
  open.add_variable("y");
  open.add_constraint(row({1, 0}, Relation::greater_equal, 0, "x0"));
  open.add_constraint(row({1, 0}, Relation::less_equal, 1, "x1"));
  open.add_constraint(row({0, 1}, Relation::greater_equal, 0, "y0"));
  open.add_constraint(row({0, 1}, Relation::less_equal, 1e6, "y1"));
  CHECK_NOTHROW(har_sample(open, config(10)));
}

TEST_CASE("progress callback can cancel") {
  std::size_t calls = 0;
  CHECK_THROWS_AS(har_sample(triangle(), config(5000), [&](std::size_t, std::size_t) { return ++calls < 3; }),
                  Cancelled);
  CHECK(calls == 3);
  std::size_t last = 0;
  std::size_t total = 0;
  har_sample(triangle(), config(100), [&](std::size_t d, std::size_t t) {
    last = d;
    total = t;
    return true;
  });
  CHECK(last == total);
  CHECK(total == 1000 + 300);
}

TEST_CASE("index kernels agree and satisfy the identities") {
  std::mt19937_64 rng(5);
  const auto h = testsupport::case_study_hierarchy();
  std::vector<Alternative> alts;
  std::vector<double> vals;
  for (int a = 0; a < 9; ++a) {
    alts.push_back({"x" + std::to_string(a), ""});
    for (int i = 0; i < 10; ++i) vals.push_back(std::round(4.0 * testsupport::random_evaluations(rng, 1)[0]) / 4.0);
  }
  const auto table = PerformanceTable::from_normalized(alts, testsupport::case_study_leaves(), vals);
  const auto sys = assemble_edm(testsupport::case_study_statements(), h, nullptr);
  const auto samples = har_sample(sys, config(4000));
  const auto nodes = h.non_elementary_nodes();
  const auto serial = compute_indices_serial(samples, h, table, nodes);
  const auto parallel = compute_indices(samples, h, table, nodes);
  CHECK(serial == parallel);
  for (const auto& n : parallel) {
    for (std::size_t a = 0; a < n.alternatives; ++a) {
      std::uint64_t row = 0;
      for (std::size_t s = 0; s < n.alternatives; ++s) row += n.rank_counts[a * n.alternatives + s];
      CHECK(row == n.samples);
      CHECK(n.win_counts[a * n.alternatives + a] == 0);
      for (std::size_t b = 0; b < n.alternatives; ++b) {
        CHECK(n.pwi(a, b) + n.pwi(b, a) + n.tie(a, b) == doctest::Approx(1.0).epsilon(1e-15));
      }
      for (std::size_t s = 1; s < n.alternatives; ++s) {
        CHECK(std::abs(n.down_cum(a, s) + n.up_cum(a, s + 1) - 1.0) <= 1e-12);
      }
      CHECK(n.down_cum(a, n.alternatives) == 1.0);
      CHECK(n.up_cum(a, 1) == 1.0);
    }
  }
  // Ranking at the node matches hierarchical Choquet on a sample.
  const auto m = MobiusCapacity2Add::from_coefficients(10, samples.row(0));
  SampleSet one{samples.variables, std::vector<double>(samples.row(0).begin(), samples.row(0).end()), 0.0};
  for (const auto& r : nodes) {
    std::vector<double> v;
    for (std::size_t a = 0; a < table.alternative_count(); ++a) {
      v.push_back(hierarchical_choquet(m, h, r, table.normalized_row(a)));
    }
    const auto ranks = rank_function(v);
    const auto idx = compute_indices_serial(one, h, table, std::vector<NodeId>{r}).front();
    for (std::size_t a = 0; a < table.alternative_count(); ++a) CHECK(idx.rank_counts[a * 9 + ranks[a] - 1] == 1);
  }
}

TEST_CASE("simple index examples") {
  const auto h = flat(2);
  const auto sys = assemble_edm({}, h, nullptr);
  const auto samples = har_sample(sys, config(20000));
  const std::vector<NodeId> root{NodeId{}};

  const auto single = compute_indices(samples, h, table_of({{0.3, 0.4}}, 2), root).front();
  CHECK(single.rai(0, 1) == 1.0);

  const auto sym = compute_indices(samples, h, table_of({{1, 0}, {0, 1}}, 2), root).front();
  CHECK(std::abs(sym.rai(0, 1) - 0.5) < 0.02);
  CHECK(std::abs(sym.rai(1, 1) - 0.5) < 0.02);

  const auto dom = compute_indices(samples, h, table_of({{0.5, 0.6}, {0.4, 0.5}}, 2), root).front();
  CHECK(dom.pwi(1, 0) == 0.0);
  CHECK(dom.pwi(0, 1) > 0.99);

  const auto bary = barycenter(samples, 2);
  CHECK(std::abs(bary.singleton(0) - bary.singleton(1)) < 0.01);
}

TEST_CASE("barycenter of a single sample is that sample") {
  SampleSet s{{"m(a)", "m(b)", "m(a,b)"}, {0.3, 0.5, 0.2}, 0.0};
  const auto b = barycenter(s, 2);
  CHECK(b.singleton(0) == 0.3);
  CHECK(b.pair(0, 1) == 0.2);
  CHECK_THROWS_AS(barycenter(s, 3), InvalidArgument);
}

TEST_CASE("barycenter ranking matches a sorted-definition computation") {
  const MobiusCapacity2Add m({0.2, 0.3, 0.4}, {0.15, -0.1, 0.05});
  REQUIRE(validate(m).ok());
  const auto table = table_of({{0.9, 0.1, 0.5}, {0.2, 0.8, 0.6}, {0.5, 0.5, 0.5}, {0.1, 0.1, 0.9}, {0.9, 0.9, 0.9}}, 3);
  const auto h = flat(3);
  // Sorted-increment Choquet by hand.
  auto mu = [&](CriteriaMask s) { return capacity_from_mobius(m, s); };
  std::vector<double> expected;
  for (std::size_t a = 0; a < 5; ++a) {
    const auto x = table.normalized_row(a);
    std::vector<std::size_t> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return x[i] < x[j]; });
    double v = 0.0;
    double prev = 0.0;
    CriteriaMask upper = 0b111;
    for (std::size_t i : order) {
      v += (x[i] - prev) * mu(upper);
      prev = x[i];
      upper &= ~criterion_bit(i);
    }
    expected.push_back(v);
  }
  const auto r = barycenter_ranking(m, h, table, std::vector<NodeId>{NodeId{}}).front();
  for (std::size_t a = 0; a < 5; ++a) CHECK(r.values[a] == doctest::Approx(expected[a]).epsilon(1e-12));
  CHECK(r.ranks == rank_function(expected));
  CHECK(r.ranks[4] == 1);
  CHECK(r.ranks[3] > 1);
}

TEST_CASE("additive SMAA baseline") {
  auto cfg = config(20000);
  const auto sym = smaa2_additive(table_of({{1, 0}, {0, 1}}, 2), cfg);
  CHECK(std::abs(sym.rai(0, 1) - 0.5) < 0.02);
  const auto dom = smaa2_additive(table_of({{0.5, 0.6}, {0.4, 0.5}, {0.7, 0.1}}, 2), cfg);
  CHECK(dom.pwi(1, 0) == 0.0);
  const auto one = smaa2_additive(table_of({{0.2}, {0.9}, {0.5}}, 1), cfg);
  CHECK(one.rai(1, 1) == 1.0);
  CHECK(one.rai(2, 2) == 1.0);
  CHECK(one.rai(0, 3) == 1.0);
}

TEST_CASE("additive polytope reproduces the additive baseline") {
  const auto h = flat(3);
  auto sys = assemble_edm({}, h, nullptr);
  for (std::size_t k = 3; k < 6; ++k) {
    std::vector<double> a(7, 0.0);
    a[k] = 1.0;
    sys.add_constraint(row(a, Relation::equal, 0.0, "zero-pair-" + std::to_string(k)));
  }
  std::mt19937_64 rng(77);
  const auto table = testsupport::random_table(rng, 6, 3);
  const auto samples = har_sample(sys, config(20000));
  const auto hier = compute_indices(samples, h, table, std::vector<NodeId>{NodeId{}}).front();
  const auto add = smaa2_additive(table, config(20000, 3));
  double worst = 0.0;
  for (std::size_t a = 0; a < 6; ++a) {
    for (std::size_t s = 1; s <= 6; ++s) worst = std::max(worst, std::abs(hier.rai(a, s) - add.rai(a, s)));
    for (std::size_t b = 0; b < 6; ++b) worst = std::max(worst, std::abs(hier.pwi(a, b) - add.pwi(a, b)));
  }
  CHECK(worst <= 0.02);
}

TEST_CASE("run_smaa is deterministic") {
  std::mt19937_64 rng(8);
  const auto h = testsupport::case_study_hierarchy();
  std::vector<Alternative> alts;
  std::vector<double> vals;
  for (int a = 0; a < 5; ++a) {
    alts.push_back({"x" + std::to_string(a), ""});
    for (double v : testsupport::random_evaluations(rng, 10)) vals.push_back(v);
  }
  const auto table = PerformanceTable::from_normalized(alts, testsupport::case_study_leaves(), vals);
  const auto sys = assemble_edm(testsupport::case_study_statements(), h, nullptr);
  const auto nodes = h.non_elementary_nodes();
  const auto a = run_smaa(sys, h, table, nodes, config(2000));
  const auto b = run_smaa(sys, h, table, nodes, config(2000));
  CHECK(a == b);
  CHECK(a.sample_count == 2000);
  CHECK(validate(a.barycenter, 1e-6).ok());
}

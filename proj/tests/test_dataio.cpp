#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mcda/dataio.hpp"
#include "mcda/errors.hpp"
#include "support.hpp"

using namespace mcda;
using nlohmann::json;

namespace {

const std::filesystem::path kCaseStudy = std::filesystem::path(MCDA_DATA_DIR) / "case_study" / "problem.json";

std::string problems_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ValidationFailed& e) {
    return e.what();
  }
  return "";
}

json small_document() {
  return json::parse(R"({
    "schema_version": 1,
    "hierarchy": {"name": "root", "children": [
      {"name": "A", "children": [{"name": "x"}, {"name": "y", "direction": "decreasing"}]},
      {"name": "z"}]},
    "table": {"criteria": ["z", "x", "y"],
              "alternatives": [{"id": "p", "name": "P"}, "q", "r"],
              "values": [[1, 10, 5], [2, 30, 7], [3, 50, 9]]},
    "statements": [
      {"kind": "alt-strict", "subjects": ["r", "q", "p"]},
      {"kind": "crit-more-important", "scope": "A", "subjects": ["x", "y"], "note": "n"}
    ]})");
}

std::filesystem::path temp_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("mcda_test_" + name);
  std::filesystem::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("min-max normalization examples") {
  CHECK(normalize_column(std::vector<double>{10, 30, 50}, Direction::increasing, "g") ==
        std::vector<double>{0, 0.5, 1});
  CHECK(normalize_column(std::vector<double>{10, 30, 50}, Direction::decreasing, "g") ==
        std::vector<double>{1, 0.5, 0});
  CHECK(normalize_column(std::vector<double>{0, 1}, Direction::increasing, "g") == std::vector<double>{0, 1});
  try {
    normalize_column(std::vector<double>{4, 4}, Direction::increasing, "flat");
    FAIL("constant column accepted");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("flat") != std::string::npos);
  }
}

TEST_CASE("bundled case study loads") {
  const auto p = load_problem(kCaseStudy);
  CHECK(p.synthetic);
  CHECK(p.hierarchy.root().children.size() == 3);
  CHECK(p.hierarchy.elementary_count() == 10);
  CHECK(p.record_count == 8);
  REQUIRE(p.statements.size() == 9);
  CHECK(p.statement_records == std::vector<std::size_t>{0, 0, 1, 2, 3, 4, 5, 6, 7});
  const auto expected = testsupport::case_study_statements();
  for (std::size_t k = 0; k < expected.size(); ++k) {
    CHECK(p.statements[k].kind == expected[k].kind);
    CHECK(p.statements[k].scope == expected[k].scope);
    CHECK(p.statements[k].level == expected[k].level);
    CHECK(p.statements[k].subjects == expected[k].subjects);
  }
  CHECK(p.table.alternative_count() == 51);
  CHECK(p.table.criteria() == testsupport::case_study_leaves());
  // Direction check per column: the best raw value normalizes to 1.
  for (std::size_t i = 0; i < 10; ++i) {
    std::size_t best = 0;
    for (std::size_t a = 1; a < 51; ++a) {
      const bool better = p.table.directions()[i] == Direction::increasing ? p.table.raw(a, i) > p.table.raw(best, i)
                                                                           : p.table.raw(a, i) < p.table.raw(best, i);
      if (better) best = a;
    }
    CHECK(p.table.normalized(best, i) == 1.0);
  }
  CHECK(p.table.directions()[0] == Direction::decreasing);
}

TEST_CASE("table columns follow the hierarchy") {
  const auto p = problem_from_json(small_document());
  CHECK(p.table.criteria() == std::vector<std::string>{"x", "y", "z"});
  CHECK(p.table.raw(1, 0) == 30);
  CHECK(p.table.normalized(0, 1) == 1.0);  // y decreasing, smallest raw
  CHECK(p.table.alternatives()[0].name == "P");
  REQUIRE(p.statements.size() == 3);
  CHECK(p.statements[0].subjects == std::vector<std::string>{"r", "q"});
  CHECK(p.statements[1].subjects == std::vector<std::string>{"q", "p"});
  CHECK(p.statements[2].scope == NodeId::parse("1"));
  CHECK(p.record_count == 2);
}

TEST_CASE("loader errors carry locations and are reported together") {
  auto doc = small_document();
  doc["table"]["alternatives"] = json::array();
  doc["table"]["values"] = json::array();
  CHECK(problems_of([&] { problem_from_json(doc); }).find("no alternatives") != std::string::npos);

  doc = small_document();
  doc["statements"][1]["subjects"][1] = "nope";
  doc["statements"].push_back(json{{"kind", "crit-equal"}, {"subjects", {"x"}}});
  doc["schema_version"] = 2;
  const auto msg = problems_of([&] { problem_from_json(doc); });
  CHECK(msg.find("statements[1]") != std::string::npos);
  CHECK(msg.find("nope") != std::string::npos);
  CHECK(msg.find("statements[2].subjects") != std::string::npos);
  CHECK(msg.find("schema_version") != std::string::npos);

  doc = small_document();
  doc["table"]["alternatives"][2] = "p";
  CHECK(problems_of([&] { problem_from_json(doc); }).find("duplicate alternative id 'p'") != std::string::npos);

  doc = small_document();
  doc["hierarchy"]["children"][1]["direction"] = "sideways";
  CHECK(problems_of([&] { problem_from_json(doc); }).find("hierarchy.children[1].direction") != std::string::npos);
}

TEST_CASE("CSV tables") {
  const auto h = CriteriaHierarchy::flat({"u", "v"});
  std::istringstream ok("# comment\nid,v,u\na,1,2\nb, 3 ,4\n\n");
  const auto t = read_table_csv(ok, h);
  CHECK(t.raw(1, 0) == 4);
  CHECK(t.raw(1, 1) == 3);

  std::istringstream bad("id,u,w\na,1,x\nb,2\n");
  const auto msg = problems_of([&] { read_table_csv(bad, h); });
  CHECK(msg.find("line 1: unknown criterion 'w'") != std::string::npos);
  CHECK(msg.find("missing column for criterion 'v'") != std::string::npos);
  CHECK(msg.find("line 3: expected 3 fields") != std::string::npos);

  std::istringstream nan("id,u,v\na,1,x\nb,2,3\n");
  CHECK(problems_of([&] { read_table_csv(nan, h); }).find("line 2: column 'v': not a number 'x'") !=
        std::string::npos);

  std::istringstream flat("id,u,v\na,1,5\nb,2,5\n");
  CHECK(problems_of([&] { read_table_csv(flat, h); }).find("'v' is constant") != std::string::npos);

  std::ostringstream out;
  write_table_csv(out, t);
  std::istringstream back(out.str());
  CHECK(read_table_csv(back, h) == t);
}

TEST_CASE("problem documents round-trip") {
  const auto p = load_problem(kCaseStudy);
  const auto text = problem_to_json(p).dump();
  const auto q = problem_from_json(json::parse(text));
  CHECK(hierarchy_to_json(q.hierarchy) == hierarchy_to_json(p.hierarchy));
  CHECK(q.table == p.table);
  CHECK(q.statements == p.statements);
  CHECK(q.statement_records == p.statement_records);
  CHECK(q.record_count == p.record_count);
  CHECK(q.name == p.name);
}

TEST_CASE("number formatting reads back exactly") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double v = u(rng) / std::pow(10.0, k % 12);
    CHECK(std::stod(format_number(v)) == v);
  }
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("acceptability summary") {
  NodeIndices one{NodeId{}, 1, 10, {10}, {0}};
  const auto rows = rai_summary(one);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].top == std::vector<std::pair<std::size_t, double>>{{1, 1.0}});
  CHECK(rows[0].best == std::pair<std::size_t, double>{1, 1.0});
  CHECK(rows[0].worst == std::pair<std::size_t, double>{1, 1.0});
  std::ostringstream out;
  write_summary_csv(out, one, PerformanceTable::from_normalized({{"a", "A"}}, {"g"}, {0.5}));
  CHECK(out.str() == "alternative,name,high_1,high_1_pct,high_2,high_2_pct,high_3,high_3_pct,best,best_pct,worst,"
                     "worst_pct\na,A,1,100.00,,,,,1,100.00,1,100.00\n");

  // Four alternatives; counts per rank over 100 samples.
  NodeIndices idx{NodeId{}, 4, 100, {0, 10, 60, 30,  //
                                     70, 20, 10, 0,   //
                                     30, 40, 0, 30,   //
                                     0, 30, 30, 40},
                  std::vector<std::uint64_t>(16, 0)};
  const auto s = rai_summary(idx);
  CHECK(s[0].alternative == 1);
  CHECK(s[1].alternative == 2);
  CHECK(s[2].alternative == 0);
  CHECK(s[3].alternative == 3);
  CHECK(s[1].top[0].first == 2);
  CHECK(s[1].top[1].first == 1);
  CHECK(s[1].top[2].first == 4);
  CHECK(s[1].best.first == 1);
  CHECK(s[1].worst == std::pair<std::size_t, double>{4, 0.3});
  CHECK(s[2].best == std::pair<std::size_t, double>{2, 0.1});
  CHECK(s[3].top[1].first == 2);  // tie at 30: lower rank first
}

TEST_CASE("barycenter export follows the published layout") {
  const auto m = MobiusCapacity2Add::from_coefficients(10, testsupport::published_barycenter());
  std::ostringstream out;
  write_barycenter_csv(out, m, testsupport::case_study_leaves());
  std::istringstream in(out.str());
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  REQUIRE(lines.size() == 10);
  CHECK(lines[0] == "m(OH),m(AA),m(BS),m(PSI),m(CP),m(R),m(TPR),m(IWU),m(LS),m(OU),\"m(OH,AA)\"");
  CHECK(lines[1].substr(0, 7) == "0.0871,");
  CHECK(lines[2].substr(0, 10) == "\"m(OH,BS)\"");
  CHECK(lines[9].substr(lines[9].rfind(',') + 1) == "0.0144");
  CHECK(lines[8].ends_with(",\"m(LS,OU)\""));
}

TEST_CASE("results round-trip and export") {
  const auto h = CriteriaHierarchy::flat({"u", "v"});
  Problem p;
  p.hierarchy = h;
  p.table = PerformanceTable::from_normalized({{"a", ""}, {"b", "B, Inc"}, {"c", ""}}, {"u", "v"},
                                              {1, 0, 0, 1, 0.5, 0.4});
  const auto sys = assemble_edm({}, h, nullptr);
  SamplerConfig cfg;
  cfg.sample_count = 500;
  cfg.burn_in = 100;
  cfg.thinning = 2;
  const std::vector<NodeId> nodes{NodeId{}};
  const auto r = run_smaa(sys, h, p.table, nodes, cfg);
  const auto j = results_to_json(r, p, cfg);
  CHECK(results_from_json(json::parse(j.dump())) == r);
  CHECK(sampler_from_json(j.at("sampler")).seed == cfg.seed);

  const auto dir = temp_dir("export");
  const auto files = export_results(dir, r, p, cfg);
  CHECK(files.size() == 8);
  for (const char* f : {"results.json", "rai_0.csv", "pwi_0.csv", "down_cum_0.csv", "up_cum_0.csv", "summary_0.csv",
                        "ranking_0.csv", "barycenter.csv"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  std::ifstream in(dir / "results.json");
  CHECK(results_from_json(json::parse(in)) == r);
  std::ifstream pwi(dir / "pwi_0.csv");
  std::string header;
  std::getline(pwi, header);
  CHECK(header == "alternative,a,b,c");

  // A regular file where the directory should be.
  const auto blocked = temp_dir("blocked");
  std::ofstream(blocked.string()) << "x";
  CHECK_THROWS_AS(export_results(blocked / "sub", r, p, cfg), Error);
  std::filesystem::remove_all(dir);
  std::filesystem::remove(blocked);
}

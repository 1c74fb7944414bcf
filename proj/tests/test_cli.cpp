#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "mcda/pipeline.hpp"

using namespace mcda;
using nlohmann::json;

namespace {

const std::filesystem::path kFixtures = MCDA_FIXTURES_DIR;
const std::filesystem::path kCaseStudy = std::filesystem::path(MCDA_DATA_DIR) / "case_study" / "problem.json";

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

Run run_cli(const std::string& args) {
  const auto err_path = std::filesystem::temp_directory_path() / "mcda_cli_stderr.txt";
  const std::string cmd = std::string(MCDA_CLI_PATH) + " " + args + " 2>" + err_path.string();
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream e(err_path);
  std::stringstream ss;
  ss << e.rdbuf();
  r.err = ss.str();
  return r;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("cli consistency on the case study") {
  const auto r = run_cli("consistency --problem " + q(kCaseStudy));
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j["feasible"] == true);
  CHECK(j["eps_star"].get<double>() > 0);
}

TEST_CASE("cli smaa is deterministic for a seed and matches the engine") {
  const std::string args = "smaa --problem " + q(kFixtures / "two_criteria.json") + " --seed 7 --samples 1000";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  const auto j = json::parse(a.out);
  CHECK(j["sampler"]["seed"] == 7);

  const auto problem = load_problem(kFixtures / "two_criteria.json");
  SamplerConfig cfg;
  cfg.seed = 7;
  cfg.sample_count = 1000;
  const auto nodes = analysis_nodes(problem.hierarchy);
  const auto direct = run_smaa(problem_system(problem), problem.hierarchy, problem.table, nodes, cfg);
  CHECK(j == results_to_json(direct, problem, cfg));
}

TEST_CASE("cli nap sets the necessary flag for dominance") {
  const auto r = run_cli("nap --problem " + q(kFixtures / "dominance.json"));
  REQUIRE(r.status == 0);
  const auto node = json::parse(r.out)["nodes"][0];
  CHECK(node["necessary"][0][1] == true);
  CHECK(node["necessary"][1][0] == false);
  CHECK(node["possible"][1][0] == false);

  const auto csv = run_cli("dominance --format csv --problem " + q(kFixtures / "dominance.json"));
  CHECK(csv.out == "alternative,best,worst\nbest,0,1\nworst,0,0\n");
}

TEST_CASE("cli rank and report read stored results") {
  const auto dir = std::filesystem::temp_directory_path() / "mcda_cli_results";
  std::filesystem::remove_all(dir);
  const auto problem = q(kFixtures / "two_criteria.json");
  REQUIRE(run_cli("smaa --problem " + problem + " --samples 500 --out " + q(dir)).status == 0);
  const auto results = q(dir / "results.json");

  const auto rank = run_cli("rank --problem " + problem + " --results " + results);
  REQUIRE(rank.status == 0);
  CHECK(json::parse(rank.out)["rankings"][0]["ranking"].size() == 3);

  const auto report = run_cli("report --format json --problem " + problem + " --results " + results);
  REQUIRE(report.status == 0);
  CHECK(json::parse(report.out)["nodes"][0]["summary"].size() == 3);
  const auto text = run_cli("report --problem " + problem + " --results " + results);
  CHECK(text.out.find("high_1") != std::string::npos);

  const auto v = run_cli("validate --problem " + problem + " --capacity " + results);
  REQUIRE(v.status == 0);
  CHECK(json::parse(v.out)["capacity"]["valid"] == true);

  const auto other = run_cli("rank --problem " + q(kFixtures / "dominance.json") + " --results " + results);
  CHECK(other.status == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli failures print an error record") {
  auto r = run_cli("consistency --problem /no/such/file.json");
  CHECK(r.status == 1);
  CHECK(json::parse(r.err)["error"]["code"] == "bad-request");

  r = run_cli("nap --node nowhere --problem " + q(kFixtures / "dominance.json"));
  CHECK(r.status == 1);
  CHECK(json::parse(r.err)["error"]["code"] == "not-found");

  r = run_cli("smaa --eps-mode half --problem " + q(kFixtures / "dominance.json"));
  CHECK(r.status == 1);
  CHECK(json::parse(r.err)["error"]["message"].get<std::string>().find("epsilon mode") != std::string::npos);

  r = run_cli("frobnicate");
  CHECK(r.status == 2);
  CHECK(json::parse(r.err).contains("error"));
}

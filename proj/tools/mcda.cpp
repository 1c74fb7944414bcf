// Command-line driver: validate, dominance, consistency, nap, smaa, rank,
// report, serve.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>

#include "mcda/pipeline.hpp"
#include "mcda/server.hpp"

using namespace mcda;
using nlohmann::json;

namespace {

struct Options {
  std::string problem;
  std::string table;
  std::vector<std::string> nodes;
  std::string format = "json";
  std::string out;
  std::string results;
  std::string capacity;
  double tol = 1e-8;
  SamplerConfig sampler;
  std::string eps_mode;
  std::optional<std::string> bind;
};

Problem load(const Options& o) {
  if (o.problem.empty()) throw InvalidArgument("--problem is required");
  auto p = load_problem(o.problem);
  if (!o.table.empty()) {
    p.table = read_table_csv(std::filesystem::path(o.table), p.hierarchy);
    p.statements = statements_from_json(
        [&] {
          json records = json::array();
          for (const auto& st : p.statements) records.push_back(statement_to_json(st));
          return records;
        }(),
        p.hierarchy, &p.table);
  }
  return p;
}

void require_format(const Options& o, std::initializer_list<std::string_view> allowed) {
  for (auto f : allowed) {
    if (o.format == f) return;
  }
  throw InvalidArgument("--format " + o.format + " is not available for this command");
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  return f;
}

void make_out_dir(const Options& o) {
  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec || !std::filesystem::is_directory(o.out)) throw Error("cannot create output directory " + o.out);
}

SamplerConfig sampler_of(const Options& o) {
  auto cfg = o.sampler;
  if (!o.eps_mode.empty()) cfg.epsilon_mode = parse_epsilon_mode(o.eps_mode);
  cfg.check();
  return cfg;
}

/// Stored results, or a fresh run with the sampler flags.
std::pair<SmaaResult, SamplerConfig> results_for(const Options& o, const Problem& p) {
  if (o.results.empty()) {
    const auto cfg = sampler_of(o);
    const auto nodes = resolve_nodes(p.hierarchy, o.nodes);
    return {run_smaa(problem_system(p), p.hierarchy, p.table, nodes, cfg), cfg};
  }
  std::ifstream in(o.results);
  if (!in) throw Error("cannot read " + o.results);
  const auto j = json::parse(in);
  json ids = json::array();
  for (const auto& a : p.table.alternatives()) ids.push_back(a.id);
  if (j.at("alternatives") != ids || j.at("criteria") != json(p.table.criteria())) {
    throw InvalidArgument(o.results + " was computed for a different problem");
  }
  return {results_from_json(j), sampler_from_json(j.at("sampler"))};
}

std::vector<NodeId> selected_nodes(const Options& o, const Problem& p, const SmaaResult& r) {
  if (o.nodes.empty()) {
    std::vector<NodeId> out;
    for (const auto& n : r.nodes) out.push_back(n.node);
    return out;
  }
  const auto nodes = resolve_nodes(p.hierarchy, o.nodes);
  for (const auto& n : nodes) r.at(n);
  return nodes;
}

int cmd_validate(const Options& o) {
  const auto p = load(o);
  json j = {{"valid", true},
            {"name", p.name},
            {"synthetic", p.synthetic},
            {"alternatives", p.table.alternative_count()},
            {"criteria", p.table.criteria_count()},
            {"records", p.record_count},
            {"statements", p.statements.size()}};
  if (o.capacity.empty()) {
    print(j);
    return 0;
  }
  std::ifstream in(o.capacity);
  if (!in) throw Error("cannot read " + o.capacity);
  const auto doc = json::parse(in);
  const auto coeffs = doc.contains("barycenter") ? doc.at("barycenter") : doc.at("coefficients");
  const auto m =
      MobiusCapacity2Add::from_coefficients(p.hierarchy.elementary_count(), coeffs.get<std::vector<double>>());
  const auto report = validate(m, o.tol);
  double total = 0;
  for (double c : m.coefficients()) total += c;
  json violations = json::array();
  for (const auto& v : report.violations) {
    json e = {{"constraint", v.constraint}, {"residual", v.residual}};
    if (v.criterion) e["criterion"] = p.table.criteria()[*v.criterion];
    violations.push_back(std::move(e));
  }
  j["capacity"] = {{"valid", report.ok()}, {"tolerance", o.tol}, {"normalization", total}, {"violations", violations}};
  j["valid"] = report.ok();
  print(j);
  if (!report.ok()) {
    std::cerr << ErrorInfo{400, "bad-request", "capacity violates normalization or monotonicity", {}}.to_json().dump()
              << '\n';
    return 1;
  }
  return 0;
}

int cmd_dominance(const Options& o) {
  require_format(o, {"json", "csv"});
  const auto p = load(o);
  const auto d = dominance(p.table);
  if (o.format == "csv") write_dominance_csv(std::cout, d, p.table);
  else print(dominance_to_json(d, p.table));
  return 0;
}

int cmd_consistency(const Options& o) {
  const auto p = load(o);
  const auto c = check_consistency(problem_system(p));
  auto j = consistency_to_json(c);
  if (!c.feasible) {
    std::vector<json> labels;
    for (std::size_t k = 0; k < p.statements.size(); ++k) labels.push_back(k);
    j["diagnostic"] = diagnostic_to_json(diagnose_inconsistency(p.statements, p.hierarchy, &p.table), labels);
  }
  print(j);
  return 0;
}

int cmd_nap(const Options& o) {
  require_format(o, {"json", "csv"});
  const auto p = load(o);
  const auto sys = problem_system(p);
  json all = json::array();
  if (!o.out.empty()) make_out_dir(o);
  for (const auto& node : resolve_nodes(p.hierarchy, o.nodes)) {
    const auto nap = nap_relation(sys, p.hierarchy, p.table, node);
    if (!o.out.empty()) {
      auto f = open_out(std::filesystem::path(o.out) / ("nap_" + node_stem(node) + ".csv"));
      write_nap_csv(f, nap, p.table);
    }
    if (o.format == "csv") {
      std::cout << "# node " << node.str() << ' ' << p.hierarchy.node(node).name << '\n';
      write_nap_csv(std::cout, nap, p.table);
    } else {
      all.push_back(nap_to_json(nap, p));
    }
  }
  if (o.format == "json") print({{"nodes", all}});
  return 0;
}

int cmd_smaa(const Options& o) {
  require_format(o, {"json"});
  const auto p = load(o);
  const auto cfg = sampler_of(o);
  const auto nodes = resolve_nodes(p.hierarchy, o.nodes);
  const auto r = run_smaa(problem_system(p), p.hierarchy, p.table, nodes, cfg);
  if (o.out.empty()) {
    std::cout << results_to_json(r, p, cfg).dump() << '\n';
    return 0;
  }
  json files = json::array();
  for (const auto& f : export_results(o.out, r, p, cfg)) files.push_back(f.string());
  print({{"seed", cfg.seed}, {"sample_count", r.sample_count}, {"epsilon", r.epsilon}, {"files", files}});
  return 0;
}

int cmd_rank(const Options& o) {
  require_format(o, {"json", "csv"});
  const auto p = load(o);
  const auto [r, cfg] = results_for(o, p);
  const auto nodes = selected_nodes(o, p, r);
  const auto rankings = barycenter_ranking(r.barycenter, p.hierarchy, p.table, nodes);
  if (!o.out.empty()) {
    make_out_dir(o);
    for (const auto& rk : rankings) {
      auto f = open_out(std::filesystem::path(o.out) / ("ranking_" + node_stem(rk.node) + ".csv"));
      write_ranking_csv(f, rk, p.table);
    }
  }
  if (o.format == "csv") {
    for (const auto& rk : rankings) {
      std::cout << "# node " << rk.node.str() << ' ' << p.hierarchy.node(rk.node).name << '\n';
      write_ranking_csv(std::cout, rk, p.table);
    }
    return 0;
  }
  json all = json::array();
  for (const auto& rk : rankings) all.push_back(ranking_to_json(rk, p));
  const auto& c = r.barycenter.coefficients();
  print({{"seed", cfg.seed}, {"barycenter", std::vector<double>(c.begin(), c.end())}, {"rankings", all}});
  return 0;
}

int cmd_report(const Options& o) {
  require_format(o, {"text", "json", "csv"});
  const auto p = load(o);
  const auto [r, cfg] = results_for(o, p);
  const auto nodes = selected_nodes(o, p, r);
  const auto rankings = barycenter_ranking(r.barycenter, p.hierarchy, p.table, nodes);
  if (!o.out.empty()) {
    make_out_dir(o);
    for (const auto& n : nodes) {
      auto f = open_out(std::filesystem::path(o.out) / ("summary_" + node_stem(n) + ".csv"));
      write_summary_csv(f, r.at(n), p.table);
    }
  }
  if (o.format == "json") {
    json all = json::array();
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      auto j = summary_to_json(r.at(nodes[k]), p);
      j["ranking"] = ranking_to_json(rankings[k], p).at("ranking");
      all.push_back(std::move(j));
    }
    print({{"seed", cfg.seed}, {"sample_count", r.sample_count}, {"epsilon", r.epsilon}, {"nodes", all}});
  } else if (o.format == "csv") {
    for (const auto& n : nodes) {
      std::cout << "# node " << n.str() << ' ' << p.hierarchy.node(n).name << '\n';
      write_summary_csv(std::cout, r.at(n), p.table);
    }
  } else {
    if (p.synthetic) std::cout << "note: synthetic data\n";
    std::cout << "samples " << r.sample_count << ", seed " << cfg.seed << ", epsilon " << format_number(r.epsilon)
              << "\n";
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const auto& n = nodes[k];
      std::cout << "\nnode " << n.str() << " (" << p.hierarchy.node(n).name << ")\n";
      write_summary_text(std::cout, r.at(n), p);
      std::cout << "barycenter ranking:";
      std::vector<std::size_t> order(p.table.alternative_count());
      for (std::size_t a = 0; a < order.size(); ++a) order[a] = a;
      std::stable_sort(order.begin(), order.end(),
                       [&](auto a, auto b) { return rankings[k].ranks[a] < rankings[k].ranks[b]; });
      for (auto a : order) std::cout << ' ' << p.table.alternatives()[a].id;
      std::cout << '\n';
    }
  }
  return 0;
}

httplib::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

int cmd_serve(const Options& o) {
  const auto bind = choose_bind(o.bind, std::getenv("MCDA_BIND"));
  SessionRegistry registry;
  httplib::Server server;
  install_routes(server, registry);
  if (!server.bind_to_port(bind.host, bind.port)) {
    throw Error("cannot bind " + bind.host + ":" + std::to_string(bind.port));
  }
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << json{{"listening", bind.host + ":" + std::to_string(bind.port)}}.dump() << std::endl;
  server.listen_after_bind();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical Choquet integral preference analysis"};
  app.require_subcommand(1);
  Options o;

  const auto problem_flags = [&](CLI::App* c) {
    c->add_option("--problem", o.problem, "Problem document (JSON)")->required();
    c->add_option("--table", o.table, "Performance table (CSV) replacing the document's table");
  };
  const auto node_flag = [&](CLI::App* c) {
    c->add_option("--node", o.nodes, "Hierarchy node by name or path; repeatable");
  };
  const auto sampler_flags = [&](CLI::App* c) {
    c->add_option("--samples", o.sampler.sample_count, "Number of samples")->capture_default_str();
    c->add_option("--burn-in", o.sampler.burn_in, "Discarded initial steps")->capture_default_str();
    c->add_option("--thinning", o.sampler.thinning, "Steps per kept sample")->capture_default_str();
    c->add_option("--seed", o.sampler.seed, "Random seed")->capture_default_str();
    c->add_option("--eps-mode", o.eps_mode, "fraction:<ratio of eps*> or fixed:<eps>");
  };

  auto* validate = app.add_subcommand("validate", "Check a problem document, optionally a capacity");
  problem_flags(validate);
  validate->add_option("--capacity", o.capacity, "results.json or {\"coefficients\": [...]}");
  validate->add_option("--tol", o.tol, "Capacity tolerance")->capture_default_str();

  auto* dom = app.add_subcommand("dominance", "Dominance relation of the table");
  problem_flags(dom);
  dom->add_option("--format", o.format, "json or csv");

  auto* cons = app.add_subcommand("consistency", "Largest epsilon of the statement system");
  problem_flags(cons);

  auto* nap = app.add_subcommand("nap", "Necessary and possible preference relations");
  problem_flags(nap);
  node_flag(nap);
  nap->add_option("--format", o.format, "json or csv");
  nap->add_option("--out", o.out, "Directory for nap_<node>.csv files");

  auto* smaa = app.add_subcommand("smaa", "Sample compatible capacities and compute acceptability indices");
  problem_flags(smaa);
  node_flag(smaa);
  sampler_flags(smaa);
  smaa->add_option("--format", o.format, "json");
  smaa->add_option("--out", o.out, "Export directory");

  auto* rank = app.add_subcommand("rank", "Rankings from the barycenter capacity");
  problem_flags(rank);
  node_flag(rank);
  sampler_flags(rank);
  rank->add_option("--results", o.results, "results.json from smaa; sampled afresh when absent");
  rank->add_option("--format", o.format, "json or csv");
  rank->add_option("--out", o.out, "Directory for ranking_<node>.csv files");

  auto* report = app.add_subcommand("report", "Acceptability summaries per node");
  problem_flags(report);
  node_flag(report);
  sampler_flags(report);
  report->add_option("--results", o.results, "results.json from smaa; sampled afresh when absent");
  report->add_option("--format", o.format, "text, json or csv");
  report->add_option("--out", o.out, "Directory for summary_<node>.csv files");

  auto* serve = app.add_subcommand("serve", "HTTP JSON session service");
  serve->add_option("--bind", o.bind, "host:port; defaults to $MCDA_BIND, then 127.0.0.1:8080");

  report->preparse_callback([&](std::size_t) { o.format = "text"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << ErrorInfo{400, "bad-request", e.what(), {}}.to_json().dump() << '\n';
    return 2;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*dom) return cmd_dominance(o);
    if (*cons) return cmd_consistency(o);
    if (*nap) return cmd_nap(o);
    if (*smaa) return cmd_smaa(o);
    if (*rank) return cmd_rank(o);
    if (*report) return cmd_report(o);
    if (*serve) return cmd_serve(o);
  } catch (...) {
    std::cerr << classify_current_exception().to_json().dump() << '\n';
    return 1;
  }
  return 1;
}

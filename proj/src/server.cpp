#include "mcda/server.hpp"

#include <charconv>

#include <httplib.h>

#include "mcda/pipeline.hpp"

namespace mcda {

using nlohmann::json;

BindAddress parse_bind(std::string_view text) {
  BindAddress b;
  auto port_text = text;
  const auto colon = text.rfind(':');
  if (colon != std::string_view::npos) {
    if (colon > 0) b.host = std::string(text.substr(0, colon));
    port_text = text.substr(colon + 1);
  }
  int port = 0;
  const auto [p, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc{} || p != port_text.data() + port_text.size() || port < 0 || port > 65535) {
    throw InvalidArgument("bad bind address '" + std::string(text) + "'");
  }
  b.port = port;
  return b;
}

BindAddress choose_bind(const std::optional<std::string>& flag, const char* env_value) {
  if (flag) return parse_bind(*flag);
  if (env_value != nullptr && *env_value != '\0') return parse_bind(env_value);
  return {};
}

namespace {

using httplib::Request;
using httplib::Response;

void send(Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(Response& res, int status, std::string_view code, const std::string& message,
                const std::vector<std::string>& problems = {}) {
  json e = {{"code", code}, {"message", message}};
  if (!problems.empty()) e["problems"] = problems;
  send(res, status, {{"error", std::move(e)}});
}

template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const Request& req, Response& res) {
    try {
      f(req, res);
    } catch (...) {
      const auto info = classify_current_exception();
      send(res, info.http_status, info.to_json());
    }
  };
}

json body_of(const Request& req) {
  if (req.body.empty()) return json::object();
  try {
    auto j = json::parse(req.body);
    if (!j.is_object()) throw InvalidArgument("request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("request body is not valid JSON: ") + e.what());
  }
}

Problem problem_of(const json& doc) {
  if (doc.contains("table") && !doc.at("table").is_object()) {
    throw InvalidArgument("table: must be given inline over HTTP");
  }
  return problem_from_json(doc);
}

json problem_summary(const Problem& p) {
  json nodes = json::array();
  for (const auto& n : p.hierarchy.nodes()) {
    nodes.push_back({{"node", n.id.str()}, {"name", n.name}, {"level", n.id.level()}, {"leaf", n.is_leaf()}});
  }
  json alts = json::array();
  for (const auto& a : p.table.alternatives()) alts.push_back({{"id", a.id}, {"name", a.name}});
  return {{"name", p.name}, {"synthetic", p.synthetic}, {"alternatives", std::move(alts)},
          {"criteria", p.table.criteria()}, {"nodes", std::move(nodes)}};
}

json status_json(const JobStatus& s, std::uint64_t current) {
  json j = {{"state", std::string(to_string(s.state))},
            {"progress", s.fraction()},
            {"done", s.done},
            {"total", s.total},
            {"version", s.version},
            {"current_version", current}};
  if (!s.error.empty()) j["error"] = s.error;
  return j;
}

json statements_json(const std::vector<StatementEntry>& entries) {
  json a = json::array();
  for (const auto& e : entries) {
    auto j = statement_to_json(e.statement);
    j["id"] = e.id;
    a.push_back(std::move(j));
  }
  return a;
}

json diagnostic_json(const InconsistencyDiagnostic& d) {
  json removals = json::array();
  for (const auto& set : d.removals) removals.push_back(set);
  return {{"heuristic", d.heuristic}, {"removals", std::move(removals)}};
}

/// Statement list plus fresh feasibility, and the diagnostic when infeasible.
json statement_state(Session& s) {
  const auto snap = s.snapshot();
  json j = {{"version", snap.version},
            {"statements", statements_json(snap.statements)},
            {"consistency", consistency_to_json(snap.consistency)}};
  if (snap.diagnostic) j["diagnostic"] = diagnostic_json(*snap.diagnostic);
  return j;
}

json session_json(Session& s) {
  json j = {{"id", s.id()}, {"version", s.version()}, {"has_problem", s.has_problem()}};
  if (s.has_problem()) {
    j["problem"] = problem_summary(s.problem());
    j["statement_count"] = s.statements().size();
    j["consistency"] = consistency_to_json(s.consistency());
  }
  j["smaa"] = status_json(s.smaa_status(), s.version());
  return j;
}

std::uint64_t parse_id(const std::string& text) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size()) throw NotFound("no statement with id " + text);
  return v;
}

std::vector<NodeId> query_nodes(const Request& req, const CriteriaHierarchy& h, std::span<const NodeId> available) {
  if (!req.has_param("node")) return {available.begin(), available.end()};
  const auto id = h.resolve(req.get_param_value("node"));
  if (std::find(available.begin(), available.end(), id) == available.end()) {
    throw NotFound("node " + id.str() + " is not part of the SMAA result");
  }
  return {id};
}

std::vector<NodeId> result_nodes(const SmaaResult& r) {
  std::vector<NodeId> out;
  for (const auto& n : r.nodes) out.push_back(n.node);
  return out;
}

}  // namespace

void install_routes(httplib::Server& server, SessionRegistry& registry) {
  server.set_error_handler([](const Request&, Response& res) {
    if (res.body.empty()) {
      if (res.status == 404) send_error(res, 404, "not-found", "no such endpoint");
      else send_error(res, res.status, "bad-request", "request rejected");
    }
  });

  server.Get("/health", guarded([&registry](const Request&, Response& res) {
               send(res, 200, {{"status", "ok"}, {"sessions", registry.size()}});
             }));

  server.Post("/sessions", guarded([&registry](const Request& req, Response& res) {
                const auto body = body_of(req);
                std::optional<Problem> problem;
                if (!body.empty()) problem = problem_of(body);
                auto s = registry.create();
                if (problem) s->set_problem(std::move(*problem));
                send(res, 201, session_json(*s));
              }));

  const std::string sid = R"(/sessions/([0-9a-f]+))";

  server.Get(sid, guarded([&registry](const Request& req, Response& res) {
               send(res, 200, session_json(*registry.find(req.matches[1])));
             }));

  server.Delete(sid, guarded([&registry](const Request& req, Response& res) {
                  if (!registry.erase(req.matches[1])) throw NotFound("no session " + std::string(req.matches[1]));
                  send(res, 200, {{"deleted", std::string(req.matches[1])}});
                }));

  server.Put(sid + "/problem", guarded([&registry](const Request& req, Response& res) {
               auto s = registry.find(req.matches[1]);
               s->set_problem(problem_of(body_of(req)));
               send(res, 200, session_json(*s));
             }));

  server.Get(sid + "/problem", guarded([&registry](const Request& req, Response& res) {
               send(res, 200, problem_to_json(registry.find(req.matches[1])->problem()));
             }));

  server.Get(sid + "/statements", guarded([&registry](const Request& req, Response& res) {
               send(res, 200, statement_state(*registry.find(req.matches[1])));
             }));

  server.Post(sid + "/statements", guarded([&registry](const Request& req, Response& res) {
                auto s = registry.find(req.matches[1]);
                const auto ids = s->add_statement(body_of(req));
                auto j = statement_state(*s);
                j["added"] = ids;
                send(res, 201, j);
              }));

  server.Delete(sid + R"(/statements/(\d+))", guarded([&registry](const Request& req, Response& res) {
                  auto s = registry.find(req.matches[1]);
                  const auto id = parse_id(req.matches[2]);
                  s->remove_statement(id);
                  auto j = statement_state(*s);
                  j["removed"] = id;
                  send(res, 200, j);
                }));

  server.Get(sid + "/consistency", guarded([&registry](const Request& req, Response& res) {
               auto s = registry.find(req.matches[1]);
               auto j = consistency_to_json(s->consistency());
               j["version"] = s->version();
               send(res, 200, j);
             }));

  server.Get(sid + "/diagnostic", guarded([&registry](const Request& req, Response& res) {
               auto s = registry.find(req.matches[1]);
               const auto snap = s->snapshot();
               json j = {{"version", snap.version}, {"feasible", snap.consistency.feasible}, {"removals", json::array()}};
               if (snap.diagnostic) j.update(diagnostic_json(*snap.diagnostic));
               send(res, 200, j);
             }));

  server.Get(sid + "/dominance", guarded([&registry](const Request& req, Response& res) {
               auto s = registry.find(req.matches[1]);
               auto j = dominance_to_json(s->dominance(), s->problem().table);
               j["version"] = s->version();
               send(res, 200, j);
             }));

  server.Get(sid + "/nap", guarded([&registry](const Request& req, Response& res) {
               auto s = registry.find(req.matches[1]);
               const auto p = s->problem();
               const auto node = req.has_param("node") ? p.hierarchy.resolve(req.get_param_value("node")) : NodeId{};
               auto j = nap_to_json(s->nap(node), p);
               j["version"] = s->version();
               send(res, 200, j);
             }));

  server.Post(sid + "/smaa", guarded([&registry](const Request& req, Response& res) {
                auto s = registry.find(req.matches[1]);
                const auto body = body_of(req);
                const auto cfg = sampler_from_json(body);
                std::vector<std::string> exprs;
                if (body.contains("nodes")) exprs = body.at("nodes").get<std::vector<std::string>>();
                s->start_smaa(cfg, resolve_nodes(s->problem().hierarchy, exprs));
                send(res, 202, status_json(s->smaa_status(), s->version()));
              }));

  server.Get(sid + "/smaa", guarded([&registry](const Request& req, Response& res) {
               auto s = registry.find(req.matches[1]);
               send(res, 200, status_json(s->smaa_status(), s->version()));
             }));

  server.Delete(sid + "/smaa", guarded([&registry](const Request& req, Response& res) {
                  auto s = registry.find(req.matches[1]);
                  const bool cancelled = s->cancel_smaa();
                  auto j = status_json(s->smaa_status(), s->version());
                  j["cancelled"] = cancelled;
                  send(res, 200, j);
                }));

  server.Get(sid + "/smaa/result", guarded([&registry](const Request& req, Response& res) {
               auto s = registry.find(req.matches[1]);
               const auto out = s->smaa_result();
               auto j = results_to_json(out->result, s->problem(), out->config);
               j["version"] = out->version;
               send(res, 200, j);
             }));

  server.Get(sid + "/ranking", guarded([&registry](const Request& req, Response& res) {
               auto s = registry.find(req.matches[1]);
               const auto out = s->smaa_result();
               const auto p = s->problem();
               const auto nodes = query_nodes(req, p.hierarchy, result_nodes(out->result));
               json rankings = json::array();
               for (const auto& r : barycenter_ranking(out->result.barycenter, p.hierarchy, p.table, nodes)) {
                 rankings.push_back(ranking_to_json(r, p));
               }
               send(res, 200, {{"version", out->version}, {"rankings", std::move(rankings)}});
             }));

  server.Get(sid + "/summary", guarded([&registry](const Request& req, Response& res) {
               auto s = registry.find(req.matches[1]);
               const auto out = s->smaa_result();
               const auto p = s->problem();
               json summaries = json::array();
               for (const auto& n : query_nodes(req, p.hierarchy, result_nodes(out->result))) {
                 summaries.push_back(summary_to_json(out->result.at(n), p));
               }
               send(res, 200, {{"version", out->version}, {"summaries", std::move(summaries)}});
             }));
}

}  // namespace mcda

#include "mcda/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <ostream>

#include "mcda/errors.hpp"

namespace mcda {

using nlohmann::json;

json ErrorInfo::to_json() const {
  json e = {{"code", code}, {"message", message}};
  if (!problems.empty()) e["problems"] = problems;
  return {{"error", std::move(e)}};
}

ErrorInfo classify_current_exception() {
  try {
    throw;
  } catch (const NotFound& e) {
    return {404, "not-found", e.what(), {}};
  } catch (const UnknownNode& e) {
    return {404, "not-found", e.what(), {}};
  } catch (const Conflict& e) {
    return {409, "conflict", e.what(), {}};
  } catch (const Unprocessable& e) {
    return {422, "unprocessable", e.what(), {}};
  } catch (const InfeasibleSystem& e) {
    return {422, "unprocessable", e.what(), {}};
  } catch (const ZeroImportance& e) {
    return {422, "unprocessable", e.what(), {}};
  } catch (const EmptyInterior& e) {
    return {422, "unprocessable", e.what(), {}};
  } catch (const ValidationFailed& e) {
    return {400, "bad-request", e.what(), e.problems()};
  } catch (const InvalidArgument& e) {
    return {400, "bad-request", e.what(), {}};
  } catch (const json::exception& e) {
    return {400, "bad-request", e.what(), {}};
  } catch (const std::exception& e) {
    return {500, "internal", e.what(), {}};
  } catch (...) {
    return {500, "internal", "unknown error", {}};
  }
}

std::vector<NodeId> analysis_nodes(const CriteriaHierarchy& h) { return h.non_elementary_nodes(); }

std::vector<NodeId> resolve_nodes(const CriteriaHierarchy& h, std::span<const std::string> exprs) {
  if (exprs.empty()) return analysis_nodes(h);
  std::vector<NodeId> out;
  for (const auto& e : exprs) {
    auto id = h.resolve(e);
    if (h.node(id).is_leaf()) throw InvalidArgument("node '" + e + "' is an elementary criterion");
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(std::move(id));
  }
  return out;
}

EpsilonMode parse_epsilon_mode(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw InvalidArgument("epsilon mode must look like fraction:0.5 or fixed:0.01");
  const auto kind = text.substr(0, colon);
  const auto num = text.substr(colon + 1);
  double value = 0;
  const auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
  if (ec != std::errc{} || p != num.data() + num.size()) {
    throw InvalidArgument("epsilon mode value '" + std::string(num) + "' is not a number");
  }
  if (kind == "fraction") return EpsilonMode::fraction(value);
  if (kind == "fixed") return EpsilonMode::fixed(value);
  throw InvalidArgument("epsilon mode kind must be fraction or fixed, got '" + std::string(kind) + "'");
}

LinearConstraintSystem problem_system(const Problem& problem) {
  return assemble_edm(problem.statements, problem.hierarchy, &problem.table);
}

namespace {

json ids(const PerformanceTable& table) {
  json a = json::array();
  for (const auto& alt : table.alternatives()) a.push_back(alt.id);
  return a;
}

json bool_matrix(std::size_t size, const std::vector<std::uint8_t>& cells) {
  json m = json::array();
  for (std::size_t a = 0; a < size; ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < size; ++b) row.push_back(cells[a * size + b] != 0);
    m.push_back(std::move(row));
  }
  return m;
}

}  // namespace

json dominance_to_json(const DominanceMatrix& d, const PerformanceTable& table) {
  return {{"alternatives", ids(table)}, {"dominates", bool_matrix(d.size, d.cells)}};
}

void write_dominance_csv(std::ostream& out, const DominanceMatrix& d, const PerformanceTable& table) {
  out << "alternative";
  for (const auto& a : table.alternatives()) out << ',' << a.id;
  out << '\n';
  for (std::size_t a = 0; a < d.size; ++a) {
    out << table.alternatives()[a].id;
    for (std::size_t b = 0; b < d.size; ++b) out << ',' << (d(a, b) ? 1 : 0);
    out << '\n';
  }
}

json consistency_to_json(const ConsistencyResult& c) {
  return {{"feasible", c.feasible}, {"eps_star", c.eps_star}, {"status", std::string(to_string(c.status))}};
}

json diagnostic_to_json(const InconsistencyDiagnostic& d, std::span<const json> labels) {
  json removals = json::array();
  for (const auto& set : d.removals) {
    json s = json::array();
    for (auto k : set) s.push_back(labels[k]);
    removals.push_back(std::move(s));
  }
  return {{"heuristic", d.heuristic}, {"removals", std::move(removals)}};
}

json nap_to_json(const NapRelation& nap, const Problem& problem) {
  return {{"node", nap.node.str()},
          {"name", problem.hierarchy.node(nap.node).name},
          {"alternatives", ids(problem.table)},
          {"necessary", bool_matrix(nap.size, nap.necessary_cells)},
          {"possible", bool_matrix(nap.size, nap.possible_cells)},
          {"lp_count", nap.lp_count}};
}

json ranking_to_json(const NodeRanking& r, const Problem& problem) {
  std::vector<std::size_t> order(r.values.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return r.ranks[a] < r.ranks[b]; });
  json rows = json::array();
  for (auto a : order) {
    const auto& alt = problem.table.alternatives()[a];
    rows.push_back({{"rank", r.ranks[a]}, {"alternative", alt.id}, {"name", alt.name}, {"value", r.values[a]}});
  }
  return {{"node", r.node.str()}, {"name", problem.hierarchy.node(r.node).name}, {"ranking", std::move(rows)}};
}

json summary_to_json(const NodeIndices& idx, const Problem& problem) {
  json rows = json::array();
  for (const auto& row : rai_summary(idx)) {
    json top = json::array();
    for (const auto& [rank, f] : row.top) top.push_back({{"rank", rank}, {"frequency", f}});
    const auto& alt = problem.table.alternatives()[row.alternative];
    rows.push_back({{"alternative", alt.id},
                    {"name", alt.name},
                    {"top", std::move(top)},
                    {"best", {{"rank", row.best.first}, {"frequency", row.best.second}}},
                    {"worst", {{"rank", row.worst.first}, {"frequency", row.worst.second}}}});
  }
  return {{"node", idx.node.str()}, {"name", problem.hierarchy.node(idx.node).name}, {"summary", std::move(rows)}};
}

void write_summary_text(std::ostream& out, const NodeIndices& idx, const Problem& problem) {
  const auto flags = out.flags();
  out << std::fixed << std::setprecision(2);
  out << std::left << std::setw(24) << "alternative";
  for (const char* label : {"high_1", "high_2", "high_3", "best", "worst"}) out << ' ' << std::right << std::setw(14) << label;
  out << '\n';
  const auto cell = [&](std::size_t rank, double f) {
    out << ' ' << std::right << std::setw(5) << rank << std::setw(8) << 100.0 * f << '%';
  };
  for (const auto& row : rai_summary(idx)) {
    const auto& alt = problem.table.alternatives()[row.alternative];
    out << std::left << std::setw(24) << (alt.name.empty() ? alt.id : alt.name).substr(0, 23);
    for (std::size_t k = 0; k < 3; ++k) {
      if (k < row.top.size()) cell(row.top[k].first, row.top[k].second);
      else out << ' ' << std::setw(14) << "";
    }
    cell(row.best.first, row.best.second);
    cell(row.worst.first, row.worst.second);
    out << '\n';
  }
  out.flags(flags);
}

}  // namespace mcda

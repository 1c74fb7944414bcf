#pragma once

// Engine entry points shared by the command-line tool and the HTTP service.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcda/dataio.hpp"
#include "mcda/session.hpp"
#include "mcda/preference.hpp"
#include "mcda/smaa.hpp"

namespace mcda {

struct ErrorInfo {
  int http_status = 500;
  std::string code;  // bad-request, not-found, conflict, unprocessable, internal
  std::string message;
  std::vector<std::string> problems;

  nlohmann::json to_json() const;
};

/// Classifies the exception currently being handled.
ErrorInfo classify_current_exception();

/// Root and every macro-criterion, in hierarchy order.
std::vector<NodeId> analysis_nodes(const CriteriaHierarchy& h);
/// Resolves node expressions; an empty list means analysis_nodes(h).
std::vector<NodeId> resolve_nodes(const CriteriaHierarchy& h, std::span<const std::string> exprs);

/// "fraction:0.5" or "fixed:0.01".
EpsilonMode parse_epsilon_mode(std::string_view text);

LinearConstraintSystem problem_system(const Problem& problem);

nlohmann::json dominance_to_json(const DominanceMatrix& d, const PerformanceTable& table);
void write_dominance_csv(std::ostream& out, const DominanceMatrix& d, const PerformanceTable& table);

nlohmann::json consistency_to_json(const ConsistencyResult& c);
/// Statement positions are mapped through labels (e.g. session statement ids).
nlohmann::json diagnostic_to_json(const InconsistencyDiagnostic& d, std::span<const nlohmann::json> labels);

nlohmann::json nap_to_json(const NapRelation& nap, const Problem& problem);

nlohmann::json ranking_to_json(const NodeRanking& r, const Problem& problem);

/// Acceptability summary rows of one node, frequencies in [0,1].
nlohmann::json summary_to_json(const NodeIndices& idx, const Problem& problem);
/// Fixed-width table of the summary.
void write_summary_text(std::ostream& out, const NodeIndices& idx, const Problem& problem);

}  // namespace mcda

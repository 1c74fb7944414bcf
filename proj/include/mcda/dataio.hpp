#pragma once

// Problem documents (JSON), performance tables (CSV) and result exports.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcda/hierarchy.hpp"
#include "mcda/preference.hpp"
#include "mcda/smaa.hpp"
#include "mcda/table.hpp"

namespace mcda {

inline constexpr int kSchemaVersion = 1;

struct Problem {
  std::string name;
  std::string description;
  bool synthetic = false;
  CriteriaHierarchy hierarchy;
  PerformanceTable table;  // columns in leaf order
  std::vector<PreferenceStatement> statements;
  /// Document record each statement came from; chains expand to several.
  std::vector<std::size_t> statement_records;
  std::size_t record_count = 0;
};

/// Reads a problem document; a string "table" is a CSV path relative to the
/// document. Every problem found is reported in one ValidationFailed.
Problem load_problem(const std::filesystem::path& document);
Problem problem_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
/// Inline table; statements one record each.
nlohmann::json problem_to_json(const Problem& problem);

CriteriaHierarchy hierarchy_from_json(const nlohmann::json& node);
nlohmann::json hierarchy_to_json(const CriteriaHierarchy& h);

/// Header "id[,name],<criterion>..." in any column order; result columns
/// follow the leaves of h and take their directions.
PerformanceTable read_table_csv(std::istream& in, const CriteriaHierarchy& h);
PerformanceTable read_table_csv(const std::filesystem::path& path, const CriteriaHierarchy& h);
void write_table_csv(std::ostream& out, const PerformanceTable& table);

/// A "subjects" list longer than two on a strict kind is a chain
/// (a > b > c) and expands to consecutive pairs.
std::vector<PreferenceStatement> statements_from_json(const nlohmann::json& records, const CriteriaHierarchy& h,
                                                      const PerformanceTable* table,
                                                      std::vector<std::size_t>* record_of = nullptr);
PreferenceStatement statement_from_json(const nlohmann::json& record, const CriteriaHierarchy& h);
nlohmann::json statement_to_json(const PreferenceStatement& st);

nlohmann::json sampler_to_json(const SamplerConfig& cfg);
SamplerConfig sampler_from_json(const nlohmann::json& j);

nlohmann::json results_to_json(const SmaaResult& result, const Problem& problem, const SamplerConfig& cfg);
SmaaResult results_from_json(const nlohmann::json& j);

/// One row of the acceptability summary: the three most frequent ranks, and
/// the best and worst ranks reached.
struct RaiSummaryRow {
  std::size_t alternative = 0;
  std::vector<std::pair<std::size_t, double>> top;  // (rank, frequency), at most 3
  std::pair<std::size_t, double> best;
  std::pair<std::size_t, double> worst;
};

/// Sorted by most frequent rank, then by its frequency (descending).
std::vector<RaiSummaryRow> rai_summary(const NodeIndices& idx);

/// Shortest text that reads back to the same double.
std::string format_number(double v);

void write_rai_csv(std::ostream& out, const NodeIndices& idx, const PerformanceTable& table);
void write_pwi_csv(std::ostream& out, const NodeIndices& idx, const PerformanceTable& table);
void write_cumulative_csv(std::ostream& out, const NodeIndices& idx, const PerformanceTable& table, bool downward);
/// Frequencies in percent.
void write_summary_csv(std::ostream& out, const NodeIndices& idx, const PerformanceTable& table);
void write_ranking_csv(std::ostream& out, const NodeRanking& ranking, const PerformanceTable& table);
/// Label rows and value rows, eleven coefficients per block.
void write_barycenter_csv(std::ostream& out, const MobiusCapacity2Add& m, const std::vector<std::string>& criteria);
/// "N" necessary, "P" possible only, "-" neither; diagonal "=".
void write_nap_csv(std::ostream& out, const NapRelation& nap, const PerformanceTable& table);

/// results.json plus per-node rai_, pwi_, down_cum_, up_cum_, summary_ and
/// ranking_ files and barycenter.csv. Returns the files written.
std::vector<std::filesystem::path> export_results(const std::filesystem::path& dir, const SmaaResult& result,
                                                  const Problem& problem, const SamplerConfig& cfg);

/// File-name stem of a node: its path with dots replaced by underscores.
std::string node_stem(const NodeId& node);

}  // namespace mcda

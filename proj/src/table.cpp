#include "mcda/table.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mcda/errors.hpp"

namespace mcda {

namespace {

std::vector<std::string> check_shape(const std::vector<Alternative>& alternatives,
                                     const std::vector<std::string>& criteria, std::span<const double> values) {
  std::vector<std::string> problems;
  if (alternatives.empty()) problems.emplace_back("performance table has no alternatives");
  if (criteria.empty()) problems.emplace_back("performance table has no criteria");
  std::set<std::string> ids;
  for (std::size_t a = 0; a < alternatives.size(); ++a) {
    if (alternatives[a].id.empty()) problems.push_back("alternative row " + std::to_string(a + 1) + " has no id");
    else if (!ids.insert(alternatives[a].id).second)
      problems.push_back("duplicate alternative id '" + alternatives[a].id + "'");
  }
  std::set<std::string> names;
  for (const auto& c : criteria) {
    if (!names.insert(c).second) problems.push_back("duplicate criterion '" + c + "'");
  }
  if (values.size() != alternatives.size() * criteria.size()) {
    problems.push_back("table has " + std::to_string(values.size()) + " entries, expected " +
                       std::to_string(alternatives.size() * criteria.size()));
    return problems;
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      problems.push_back("non-finite value for alternative '" + alternatives[k / criteria.size()].id +
                         "' on criterion '" + criteria[k % criteria.size()] + "'");
    }
  }
  return problems;
}

}  // namespace

std::vector<double> normalize_column(std::span<const double> column, Direction direction,
                                     std::string_view criterion) {
  if (column.empty()) return {};
  const auto [lo_it, hi_it] = std::minmax_element(column.begin(), column.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) {
    throw InvalidArgument("criterion '" + std::string(criterion) +
                          "' is constant across alternatives; min-max normalization is undefined");
  }
  std::vector<double> out(column.size());
  for (std::size_t k = 0; k < column.size(); ++k) {
    out[k] = direction == Direction::increasing ? (column[k] - lo) / (hi - lo) : (hi - column[k]) / (hi - lo);
  }
  return out;
}

PerformanceTable PerformanceTable::from_raw(std::vector<Alternative> alternatives,
                                            std::vector<std::string> criteria,
                                            std::vector<Direction> directions, std::vector<double> raw) {
  auto problems = check_shape(alternatives, criteria, raw);
  if (directions.size() != criteria.size()) problems.emplace_back("one direction per criterion is required");
  if (!problems.empty()) throw ValidationFailed(std::move(problems));
  PerformanceTable t;
  t.alternatives_ = std::move(alternatives);
  t.criteria_ = std::move(criteria);
  t.directions_ = std::move(directions);
  t.raw_ = std::move(raw);
  return normalize(t);
}

PerformanceTable PerformanceTable::from_normalized(std::vector<Alternative> alternatives,
                                                   std::vector<std::string> criteria, std::vector<double> values) {
  auto problems = check_shape(alternatives, criteria, values);
  for (std::size_t k = 0; problems.empty() && k < values.size(); ++k) {
    if (values[k] < 0.0 || values[k] > 1.0) problems.emplace_back("normalized value outside [0,1]");
  }
  if (!problems.empty()) throw ValidationFailed(std::move(problems));
  PerformanceTable t;
  t.alternatives_ = std::move(alternatives);
  t.directions_.assign(criteria.size(), Direction::increasing);
  t.criteria_ = std::move(criteria);
  t.raw_ = values;
  t.normalized_ = std::move(values);
  return t;
}

std::span<const double> PerformanceTable::raw_row(std::size_t a) const {
  if (a >= alternatives_.size()) throw InvalidArgument("alternative index out of range");
  return {raw_.data() + a * criteria_.size(), criteria_.size()};
}

std::span<const double> PerformanceTable::normalized_row(std::size_t a) const {
  if (a >= alternatives_.size()) throw InvalidArgument("alternative index out of range");
  return {normalized_.data() + a * criteria_.size(), criteria_.size()};
}

std::optional<std::size_t> PerformanceTable::alternative_index(std::string_view id) const {
  for (std::size_t a = 0; a < alternatives_.size(); ++a) {
    if (alternatives_[a].id == id) return a;
  }
  return std::nullopt;
}

PerformanceTable PerformanceTable::subset(std::span<const std::size_t> rows) const {
  std::vector<Alternative> alts;
  std::vector<double> raw;
  for (std::size_t a : rows) {
    alts.push_back(alternatives_.at(a));
    const auto row = raw_row(a);
    raw.insert(raw.end(), row.begin(), row.end());
  }
  return from_raw(std::move(alts), criteria_, directions_, std::move(raw));
}

PerformanceTable normalize(const PerformanceTable& table) {
  const std::size_t rows = table.alternative_count();
  const std::size_t cols = table.criteria_count();
  std::vector<double> normalized(rows * cols);
  std::vector<std::string> problems;
  std::vector<double> column(rows);
  for (std::size_t i = 0; i < cols; ++i) {
    for (std::size_t a = 0; a < rows; ++a) column[a] = table.raw(a, i);
    try {
      const auto norm = normalize_column(column, table.directions()[i], table.criteria()[i]);
      for (std::size_t a = 0; a < rows; ++a) normalized[a * cols + i] = norm[a];
    } catch (const InvalidArgument& e) {
      problems.emplace_back(e.what());
    }
  }
  if (!problems.empty()) throw ValidationFailed(std::move(problems));
  // Rebuild through from_normalized to reuse its range check, then restore raw data.
  auto rebuilt = PerformanceTable::from_normalized(table.alternatives(), table.criteria(), std::move(normalized));
  rebuilt.directions_ = table.directions();
  rebuilt.raw_ = table.raw_;
  return rebuilt;
}

}  // namespace mcda

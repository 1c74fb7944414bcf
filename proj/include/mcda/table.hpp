#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcda/hierarchy.hpp"

namespace mcda {

struct Alternative {
  std::string id;
  std::string name;

  friend bool operator==(const Alternative&, const Alternative&) = default;
};

/// Alternatives x elementary criteria, raw and normalized to [0,1]. Rows are
/// stored contiguously.
class PerformanceTable {
 public:
  PerformanceTable() = default;

  /// Normalizes every column by min-max according to its direction. Throws
  /// ValidationFailed on missing/duplicate ids, non-finite entries, or a
  /// constant column.
  static PerformanceTable from_raw(std::vector<Alternative> alternatives, std::vector<std::string> criteria,
                                   std::vector<Direction> directions, std::vector<double> raw);
  /// Wraps values that are already on the [0,1] scale; raw equals normalized.
  static PerformanceTable from_normalized(std::vector<Alternative> alternatives,
                                          std::vector<std::string> criteria, std::vector<double> values);

  std::size_t alternative_count() const noexcept { return alternatives_.size(); }
  std::size_t criteria_count() const noexcept { return criteria_.size(); }
  const std::vector<Alternative>& alternatives() const noexcept { return alternatives_; }
  const std::vector<std::string>& criteria() const noexcept { return criteria_; }
  const std::vector<Direction>& directions() const noexcept { return directions_; }

  std::span<const double> raw_row(std::size_t a) const;
  std::span<const double> normalized_row(std::size_t a) const;
  double raw(std::size_t a, std::size_t i) const { return raw_.at(a * criteria_.size() + i); }
  double normalized(std::size_t a, std::size_t i) const { return normalized_.at(a * criteria_.size() + i); }

  std::optional<std::size_t> alternative_index(std::string_view id) const;
  /// Same data restricted to the listed alternatives, renormalized.
  PerformanceTable subset(std::span<const std::size_t> rows) const;

  friend bool operator==(const PerformanceTable&, const PerformanceTable&) = default;

 private:
  friend PerformanceTable normalize(const PerformanceTable& table);

  std::vector<Alternative> alternatives_;
  std::vector<std::string> criteria_;
  std::vector<Direction> directions_;
  std::vector<double> raw_;
  std::vector<double> normalized_;
};

/// Min-max normalization of one column: (g-min)/(max-min) for increasing
/// criteria, (max-g)/(max-min) for decreasing ones.
std::vector<double> normalize_column(std::span<const double> column, Direction direction,
                                     std::string_view criterion);

/// Recomputes the normalized block of a table from its raw values.
PerformanceTable normalize(const PerformanceTable& table);

}  // namespace mcda

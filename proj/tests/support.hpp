#pragma once

#include <algorithm>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "mcda/capacity.hpp"
#include "mcda/errors.hpp"
#include "mcda/hierarchy.hpp"
#include "mcda/preference.hpp"
#include "mcda/table.hpp"

namespace testsupport {

// Random monotone normalized 2-additive capacity: positive singletons, pairs
// shrunk until every criterion keeps a nonnegative binding sum.
inline mcda::MobiusCapacity2Add random_capacity(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  for (;;) {
    std::vector<double> s(n), p(n * (n - 1) / 2);
    for (auto& v : s) v = 0.05 + unit(rng);
    for (auto& v : p) v = sym(rng);
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      double neg = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double v = p[mcda::MobiusCapacity2Add::pair_index(n, std::min(i, j), std::max(i, j)) - n];
        neg += std::min(0.0, v);
      }
      if (neg < 0.0) scale = std::min(scale, 0.95 * s[i] / -neg);
    }
    double total = 0.0;
    for (auto& v : p) total += (v *= scale);
    for (double v : s) total += v;
    if (total <= 1e-3) continue;
    for (auto& v : s) v /= total;
    for (auto& v : p) v /= total;
    return mcda::MobiusCapacity2Add(std::move(s), std::move(p));
  }
}

inline std::vector<double> random_evaluations(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = unit(rng);
  return x;
}

inline const std::vector<std::string>& case_study_leaves() {
  static const std::vector<std::string> names{"OH", "AA", "BS", "PSI", "CP", "R", "TPR", "IWU", "LS", "OU"};
  return names;
}

inline mcda::CriteriaHierarchy case_study_hierarchy() {
  using S = mcda::CriteriaHierarchy::Spec;
  using D = mcda::Direction;
  auto leaf = [](std::string name, D d) { return S{std::move(name), {}, d, ""}; };
  S root{"root", {}, D::increasing, ""};
  root.children.push_back(S{"Ec", {leaf("OH", D::decreasing), leaf("AA", D::increasing), leaf("BS", D::increasing)}});
  root.children.push_back(S{"So", {leaf("PSI", D::increasing), leaf("CP", D::decreasing), leaf("R", D::decreasing)}});
  root.children.push_back(S{"En",
                            {leaf("TPR", D::increasing), leaf("IWU", D::decreasing), leaf("LS", D::decreasing),
                             leaf("OU", D::increasing)}});
  return mcda::CriteriaHierarchy::build(root);
}

// The published barycenter, singletons then pairs in lexicographic order.
inline std::vector<double> published_barycenter() {
  return {0.0871,  0.1103,  0.0869,  0.1508,  0.1187,  0.1218,  0.0695,  0.0882,  0.0649,  0.0948,
          -0.0001, -0.0003, -0.0002, -0.0163, -0.0001, 0.0004,  -0.0002, 0.0000,  0.0006,  -0.0006,
          -0.0044, 0.0006,  0.0005,  -0.0005, -0.0007, 0.0000,  0.0005,  0.0000,  0.0004,  -0.0014,
          0.0133,  -0.0005, -0.0003, -0.0001, 0.0002,  -0.0008, -0.0010, 0.0011,  0.0005,  0.0010,
          -0.0001, 0.0003,  -0.0002, 0.0001,  0.0003,  -0.0002, 0.0004,  -0.0002, -0.0003, 0.0001,
          0.0000,  -0.0002, 0.0004,  0.0006,  0.0144};
}

// The eight criterion statements of the case study.
inline std::vector<mcda::PreferenceStatement> case_study_statements() {
  using K = mcda::StatementKind;
  const auto root = mcda::NodeId{};
  const auto en = mcda::NodeId::parse("3");
  const auto so = mcda::NodeId::parse("2");
  return {
      {K::crit_more_important, root, 1, {"So", "En"}, {}, "(i)"},
      {K::crit_more_important, root, 1, {"En", "Ec"}, {}, "(i)"},
      {K::crit_more_important, root, 2, {"AA", "TPR"}, {}, "(ii)"},
      {K::crit_more_important, en, 2, {"OU", "LS"}, {}, "(iii)"},
      {K::crit_more_important, so, 2, {"PSI", "CP"}, {}, "(iv)"},
      {K::crit_more_important, root, 2, {"CP", "OH"}, {}, "(v)"},
      {K::crit_positive_interaction, en, 2, {"LS", "OU"}, {}, "(vi)"},
      {K::crit_positive_interaction, root, 2, {"BS", "TPR"}, {}, "(vii)"},
      {K::crit_negative_interaction, root, 2, {"OH", "CP"}, {}, "(viii)"},
  };
}

inline mcda::PerformanceTable random_table(std::mt19937_64& rng, std::size_t alternatives, std::size_t criteria) {
  std::vector<mcda::Alternative> alts;
  for (std::size_t a = 0; a < alternatives; ++a) alts.push_back({"a" + std::to_string(a + 1), ""});
  std::vector<std::string> names;
  for (std::size_t i = 0; i < criteria; ++i) names.push_back("g" + std::to_string(i + 1));
  // Values on a coarse grid so ties and dominance actually occur.
  std::uniform_int_distribution<int> grid(0, 4);
  for (;;) {
    std::vector<double> raw(alternatives * criteria);
    for (auto& v : raw) v = grid(rng) / 4.0;
    try {
      return mcda::PerformanceTable::from_raw(alts, names, std::vector<mcda::Direction>(criteria), raw);
    } catch (const mcda::ValidationFailed&) {
      // constant column; draw again
    }
  }
}

}  // namespace testsupport

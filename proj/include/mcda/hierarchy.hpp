#pragma once

// Criteria trees and node-level (hierarchical) Choquet values derived from one
// global 2-additive capacity on the elementary criteria.

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcda/capacity.hpp"

namespace mcda {

enum class Direction { increasing, decreasing };

std::string_view to_string(Direction d);
Direction direction_from_string(std::string_view text);

/// Position of a node in the tree: child k of node r has path (r, k), k >= 1.
/// The root is the empty path.
struct NodeId {
  std::vector<int> path;

  bool is_root() const noexcept { return path.empty(); }
  int level() const noexcept { return static_cast<int>(path.size()); }
  NodeId child(int k) const;
  /// "0" for the root, otherwise dot-separated indices such as "3.2".
  std::string str() const;
  static NodeId parse(std::string_view text);

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
  friend bool operator==(const NodeId&, const NodeId&) = default;
};

class CriteriaHierarchy {
 public:
  /// Input tree description. A node without children is an elementary criterion.
  struct Spec {
    std::string name;
    std::vector<Spec> children;
    Direction direction = Direction::increasing;
    std::string unit;
  };

  struct Node {
    NodeId id;
    std::string name;
    std::vector<std::size_t> children;  // indices into nodes()
    std::optional<std::size_t> parent;
    CriteriaMask elementary = 0;        // E(g_r)
    std::optional<ElementaryCriterionId> leaf;
    Direction direction = Direction::increasing;
    std::string unit;

    bool is_leaf() const noexcept { return leaf.has_value(); }
  };

  CriteriaHierarchy() = default;
  /// Leaves are numbered in depth-first order. Throws ValidationFailed on
  /// duplicate names, a childless root, or more than 64 leaves.
  static CriteriaHierarchy build(const Spec& root);
  /// Root with one leaf per name; all criteria increasing.
  static CriteriaHierarchy flat(const std::vector<std::string>& leaf_names);

  std::size_t elementary_count() const noexcept { return leaves_.size(); }
  const std::vector<ElementaryCriterionId>& elementary() const noexcept { return leaves_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& root() const { return nodes_.front(); }
  const Node& node(const NodeId& id) const;
  bool contains(const NodeId& id) const;

  /// Resolves a node by name, by path ("1.2"), or "root"/"0".
  NodeId resolve(std::string_view expr) const;
  std::optional<NodeId> find(std::string_view name) const;

  /// G^l_r: descendants of r located at absolute tree level l (> level of r).
  std::vector<NodeId> level_members(const NodeId& r, int level) const;
  std::vector<NodeId> non_elementary_nodes() const;
  Spec spec() const;

 private:
  std::size_t index_of(const NodeId& id) const;
  std::vector<Node> nodes_;
  std::vector<ElementaryCriterionId> leaves_;
};

enum class Preference { better, worse, tie };

CriteriaMask elementary_descendants(const CriteriaHierarchy& h, const NodeId& r);

/// mu_r(F) for F a set of children of r, given by 1-based child indices.
double derived_capacity(const MobiusCapacity2Add& m, const CriteriaHierarchy& h, const NodeId& r,
                        std::span<const int> children);

/// C_mu(x_r) / mu(E(g_r)) where x_r zeroes evaluations outside E(g_r).
double hierarchical_choquet(const MobiusCapacity2Add& m, const CriteriaHierarchy& h, const NodeId& r,
                            std::span<const double> x);

/// Shapley value of member (a node of G^l_r) with respect to r at level l.
double hierarchical_shapley(const MobiusCapacity2Add& m, const CriteriaHierarchy& h, const NodeId& r,
                            const NodeId& member, int level);
/// Same, for the w-th child of r.
double hierarchical_shapley(const MobiusCapacity2Add& m, const CriteriaHierarchy& h, const NodeId& r,
                            int w);

double hierarchical_interaction(const MobiusCapacity2Add& m, const CriteriaHierarchy& h, const NodeId& r,
                                const NodeId& first, const NodeId& second, int level);
double hierarchical_interaction(const MobiusCapacity2Add& m, const CriteriaHierarchy& h, const NodeId& r,
                                int w1, int w2);

/// Compares two alternatives on node r; values within 1e-12 are a tie.
Preference node_preference(const MobiusCapacity2Add& m, const CriteriaHierarchy& h, const NodeId& r,
                           std::span<const double> a, std::span<const double> b);

}  // namespace mcda

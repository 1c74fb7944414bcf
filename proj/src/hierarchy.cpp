#include "mcda/hierarchy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "mcda/errors.hpp"

namespace mcda {

std::string_view to_string(Direction d) {
  return d == Direction::increasing ? "increasing" : "decreasing";
}

Direction direction_from_string(std::string_view text) {
  if (text == "increasing" || text == "up" || text == "max") return Direction::increasing;
  if (text == "decreasing" || text == "down" || text == "min") return Direction::decreasing;
  throw InvalidArgument("unknown preference direction '" + std::string(text) + "'");
}

NodeId NodeId::child(int k) const {
  NodeId c = *this;
  c.path.push_back(k);
  return c;
}

std::string NodeId::str() const {
  if (path.empty()) return "0";
  std::string out;
  for (int k : path) {
    if (!out.empty()) out += '.';
    out += std::to_string(k);
  }
  return out;
}

NodeId NodeId::parse(std::string_view text) {
  NodeId id;
  if (text == "0" || text == "root" || text.empty()) return id;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t dot = std::min(text.find('.', pos), text.size());
    int value = 0;
    const auto* first = text.data() + pos;
    const auto* last = text.data() + dot;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || value < 1) {
      throw InvalidArgument("malformed node path '" + std::string(text) + "'");
    }
    id.path.push_back(value);
    pos = dot + 1;
  }
  return id;
}

namespace {

void collect(const CriteriaHierarchy::Spec& spec, const NodeId& id, std::optional<std::size_t> parent,
             std::vector<CriteriaHierarchy::Node>& nodes, std::vector<ElementaryCriterionId>& leaves,
             std::vector<std::string>& problems) {
  const std::size_t self = nodes.size();
  nodes.push_back({});
  nodes[self].id = id;
  nodes[self].name = spec.name;
  nodes[self].parent = parent;
  nodes[self].direction = spec.direction;
  nodes[self].unit = spec.unit;
  if (spec.name.empty()) problems.push_back("node " + id.str() + " has no name");
  if (spec.children.empty()) {
    if (!parent) {
      problems.push_back("root criterion has no subcriteria");
      return;
    }
    if (leaves.size() >= kMaxCriteria) {
      problems.push_back("more than 64 elementary criteria");
      return;
    }
    nodes[self].leaf = ElementaryCriterionId{spec.name, leaves.size()};
    nodes[self].elementary = criterion_bit(leaves.size());
    leaves.push_back(*nodes[self].leaf);
    return;
  }
  for (std::size_t k = 0; k < spec.children.size(); ++k) {
    const std::size_t child = nodes.size();
    nodes[self].children.push_back(child);
    collect(spec.children[k], id.child(static_cast<int>(k + 1)), self, nodes, leaves, problems);
    if (child < nodes.size()) nodes[self].elementary |= nodes[child].elementary;
  }
}

}  // namespace

CriteriaHierarchy CriteriaHierarchy::build(const Spec& root) {
  CriteriaHierarchy h;
  std::vector<std::string> problems;
  collect(root, NodeId{}, std::nullopt, h.nodes_, h.leaves_, problems);
  std::set<std::string> seen;
  for (const auto& node : h.nodes_) {
    if (!node.name.empty() && !seen.insert(node.name).second) {
      problems.push_back("duplicate criterion name '" + node.name + "'");
    }
  }
  if (!problems.empty()) throw ValidationFailed(std::move(problems));
  return h;
}

CriteriaHierarchy CriteriaHierarchy::flat(const std::vector<std::string>& leaf_names) {
  Spec root{"root", {}, Direction::increasing, {}};
  for (const auto& name : leaf_names) root.children.push_back({name, {}, Direction::increasing, {}});
  return build(root);
}

std::size_t CriteriaHierarchy::index_of(const NodeId& id) const {
  if (nodes_.empty()) throw UnknownNode(id.str());
  std::size_t current = 0;
  for (int k : id.path) {
    const auto& children = nodes_[current].children;
    if (k < 1 || static_cast<std::size_t>(k) > children.size()) throw UnknownNode(id.str());
    current = children[static_cast<std::size_t>(k - 1)];
  }
  return current;
}

const CriteriaHierarchy::Node& CriteriaHierarchy::node(const NodeId& id) const {
  return nodes_[index_of(id)];
}

bool CriteriaHierarchy::contains(const NodeId& id) const {
  try {
    index_of(id);
    return true;
  } catch (const UnknownNode&) {
    return false;
  }
}

std::optional<NodeId> CriteriaHierarchy::find(std::string_view name) const {
  for (const auto& node : nodes_) {
    if (node.name == name) return node.id;
  }
  return std::nullopt;
}

NodeId CriteriaHierarchy::resolve(std::string_view expr) const {
  if (auto named = find(expr)) return *named;
  NodeId id;
  try {
    id = NodeId::parse(expr);
  } catch (const InvalidArgument&) {
    throw UnknownNode(std::string(expr));
  }
  if (!contains(id)) throw UnknownNode(std::string(expr));
  return id;
}

std::vector<NodeId> CriteriaHierarchy::level_members(const NodeId& r, int level) const {
  const std::size_t start = index_of(r);
  if (level <= r.level()) {
    throw InvalidArgument("level " + std::to_string(level) + " is not below node " + r.str());
  }
  std::vector<NodeId> members;
  std::vector<std::size_t> stack{start};
  while (!stack.empty()) {
    const std::size_t current = stack.back();
    stack.pop_back();
    const auto& node = nodes_[current];
    if (node.id.level() == level) {
      members.push_back(node.id);
      continue;
    }
    for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) stack.push_back(*it);
  }
  return members;
}

std::vector<NodeId> CriteriaHierarchy::non_elementary_nodes() const {
  std::vector<NodeId> out;
  for (const auto& node : nodes_) {
    if (!node.is_leaf()) out.push_back(node.id);
  }
  return out;
}

CriteriaHierarchy::Spec CriteriaHierarchy::spec() const {
  auto rebuild = [this](auto&& self, std::size_t index) -> Spec {
    const auto& node = nodes_[index];
    Spec s{node.name, {}, node.direction, node.unit};
    for (std::size_t c : node.children) s.children.push_back(self(self, c));
    return s;
  };
  return rebuild(rebuild, 0);
}

CriteriaMask elementary_descendants(const CriteriaHierarchy& h, const NodeId& r) {
  return h.node(r).elementary;
}

namespace {

double importance(const MobiusCapacity2Add& m, const CriteriaHierarchy& h, const NodeId& r) {
  const double denom = capacity_from_mobius(m, elementary_descendants(h, r));
  if (!(denom > 0.0)) throw ZeroImportance(r.str());
  return denom;
}

void check_sizes(const MobiusCapacity2Add& m, const CriteriaHierarchy& h) {
  if (m.criteria_count() != h.elementary_count()) {
    throw InvalidArgument("capacity has " + std::to_string(m.criteria_count()) +
                          " criteria but the hierarchy has " + std::to_string(h.elementary_count()) +
                          " leaves");
  }
}

const NodeId& require_member(const std::vector<NodeId>& members, const NodeId& candidate,
                             const NodeId& r, int level) {
  auto it = std::find(members.begin(), members.end(), candidate);
  if (it == members.end()) {
    throw InvalidArgument("criterion " + candidate.str() + " is not a level-" + std::to_string(level) +
                          " subcriterion of " + r.str());
  }
  return *it;
}

}  // namespace

double derived_capacity(const MobiusCapacity2Add& m, const CriteriaHierarchy& h, const NodeId& r,
                        std::span<const int> children) {
  check_sizes(m, h);
  const auto& node = h.node(r);
  CriteriaMask family = 0;
  for (int w : children) {
    if (w < 1 || static_cast<std::size_t>(w) > node.children.size()) {
      throw InvalidArgument("child index " + std::to_string(w) + " is not a child of " + r.str());
    }
    family |= h.nodes()[node.children[static_cast<std::size_t>(w - 1)]].elementary;
  }
  return capacity_from_mobius(m, family) / importance(m, h, r);
}

double hierarchical_choquet(const MobiusCapacity2Add& m, const CriteriaHierarchy& h, const NodeId& r,
                            std::span<const double> x) {
  check_sizes(m, h);
  if (x.size() != h.elementary_count()) throw InvalidArgument("evaluation vector has wrong length");
  const CriteriaMask inside = elementary_descendants(h, r);
  std::vector<double> restricted(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (inside & criterion_bit(i)) restricted[i] = x[i];
  }
  return choquet_2additive(m, restricted) / importance(m, h, r);
}

double hierarchical_shapley(const MobiusCapacity2Add& m, const CriteriaHierarchy& h, const NodeId& r,
                            const NodeId& member, int level) {
  check_sizes(m, h);
  const auto members = h.level_members(r, level);
  require_member(members, member, r, level);
  const CriteriaMask own = elementary_descendants(h, member);
  CriteriaMask rest = 0;
  for (const auto& other : members) {
    if (other != member) rest |= elementary_descendants(h, other);
  }
  const std::size_t n = m.criteria_count();
  double numerator = 0.0;
  for (std::size_t t1 = 0; t1 < n; ++t1) {
    if (!(own & criterion_bit(t1))) continue;
    numerator += m.singleton(t1);
    for (std::size_t t2 = 0; t2 < n; ++t2) {
      if (t2 == t1) continue;
      if ((own & criterion_bit(t2)) && t2 > t1) numerator += m.pair(t1, t2);
      if (rest & criterion_bit(t2)) numerator += m.pair(t1, t2) / 2.0;
    }
  }
  return numerator / importance(m, h, r);
}

double hierarchical_shapley(const MobiusCapacity2Add& m, const CriteriaHierarchy& h, const NodeId& r,
                            int w) {
  return hierarchical_shapley(m, h, r, r.child(w), r.level() + 1);
}

double hierarchical_interaction(const MobiusCapacity2Add& m, const CriteriaHierarchy& h, const NodeId& r,
                                const NodeId& first, const NodeId& second, int level) {
  check_sizes(m, h);
  if (first == second) throw InvalidArgument("interaction of a criterion with itself");
  const auto members = h.level_members(r, level);
  require_member(members, first, r, level);
  require_member(members, second, r, level);
  const CriteriaMask e1 = elementary_descendants(h, first);
  const CriteriaMask e2 = elementary_descendants(h, second);
  const std::size_t n = m.criteria_count();
  double numerator = 0.0;
  for (std::size_t t1 = 0; t1 < n; ++t1) {
    if (!(e1 & criterion_bit(t1))) continue;
    for (std::size_t t2 = 0; t2 < n; ++t2) {
      if (e2 & criterion_bit(t2)) numerator += m.pair(t1, t2);
    }
  }
  return numerator / importance(m, h, r);
}

double hierarchical_interaction(const MobiusCapacity2Add& m, const CriteriaHierarchy& h, const NodeId& r,
                                int w1, int w2) {
  return hierarchical_interaction(m, h, r, r.child(w1), r.child(w2), r.level() + 1);
}

Preference node_preference(const MobiusCapacity2Add& m, const CriteriaHierarchy& h, const NodeId& r,
                           std::span<const double> a, std::span<const double> b) {
  const double va = hierarchical_choquet(m, h, r, a);
  const double vb = hierarchical_choquet(m, h, r, b);
  if (std::abs(va - vb) <= 1e-12) return Preference::tie;
  return va > vb ? Preference::better : Preference::worse;
}

}  // namespace mcda

#include "mcda/smaa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "affine_hull.hpp"
#include "mcda/errors.hpp"
#include "mcda/preference.hpp"

namespace mcda {

void SamplerConfig::check() const {
  if (sample_count == 0) throw InvalidArgument("sample count must be positive");
  if (thinning == 0) throw InvalidArgument("thinning must be at least 1");
  if (epsilon_mode.kind == EpsilonMode::Kind::fraction_of_eps_star) {
    if (!(epsilon_mode.value > 0.0 && epsilon_mode.value <= 1.0)) {
      throw InvalidArgument("epsilon fraction must lie in (0,1]");
    }
  } else if (!(epsilon_mode.value >= 0.0)) {
    throw InvalidArgument("fixed epsilon must be nonnegative");
  }
}

namespace {

struct Inequalities {
  std::size_t cols = 0;
  std::vector<double> a;  // row-major, each row a . x <= b
  std::vector<double> b;

  std::size_t rows() const noexcept { return b.size(); }
};

Inequalities collect_inequalities(const LinearConstraintSystem& sys) {
  Inequalities out;
  out.cols = sys.variable_count();
  for (const auto& c : sys.constraints()) {
    if (c.relation == Relation::equal) continue;
    const double sign = c.relation == Relation::less_equal ? 1.0 : -1.0;
    for (double v : c.coefficients) out.a.push_back(sign * v);
    out.b.push_back(sign * c.bound);
  }
  return out;
}

double resolve_epsilon(const LinearConstraintSystem& sys, const EpsilonMode& mode) {
  const auto c = check_consistency(sys);
  if (c.status != LpStatus::optimal) throw InfeasibleSystem("the constraint system is infeasible");
  if (mode.kind == EpsilonMode::Kind::fixed) {
    if (mode.value > c.eps_star + 1e-12) {
      throw InvalidArgument("fixed epsilon " + std::to_string(mode.value) + " exceeds eps* = " +
                            std::to_string(c.eps_star));
    }
    return mode.value;
  }
  if (!c.feasible) throw InfeasibleSystem("no compatible capacity satisfies the strict statements");
  return mode.value * c.eps_star;
}

}  // namespace

SampleSet har_sample(const LinearConstraintSystem& sys, const SamplerConfig& cfg, const ProgressFn& progress) {
  cfg.check();
  SampleSet out;
  LinearConstraintSystem work;
  if (const auto eps = sys.epsilon_variable()) {
    out.epsilon = resolve_epsilon(sys, cfg.epsilon_mode);
    work = sys.with_fixed_variable(*eps, out.epsilon);
  } else {
    work = sys;
  }
  const std::size_t nv = work.variable_count();
  out.variables = work.variables();

  const auto start = chebyshev_center(work);
  std::vector<const Constraint*> equalities;
  for (const auto& c : work.constraints()) {
    if (c.relation == Relation::equal) equalities.push_back(&c);
  }
  const auto hull = detail::affine_hull(equalities, nv);
  if (hull.rank == 0) throw EmptyInterior("the equalities fix a single point");
  const auto ineq = collect_inequalities(work);

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> x = start;
  std::vector<double> u(hull.rank);
  std::vector<double> d(nv);
  const std::size_t total = cfg.burn_in + cfg.sample_count * cfg.thinning;
  out.values.reserve(cfg.sample_count * nv);

  for (std::size_t step = 1; step <= total; ++step) {
    for (auto& v : u) v = normal(rng);
    hull.expand(u, d);
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < ineq.rows(); ++r) {
      const double* a = ineq.a.data() + r * nv;
      double ad = 0.0;
      double ax = 0.0;
      for (std::size_t k = 0; k < nv; ++k) {
        ad += a[k] * d[k];
        ax += a[k] * x[k];
      }
      const double slack = std::max(ineq.b[r] - ax, 0.0);
      if (ad > 0.0) hi = std::min(hi, slack / ad);
      else if (ad < 0.0) lo = std::max(lo, slack / ad);
    }
    for (const auto& f : work.families()) {
      const auto [flo, fhi] = f->chord(x, d);
      lo = std::max(lo, flo);
      hi = std::min(hi, fhi);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw InvalidArgument("the polytope is unbounded");
    const double t = lo + (hi - lo) * unit(rng);
    for (std::size_t k = 0; k < nv; ++k) x[k] += t * d[k];
    if (step % 100 == 0) hull.reproject(start, x);

    if (step > cfg.burn_in && (step - cfg.burn_in) % cfg.thinning == 0) {
      out.values.insert(out.values.end(), x.begin(), x.end());
    }
    if (progress && (step % 1024 == 0 || step == total) && !progress(step, total)) throw Cancelled();
  }
  return out;
}

std::vector<std::size_t> rank_function(std::span<const double> values) {
  std::vector<std::size_t> ranks(values.size(), 1);
  for (std::size_t a = 0; a < values.size(); ++a) {
    for (std::size_t b = 0; b < values.size(); ++b) {
      if (values[b] > values[a]) ++ranks[a];
    }
  }
  return ranks;
}

double NodeIndices::rai(std::size_t a, std::size_t rank) const {
  return static_cast<double>(rank_counts.at(a * alternatives + rank - 1)) / static_cast<double>(samples);
}

double NodeIndices::pwi(std::size_t a, std::size_t b) const {
  return static_cast<double>(win_counts.at(a * alternatives + b)) / static_cast<double>(samples);
}

double NodeIndices::tie(std::size_t a, std::size_t b) const {
  const auto wins = win_counts.at(a * alternatives + b) + win_counts.at(b * alternatives + a);
  return static_cast<double>(samples - wins) / static_cast<double>(samples);
}

double NodeIndices::down_cum(std::size_t a, std::size_t rank) const {
  std::uint64_t c = 0;
  for (std::size_t q = 1; q <= rank; ++q) c += rank_counts.at(a * alternatives + q - 1);
  return static_cast<double>(c) / static_cast<double>(samples);
}

double NodeIndices::up_cum(std::size_t a, std::size_t rank) const {
  std::uint64_t c = 0;
  for (std::size_t q = rank; q <= alternatives; ++q) c += rank_counts.at(a * alternatives + q - 1);
  return static_cast<double>(c) / static_cast<double>(samples);
}

std::vector<double> NodeIndices::rai_matrix() const {
  std::vector<double> out(alternatives * alternatives);
  for (std::size_t a = 0; a < alternatives; ++a) {
    for (std::size_t s = 1; s <= alternatives; ++s) out[a * alternatives + s - 1] = rai(a, s);
  }
  return out;
}

std::vector<double> NodeIndices::pwi_matrix() const {
  std::vector<double> out(alternatives * alternatives);
  for (std::size_t a = 0; a < alternatives; ++a) {
    for (std::size_t b = 0; b < alternatives; ++b) out[a * alternatives + b] = pwi(a, b);
  }
  return out;
}

std::vector<double> NodeIndices::down_cum_matrix() const {
  std::vector<double> out(alternatives * alternatives);
  for (std::size_t a = 0; a < alternatives; ++a) {
    for (std::size_t s = 1; s <= alternatives; ++s) out[a * alternatives + s - 1] = down_cum(a, s);
  }
  return out;
}

std::vector<double> NodeIndices::up_cum_matrix() const {
  std::vector<double> out(alternatives * alternatives);
  for (std::size_t a = 0; a < alternatives; ++a) {
    for (std::size_t s = 1; s <= alternatives; ++s) out[a * alternatives + s - 1] = up_cum(a, s);
  }
  return out;
}

const NodeIndices& SmaaResult::at(const NodeId& node) const {
  for (const auto& n : nodes) {
    if (n.node == node) return n;
  }
  throw UnknownNode(node.str());
}

namespace {

// Sparse Choquet numerator rows of every alternative at one node.
struct NodeRows {
  std::vector<std::size_t> offsets;  // alternatives + 1
  std::vector<std::size_t> index;
  std::vector<double> coef;
};

std::vector<NodeRows> prepare_rows(const SampleSet& samples, const CriteriaHierarchy& h,
                                   const PerformanceTable& table, std::span<const NodeId> nodes) {
  const std::size_t p = MobiusCapacity2Add::coefficient_count(h.elementary_count());
  if (samples.dimension() != p) throw InvalidArgument("samples do not match the hierarchy's Möbius dimension");
  if (samples.size() == 0) throw InvalidArgument("no samples");
  if (table.criteria_count() != h.elementary_count()) {
    throw InvalidArgument("performance table and hierarchy disagree on the number of criteria");
  }
  std::vector<NodeRows> out;
  for (const auto& r : nodes) {
    if (h.node(r).is_leaf()) throw InvalidArgument("node " + r.str() + " is an elementary criterion");
    NodeRows rows;
    rows.offsets.push_back(0);
    for (std::size_t a = 0; a < table.alternative_count(); ++a) {
      const auto full = choquet_row(h, r, table.normalized_row(a));
      for (std::size_t k = 0; k < full.size(); ++k) {
        if (full[k] != 0.0) {
          rows.index.push_back(k);
          rows.coef.push_back(full[k]);
        }
      }
      rows.offsets.push_back(rows.index.size());
    }
    out.push_back(std::move(rows));
  }
  return out;
}

std::vector<NodeIndices> empty_indices(const SampleSet& samples, std::size_t alternatives,
                                       std::span<const NodeId> nodes) {
  std::vector<NodeIndices> out;
  for (const auto& r : nodes) {
    NodeIndices n;
    n.node = r;
    n.alternatives = alternatives;
    n.samples = samples.size();
    n.rank_counts.assign(alternatives * alternatives, 0);
    n.win_counts.assign(alternatives * alternatives, 0);
    out.push_back(std::move(n));
  }
  return out;
}

void accumulate(const NodeRows& rows, std::span<const double> m, std::size_t na, std::vector<double>& values,
                std::uint64_t* rank_counts, std::uint64_t* win_counts) {
  for (std::size_t a = 0; a < na; ++a) {
    double v = 0.0;
    for (std::size_t k = rows.offsets[a]; k < rows.offsets[a + 1]; ++k) v += rows.coef[k] * m[rows.index[k]];
    values[a] = v;
  }
  for (std::size_t a = 0; a < na; ++a) {
    std::size_t greater = 0;
    for (std::size_t b = 0; b < na; ++b) {
      if (values[b] > values[a]) {
        ++greater;
        ++win_counts[b * na + a];
      }
    }
    ++rank_counts[a * na + greater];
  }
}

}  // namespace

std::vector<NodeIndices> compute_indices_serial(const SampleSet& samples, const CriteriaHierarchy& h,
                                                const PerformanceTable& table, std::span<const NodeId> nodes) {
  const auto rows = prepare_rows(samples, h, table, nodes);
  const std::size_t na = table.alternative_count();
  auto out = empty_indices(samples, na, nodes);
  std::vector<double> values(na);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      accumulate(rows[r], samples.row(s), na, values, out[r].rank_counts.data(), out[r].win_counts.data());
    }
  }
  return out;
}

std::vector<NodeIndices> compute_indices(const SampleSet& samples, const CriteriaHierarchy& h,
                                         const PerformanceTable& table, std::span<const NodeId> nodes) {
  const auto rows = prepare_rows(samples, h, table, nodes);
  const std::size_t na = table.alternative_count();
  auto out = empty_indices(samples, na, nodes);
  const std::size_t cells = na * na;
  const auto count = static_cast<std::ptrdiff_t>(samples.size());
#pragma omp parallel
  {
    std::vector<std::uint64_t> ranks(rows.size() * cells, 0);
    std::vector<std::uint64_t> wins(rows.size() * cells, 0);
    std::vector<double> values(na);
#pragma omp for schedule(static)
    for (std::ptrdiff_t s = 0; s < count; ++s) {
      const auto m = samples.row(static_cast<std::size_t>(s));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        accumulate(rows[r], m, na, values, ranks.data() + r * cells, wins.data() + r * cells);
      }
    }
#pragma omp critical
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t k = 0; k < cells; ++k) {
        out[r].rank_counts[k] += ranks[r * cells + k];
        out[r].win_counts[k] += wins[r * cells + k];
      }
    }
  }
  return out;
}

MobiusCapacity2Add barycenter(const SampleSet& samples, std::size_t criteria) {
  const std::size_t p = MobiusCapacity2Add::coefficient_count(criteria);
  if (samples.dimension() != p) throw InvalidArgument("samples do not hold Möbius coefficients for this size");
  if (samples.size() == 0) throw InvalidArgument("no samples");
  std::vector<double> mean(p, 0.0);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto row = samples.row(s);
    for (std::size_t k = 0; k < p; ++k) mean[k] += row[k];
  }
  for (auto& v : mean) v /= static_cast<double>(samples.size());
  return MobiusCapacity2Add::from_coefficients(criteria, mean);
}

std::vector<NodeRanking> barycenter_ranking(const MobiusCapacity2Add& bary, const CriteriaHierarchy& h,
                                            const PerformanceTable& table, std::span<const NodeId> nodes) {
  std::vector<NodeRanking> out;
  for (const auto& r : nodes) {
    NodeRanking nr;
    nr.node = r;
    for (std::size_t a = 0; a < table.alternative_count(); ++a) {
      nr.values.push_back(hierarchical_choquet(bary, h, r, table.normalized_row(a)));
    }
    nr.ranks = rank_function(nr.values);
    out.push_back(std::move(nr));
  }
  return out;
}

SmaaResult run_smaa(const LinearConstraintSystem& sys, const CriteriaHierarchy& h, const PerformanceTable& table,
                    std::span<const NodeId> nodes, const SamplerConfig& cfg, const ProgressFn& progress) {
  const std::size_t steps = cfg.burn_in + cfg.sample_count * cfg.thinning;
  const auto samples = har_sample(sys, cfg, progress ? ProgressFn([&](std::size_t done, std::size_t) {
    return progress(done, steps + 1);
  })
                                                     : ProgressFn{});
  SmaaResult out;
  out.nodes = compute_indices(samples, h, table, nodes);
  out.barycenter = barycenter(samples, h.elementary_count());
  out.sample_count = samples.size();
  out.epsilon = samples.epsilon;
  if (progress && !progress(steps + 1, steps + 1)) throw Cancelled();
  return out;
}

NodeIndices smaa2_additive(const PerformanceTable& table, const SamplerConfig& cfg) {
  cfg.check();
  const std::size_t na = table.alternative_count();
  const std::size_t n = table.criteria_count();
  NodeIndices out;
  out.alternatives = na;
  out.samples = cfg.sample_count;
  out.rank_counts.assign(na * na, 0);
  out.win_counts.assign(na * na, 0);

  // Weighted sums as Möbius rows with singleton entries only.
  NodeRows rows;
  rows.offsets.push_back(0);
  for (std::size_t a = 0; a < na; ++a) {
    const auto x = table.normalized_row(a);
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] != 0.0) {
        rows.index.push_back(i);
        rows.coef.push_back(x[i]);
      }
    }
    rows.offsets.push_back(rows.index.size());
  }
  std::mt19937_64 rng(cfg.seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(n);
  std::vector<double> values(na);
  for (std::size_t s = 0; s < cfg.sample_count; ++s) {
    double total = 0.0;
    for (auto& v : w) total += (v = expo(rng));
    for (auto& v : w) v /= total;
    accumulate(rows, w, na, values, out.rank_counts.data(), out.win_counts.data());
  }
  return out;
}

}  // namespace mcda

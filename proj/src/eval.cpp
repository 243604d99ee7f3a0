#include "cagm/eval.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

namespace cagm {

namespace detail {

void check_normalized(double total) {
  if (std::fabs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("hellinger: distribution sums to " + std::to_string(total));
  }
}

}  // namespace detail

double hellinger(std::span<const double> p, std::span<const double> q) {
  double tp = 0.0;
  double tq = 0.0;
  for (double x : p) {
    if (x < 0.0) throw std::invalid_argument("hellinger: negative mass");
    tp += x;
  }
  for (double x : q) {
    if (x < 0.0) throw std::invalid_argument("hellinger: negative mass");
    tq += x;
  }
  detail::check_normalized(tp);
  detail::check_normalized(tq);
  double sum = 0.0;
  for (std::size_t i = 0; i < std::max(p.size(), q.size()); ++i) {
    const double x = i < p.size() ? p[i] : 0.0;
    const double y = i < q.size() ? q[i] : 0.0;
    const double d = std::sqrt(x) - std::sqrt(y);
    sum += d * d;
  }
  return std::min(1.0, std::sqrt(sum / 2.0));
}

std::optional<double> global_clustering(const AttributedGraph& g) {
  const std::size_t wedges = wedge_count(g);
  if (wedges == 0) return std::nullopt;
  return 3.0 * static_cast<double>(triangle_count(g)) / static_cast<double>(wedges);
}

std::vector<double> local_clustering(const AttributedGraph& g) {
  std::vector<double> lcc(g.num_vertices(), 0.0);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const std::size_t d = g.degree(v);
    if (d < 2) continue;
    std::size_t links = 0;
    auto nb = g.neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) links += g.has_edge(nb[i], nb[j]);
    }
    lcc[v] = 2.0 * static_cast<double>(links) / (static_cast<double>(d) * static_cast<double>(d - 1));
  }
  return lcc;
}

std::vector<double> degree_distribution(const AttributedGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<double> dist(n, 0.0);
  for (Vertex v = 0; v < n; ++v) dist[g.degree(v)] += 1.0;
  for (double& x : dist) x /= static_cast<double>(n);
  return dist;
}

std::map<double, double> lcc_distribution(const AttributedGraph& g) {
  std::map<double, double> dist;
  const auto lcc = local_clustering(g);
  for (double x : lcc) dist[x] += 1.0;
  for (auto& [value, mass] : dist) mass /= static_cast<double>(lcc.size());
  return dist;
}

std::optional<double> relative_error(double synthetic, double original) {
  if (original == 0.0) return std::nullopt;
  return std::fabs(synthetic - original) / original;
}

RelativeErrors relative_errors(const AttributedGraph& g, const AttributedGraph& synthetic) {
  RelativeErrors r;
  r.rho_E = relative_error(static_cast<double>(synthetic.num_edges()),
                           static_cast<double>(g.num_edges()));
  r.rho_tri = relative_error(static_cast<double>(triangle_count(synthetic)),
                             static_cast<double>(triangle_count(g)));
  const auto c = global_clustering(g);
  if (c && *c > 0.0) r.rho_c = relative_error(global_clustering(synthetic).value_or(0.0), *c);
  return r;
}

namespace {

void check_same_size(const AttributedGraph& g, const AttributedGraph& synthetic) {
  if (g.num_vertices() != synthetic.num_vertices()) {
    throw std::invalid_argument("graphs have " + std::to_string(g.num_vertices()) + " and " +
                                std::to_string(synthetic.num_vertices()) + " vertices");
  }
}

}  // namespace

DistributionDistances degree_and_lcc_distances(const AttributedGraph& g,
                                               const AttributedGraph& synthetic) {
  check_same_size(g, synthetic);
  if (g.num_vertices() == 0) return {};
  return {hellinger(degree_distribution(g), degree_distribution(synthetic)),
          hellinger(lcc_distribution(g), lcc_distribution(synthetic))};
}

double rho_a(const AttributedGraph& g, const AttributedGraph& synthetic,
             const CommunityPartition& p) {
  check_same_size(g, synthetic);
  if (p.num_vertices() != g.num_vertices()) {
    throw std::invalid_argument("rho_a: partition does not match the graphs");
  }
  auto vector_key = [](std::span<const std::uint8_t> row) {
    std::string key(row.size(), '0');
    for (std::size_t l = 0; l < row.size(); ++l) key[l] = row[l] ? '1' : '0';
    return key;
  };
  double worst = 0.0;
  for (Community c = 0; c < p.num_communities(); ++c) {
    if (p.size(c) == 0) continue;
    const double share = 1.0 / static_cast<double>(p.size(c));
    std::map<std::string, double> a;
    std::map<std::string, double> b;
    for (Vertex v : p.members(c)) {
      a[vector_key(g.attributes().row(v))] += share;
      b[vector_key(synthetic.attributes().row(v))] += share;
    }
    // Re-normalize away the rounding of repeated additions.
    for (auto* dist : {&a, &b}) {
      double total = 0.0;
      for (const auto& [k, m] : *dist) total += m;
      for (auto& [k, m] : *dist) m /= total;
    }
    worst = std::max(worst, hellinger(a, b));
  }
  return worst;
}

double avg_f1(const CommunityPartition& a, const CommunityPartition& b) {
  if (a.num_vertices() != b.num_vertices()) {
    throw std::invalid_argument("avg_f1: partitions cover different vertex sets");
  }
  if (a.num_vertices() == 0) throw std::invalid_argument("avg_f1: empty partition");
  std::map<std::pair<Community, Community>, std::size_t> overlap;
  for (Vertex v = 0; v < a.num_vertices(); ++v) {
    ++overlap[{a.community_of(v), b.community_of(v)}];
  }
  std::vector<double> best_a(a.num_communities(), 0.0);
  std::vector<double> best_b(b.num_communities(), 0.0);
  for (const auto& [pair, common] : overlap) {
    const auto [ca, cb] = pair;
    const double f1 = 2.0 * static_cast<double>(common) /
                      static_cast<double>(a.size(ca) + b.size(cb));
    best_a[ca] = std::max(best_a[ca], f1);
    best_b[cb] = std::max(best_b[cb], f1);
  }
  auto mean_over_nonempty = [](const CommunityPartition& p, const std::vector<double>& best) {
    double sum = 0.0;
    std::size_t count = 0;
    for (Community c = 0; c < p.num_communities(); ++c) {
      if (p.size(c) == 0) continue;
      sum += best[c];
      ++count;
    }
    return sum / static_cast<double>(count);
  };
  return 0.5 * mean_over_nonempty(a, best_a) + 0.5 * mean_over_nonempty(b, best_b);
}

namespace {

// Weighted graph for one Louvain level. A self-loop weight counts both
// endpoints, so it is twice the weight of the merged internal edges.
struct LevelGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;
  std::vector<double> self;
  std::vector<double> strength;
  double total = 0.0;  // sum of strengths, 2m
};

// Local moving phase; returns the community of every node and whether any
// node moved.
std::pair<std::vector<std::size_t>, bool> local_moves(const LevelGraph& lg, Rng& rng) {
  const std::size_t n = lg.adj.size();
  std::vector<std::size_t> comm(n);
  std::iota(comm.begin(), comm.end(), 0);
  std::vector<double> tot(lg.strength);
  std::vector<double> link(n, 0.0);
  std::vector<std::size_t> touched;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

  bool any = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t i : order) {
      const double k = lg.strength[i];
      if (k == 0.0) continue;
      const std::size_t own = comm[i];
      touched.clear();
      touched.push_back(own);
      for (const auto& [j, w] : lg.adj[i]) {
        if (link[comm[j]] == 0.0 && comm[j] != own) touched.push_back(comm[j]);
        link[comm[j]] += w;
      }
      tot[own] -= k;
      std::size_t best = own;
      double best_gain = link[own] - tot[own] * k / lg.total;
      for (std::size_t c : touched) {
        const double gain = link[c] - tot[c] * k / lg.total;
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best = c;
        }
      }
      for (std::size_t c : touched) link[c] = 0.0;
      tot[best] += k;
      if (best != own) {
        comm[i] = best;
        moved = true;
        any = true;
      }
    }
  }
  return {comm, any};
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::size_t>& comm,
                     std::size_t groups) {
  LevelGraph next;
  next.adj.resize(groups);
  next.self.assign(groups, 0.0);
  next.strength.assign(groups, 0.0);
  next.total = lg.total;
  std::vector<std::map<std::size_t, double>> weights(groups);
  for (std::size_t i = 0; i < lg.adj.size(); ++i) {
    const std::size_t ci = comm[i];
    next.self[ci] += lg.self[i];
    next.strength[ci] += lg.strength[i];
    for (const auto& [j, w] : lg.adj[i]) {
      const std::size_t cj = comm[j];
      if (ci == cj) {
        next.self[ci] += w;  // seen from both ends
      } else {
        weights[ci][cj] += w;
      }
    }
  }
  for (std::size_t c = 0; c < groups; ++c) {
    next.adj[c].assign(weights[c].begin(), weights[c].end());
  }
  return next;
}

}  // namespace

CommunityPartition louvain(const AttributedGraph& g, Rng& rng) {
  if (g.num_edges() == 0) throw std::invalid_argument("louvain: graph has no edges");
  const std::size_t n = g.num_vertices();
  LevelGraph lg;
  lg.adj.resize(n);
  lg.self.assign(n, 0.0);
  lg.strength.assign(n, 0.0);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w : g.neighbors(v)) lg.adj[v].push_back({w, 1.0});
    lg.strength[v] = static_cast<double>(g.degree(v));
  }
  lg.total = 2.0 * static_cast<double>(g.num_edges());

  std::vector<std::size_t> assignment(n);
  std::iota(assignment.begin(), assignment.end(), 0);
  while (true) {
    auto [comm, moved] = local_moves(lg, rng);
    if (!moved) break;
    // Relabel communities densely in order of first appearance.
    std::vector<std::size_t> dense(comm.size(), SIZE_MAX);
    std::size_t groups = 0;
    for (std::size_t& c : comm) {
      if (dense[c] == SIZE_MAX) dense[c] = groups++;
      c = dense[c];
    }
    for (std::size_t& a : assignment) a = comm[a];
    lg = aggregate(lg, comm, groups);
  }

  std::vector<Community> membership(n);
  std::vector<Community> label(n, 0);
  Community next = 1;
  for (Vertex v = 0; v < n; ++v) {
    if (label[assignment[v]] == 0) label[assignment[v]] = next++;
    membership[v] = label[assignment[v]];
  }
  return CommunityPartition(std::move(membership), next);
}

namespace {

Ccdf ccdf_at(std::vector<double> values, const std::vector<double>& points) {
  std::sort(values.begin(), values.end());
  Ccdf rows;
  rows.reserve(points.size());
  const double n = static_cast<double>(values.size());
  for (double x : points) {
    const auto above = values.end() - std::upper_bound(values.begin(), values.end(), x);
    rows.push_back({x, n > 0 ? static_cast<double>(above) / n : 0.0});
  }
  return rows;
}

std::vector<double> degrees_of(const AttributedGraph& g) {
  std::vector<double> d(g.num_vertices());
  for (Vertex v = 0; v < g.num_vertices(); ++v) d[v] = static_cast<double>(g.degree(v));
  return d;
}

}  // namespace

CcdfTables ccdf_tables(const AttributedGraph& g, const AttributedGraph& synthetic) {
  const auto d1 = degrees_of(g);
  const auto d2 = degrees_of(synthetic);
  double max_degree = 0.0;
  for (double d : d1) max_degree = std::max(max_degree, d);
  for (double d : d2) max_degree = std::max(max_degree, d);
  std::vector<double> degree_points;
  for (std::size_t d = 0; d <= static_cast<std::size_t>(max_degree); ++d) {
    degree_points.push_back(static_cast<double>(d));
  }

  const auto l1 = local_clustering(g);
  const auto l2 = local_clustering(synthetic);
  std::set<double> lcc_points(l1.begin(), l1.end());
  lcc_points.insert(l2.begin(), l2.end());
  for (int i = 0; i <= 20; ++i) lcc_points.insert(i / 20.0);
  const std::vector<double> lcc_grid(lcc_points.begin(), lcc_points.end());

  return {ccdf_at(d1, degree_points), ccdf_at(d2, degree_points), ccdf_at(l1, lcc_grid),
          ccdf_at(l2, lcc_grid)};
}

FidelityReport evaluate(const AttributedGraph& g, const AttributedGraph& synthetic,
                        const CommunityPartition& p, const EvaluateOptions& options) {
  FidelityReport report;
  const RelativeErrors errors = relative_errors(g, synthetic);
  report.rho_E = errors.rho_E;
  report.rho_tri = errors.rho_tri;
  report.rho_c = errors.rho_c;
  const DistributionDistances dist = degree_and_lcc_distances(g, synthetic);
  report.H_d = dist.H_d;
  report.H_lc = dist.H_lc;
  report.rho_a = rho_a(g, synthetic, p);
  if (g.num_edges() > 0 && synthetic.num_edges() > 0 && options.louvain_runs > 0) {
    double sum = 0.0;
    for (std::size_t run = 0; run < options.louvain_runs; ++run) {
      Rng r1(derive_seed(options.seed, run));
      Rng r2(derive_seed(options.seed, run));
      sum += avg_f1(louvain(g, r1), louvain(synthetic, r2));
    }
    report.avg_f1 = sum / static_cast<double>(options.louvain_runs);
  }
  return report;
}

}  // namespace cagm

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cagm::testing {

TriangleSplit brute_triangles(const AttributedGraph& g, const CommunityPartition& p) {
  TriangleSplit t;
  const std::size_t n = g.num_vertices();
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) {
      if (!g.has_edge(a, b)) continue;
      for (Vertex c = b + 1; c < n; ++c) {
        if (!g.has_edge(a, c) || !g.has_edge(b, c)) continue;
        const bool same = p.community_of(a) == p.community_of(b) &&
                          p.community_of(b) == p.community_of(c);
        ++(same ? t.intra : t.inter);
      }
    }
  }
  return t;
}

std::size_t brute_intra_triangles(const std::vector<std::vector<bool>>& adj,
                                  const CommunityPartition& p) {
  const std::size_t n = adj.size();
  std::size_t count = 0;
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) {
      if (!adj[a][b] || p.community_of(a) != p.community_of(b)) continue;
      for (Vertex c = b + 1; c < n; ++c) {
        if (adj[a][c] && adj[b][c] && p.community_of(c) == p.community_of(a)) ++count;
      }
    }
  }
  return count;
}

namespace {

std::size_t local_sensitivity(std::vector<std::vector<bool>>& adj, const CommunityPartition& p) {
  const std::size_t n = adj.size();
  const std::size_t base = brute_intra_triangles(adj, p);
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      adj[i][j] = adj[j][i] = !adj[i][j];
      const std::size_t toggled = brute_intra_triangles(adj, p);
      adj[i][j] = adj[j][i] = !adj[i][j];
      best = std::max(best, toggled > base ? toggled - base : base - toggled);
    }
  }
  return best;
}

}  // namespace

std::size_t brute_ls_intra_at_1(const AttributedGraph& g, const CommunityPartition& p) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const Edge& e : g.edges()) adj[e.u][e.v] = adj[e.v][e.u] = true;
  std::size_t best = local_sensitivity(adj, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      adj[i][j] = adj[j][i] = !adj[i][j];
      best = std::max(best, local_sensitivity(adj, p));
      adj[i][j] = adj[j][i] = !adj[i][j];
    }
  }
  return best;
}

std::vector<double> brute_isotonic(const std::vector<double>& y) {
  const std::size_t n = y.size();
  if (n == 0) return {};
  std::vector<double> best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 0; mask < (std::size_t{1} << (n - 1)); ++mask) {
    std::vector<double> fit(n);
    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool cut = i + 1 == n || (mask >> i & 1);
      if (!cut) continue;
      double sum = 0.0;
      for (std::size_t j = start; j <= i; ++j) sum += y[j];
      const double mean = sum / static_cast<double>(i + 1 - start);
      for (std::size_t j = start; j <= i; ++j) fit[j] = mean;
      start = i + 1;
    }
    if (!std::is_sorted(fit.begin(), fit.end())) continue;
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) cost += (fit[i] - y[i]) * (fit[i] - y[i]);
    if (cost < best_cost) {
      best_cost = cost;
      best = fit;
    }
  }
  return best;
}

std::set<std::vector<std::size_t>> realizable_sequences(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.push_back({i, j});
  }
  std::set<std::vector<std::size_t>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << pairs.size()); ++mask) {
    std::vector<std::size_t> d(n, 0);
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      if (mask >> e & 1) {
        ++d[pairs[e].first];
        ++d[pairs[e].second];
      }
    }
    std::sort(d.begin(), d.end());
    out.insert(d);
  }
  return out;
}

double brute_modularity(const AttributedGraph& g, const std::vector<int>& labels) {
  const std::size_t n = g.num_vertices();
  const double two_m = 2.0 * static_cast<double>(g.num_edges());
  double q = 0.0;
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = 0; j < n; ++j) {
      if (labels[i] != labels[j]) continue;
      const double a = g.has_edge(i, j) ? 1.0 : 0.0;
      q += a - static_cast<double>(g.degree(i)) * static_cast<double>(g.degree(j)) / two_m;
    }
  }
  return q / two_m;
}

std::vector<std::vector<int>> set_partitions(std::size_t n) {
  std::vector<std::vector<int>> out;
  if (n == 0) return out;
  std::vector<int> a(n, 0);
  std::vector<int> peak(n, 0);  // max label among a[0..i]
  while (true) {
    out.push_back(a);
    std::size_t i = n - 1;
    while (i > 0 && a[i] == peak[i - 1] + 1) --i;
    if (i == 0) break;
    ++a[i];
    peak[i] = std::max(peak[i - 1], a[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      a[j] = 0;
      peak[j] = peak[i];
    }
  }
  return out;
}

}  // namespace cagm::testing

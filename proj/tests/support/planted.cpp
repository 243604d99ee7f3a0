#include "planted.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <vector>

#include "cagm/rng.hpp"

namespace cagm::testing {

namespace {

// Index drawn proportional to weights via the cumulative sums.
std::size_t draw(const std::vector<double>& cumulative, Rng& rng) {
  const double x = rng.uniform() * cumulative.back();
  return static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), x) -
                                  cumulative.begin());
}

}  // namespace

Planted planted_graph(const PlantedConfig& cfg) {
  Rng rng(cfg.seed);
  const std::size_t n = cfg.n;
  std::vector<Community> membership(n);
  for (Vertex v = 0; v < n; ++v) {
    membership[v] = static_cast<Community>(1 + v * cfg.communities / n);
  }
  CommunityPartition partition(membership, cfg.communities + 1);

  std::vector<double> weight(n);
  for (double& w : weight) w = std::min(std::pow(1.0 - rng.uniform(), -1.0 / 2.5), 20.0);

  std::unordered_set<std::uint64_t> seen;
  std::vector<Edge> edges;
  std::vector<std::vector<Vertex>> intra(n);
  auto add = [&](Vertex a, Vertex b) {
    if (a == b) return false;
    const Edge e = make_edge(a, b);
    if (!seen.insert(edge_key(e)).second) return false;
    edges.push_back(e);
    if (membership[a] == membership[b]) {
      intra[a].push_back(b);
      intra[b].push_back(a);
    }
    return true;
  };

  std::size_t intra_edges = 0;
  for (Community c = 1; c <= cfg.communities; ++c) {
    auto members = partition.members(c);
    std::vector<double> cumulative;
    double run = 0.0;
    for (Vertex v : members) cumulative.push_back(run += weight[v]);
    const auto target =
        static_cast<std::size_t>(cfg.intra_degree * static_cast<double>(members.size()) / 2.0);
    for (std::size_t placed = 0; placed < target;) {
      placed += add(members[draw(cumulative, rng)], members[draw(cumulative, rng)]);
    }
    intra_edges += target;
  }
  {
    std::vector<double> cumulative;
    double run = 0.0;
    for (Vertex v = 0; v < n; ++v) cumulative.push_back(run += weight[v]);
    const auto target = static_cast<std::size_t>(cfg.inter_degree * static_cast<double>(n) / 2.0);
    for (std::size_t placed = 0; placed < target;) {
      const auto a = static_cast<Vertex>(draw(cumulative, rng));
      const auto b = static_cast<Vertex>(draw(cumulative, rng));
      if (membership[a] != membership[b]) placed += add(a, b);
    }
  }
  const auto closing = static_cast<std::size_t>(cfg.closure * static_cast<double>(intra_edges));
  for (std::size_t placed = 0, tries = 0; placed < closing && tries < 100 * closing; ++tries) {
    const auto v = static_cast<Vertex>(rng.index(n));
    if (intra[v].size() < 2) continue;
    placed += add(intra[v][rng.index(intra[v].size())], intra[v][rng.index(intra[v].size())]);
  }

  AttributeMatrix x(n, cfg.attributes);
  for (Vertex v = 0; v < n; ++v) {
    for (std::size_t l = 0; l < cfg.attributes; ++l) {
      const bool preferred = l % cfg.communities == membership[v] - 1;
      x.set(v, l, rng.bernoulli(preferred ? 0.7 : 0.15));
    }
  }
  return {AttributedGraph(n, std::move(edges), std::move(x)), std::move(partition)};
}

AttributedGraph random_graph(std::size_t n, double p, std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) {
      if (rng.bernoulli(p)) edges.push_back({a, b});
    }
  }
  AttributeMatrix x(n, k);
  for (Vertex v = 0; v < n; ++v) {
    for (std::size_t l = 0; l < k; ++l) x.set(v, l, rng.bernoulli(0.5));
  }
  return AttributedGraph(n, std::move(edges), std::move(x));
}

CommunityPartition random_partition(std::size_t n, std::size_t groups, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Community> membership(n);
  for (auto& c : membership) c = static_cast<Community>(1 + rng.index(groups));
  return CommunityPartition(std::move(membership), groups + 1);
}

}  // namespace cagm::testing

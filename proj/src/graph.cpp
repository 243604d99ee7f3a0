#include "cagm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cagm {

AttributeMatrix::AttributeMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}

AttributeMatrix AttributeMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  const std::size_t k = rows.empty() ? 0 : rows.front().size();
  AttributeMatrix x(rows.size(), k);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != k) {
      throw InputError("attribute row " + std::to_string(i) + " has " +
                       std::to_string(rows[i].size()) + " entries, expected " +
                       std::to_string(k));
    }
    for (std::size_t l = 0; l < k; ++l) {
      const int b = rows[i][l];
      if (b != 0 && b != 1) {
        throw InputError("attribute value " + std::to_string(b) + " at row " +
                         std::to_string(i) + " is not binary");
      }
      x.set(i, l, b == 1);
    }
  }
  return x;
}

AttributedGraph::AttributedGraph(std::size_t n, std::vector<Edge> edges)
    : AttributedGraph(n, std::move(edges), AttributeMatrix(n, 0)) {}

AttributedGraph::AttributedGraph(std::size_t n, std::vector<Edge> edges,
                                 AttributeMatrix attributes)
    : n_(n), attributes_(std::move(attributes)) {
  if (attributes_.rows() != n) {
    throw InputError("attribute matrix has " + std::to_string(attributes_.rows()) +
                     " rows for " + std::to_string(n) + " vertices");
  }
  for (Edge& e : edges) {
    if (e.u == e.v) throw InputError("self-loop on vertex " + std::to_string(e.u));
    if (e.u >= n || e.v >= n) {
      throw InputError("vertex id " + std::to_string(std::max(e.u, e.v)) +
                       " out of range for " + std::to_string(n) + " vertices");
    }
    e = make_edge(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  std::vector<std::size_t> degree(n, 0);
  for (const Edge& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.resize(offsets_[n]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  // Edges are sorted, so each list fills in ascending order for the u side;
  // a final sort covers the v side.
  for (const Edge& e : edges_) {
    adjacency_[cursor[e.u]++] = e.v;
    adjacency_[cursor[e.v]++] = e.u;
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(adjacency_.begin() + offsets_[v], adjacency_.begin() + offsets_[v + 1]);
  }
}

bool AttributedGraph::has_edge(Vertex a, Vertex b) const {
  if (a >= n_ || b >= n_ || a == b) return false;
  if (degree(a) > degree(b)) std::swap(a, b);
  auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

AttributedGraph AttributedGraph::with_attributes(AttributeMatrix attributes) const {
  AttributedGraph g = *this;
  if (attributes.rows() != n_) {
    throw InputError("attribute matrix has " + std::to_string(attributes.rows()) +
                     " rows for " + std::to_string(n_) + " vertices");
  }
  g.attributes_ = std::move(attributes);
  return g;
}

CommunityPartition::CommunityPartition(std::vector<Community> membership,
                                       std::size_t num_communities)
    : membership_(std::move(membership)) {
  if (num_communities == 0) num_communities = 1;
  members_.resize(num_communities);
  for (std::size_t v = 0; v < membership_.size(); ++v) {
    const Community c = membership_[v];
    if (c >= num_communities) {
      throw InputError("vertex " + std::to_string(v) + " assigned to community " +
                       std::to_string(c) + " but only " + std::to_string(num_communities) +
                       " communities exist");
    }
    members_[c].push_back(static_cast<Vertex>(v));
  }
}

CommunityPartition CommunityPartition::single(std::size_t n) {
  return CommunityPartition(std::vector<Community>(n, 1), 2);
}

CommunityPartition CommunityPartition::from_groups(
    std::size_t n, const std::vector<std::vector<Vertex>>& groups) {
  std::vector<Community> membership(n, 0);
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (Vertex v : groups[i]) {
      if (v >= n) throw InputError("vertex " + std::to_string(v) + " out of range");
      if (seen[v]) throw InputError("vertex " + std::to_string(v) + " in two groups");
      seen[v] = true;
      membership[v] = static_cast<Community>(i + 1);
    }
  }
  return CommunityPartition(std::move(membership), groups.size() + 1);
}

std::size_t CommunityPartition::largest_community_size() const {
  std::size_t best = 0;
  for (const auto& m : members_) best = std::max(best, m.size());
  return best;
}

namespace {

template <typename F>
void for_each_triangle(const AttributedGraph& g, F&& f) {
  // Each triangle u < v < w is visited once, from its lowest edge (u, v).
  for (const Edge& e : g.edges()) {
    auto a = g.neighbors(e.u);
    auto b = g.neighbors(e.v);
    auto ia = std::upper_bound(a.begin(), a.end(), e.v);
    auto ib = std::upper_bound(b.begin(), b.end(), e.v);
    while (ia != a.end() && ib != b.end()) {
      if (*ia < *ib) {
        ++ia;
      } else if (*ib < *ia) {
        ++ib;
      } else {
        f(e.u, e.v, *ia);
        ++ia;
        ++ib;
      }
    }
  }
}

}  // namespace

StructuralCensus structural_census(const AttributedGraph& g, const CommunityPartition& p) {
  const std::size_t n = g.num_vertices();
  if (p.num_vertices() != n) {
    throw std::invalid_argument("partition covers " + std::to_string(p.num_vertices()) +
                                " vertices, graph has " + std::to_string(n));
  }
  StructuralCensus c;
  c.d_intra.assign(n, 0);
  c.d_inter.assign(n, 0);
  c.m_intra.assign(p.num_communities(), 0);
  c.tri_intra_by_community.assign(p.num_communities(), 0);
  for (const Edge& e : g.edges()) {
    const Community cu = p.community_of(e.u);
    if (cu == p.community_of(e.v)) {
      ++c.d_intra[e.u];
      ++c.d_intra[e.v];
      ++c.m_intra[cu];
    } else {
      ++c.d_inter[e.u];
      ++c.d_inter[e.v];
      ++c.m_inter;
    }
  }
  for_each_triangle(g, [&](Vertex a, Vertex b, Vertex w) {
    const Community ca = p.community_of(a);
    if (ca == p.community_of(b) && ca == p.community_of(w)) {
      ++c.tri_intra;
      ++c.tri_intra_by_community[ca];
    } else {
      ++c.tri_inter;
    }
  });
  c.tri_total = c.tri_intra + c.tri_inter;
  c.wedges = wedge_count(g);
  return c;
}

std::size_t wedge_count(const AttributedGraph& g) {
  std::size_t total = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const std::size_t d = g.degree(v);
    total += d * (d > 0 ? d - 1 : 0) / 2;
  }
  return total;
}

std::size_t triangle_count(const AttributedGraph& g) {
  std::size_t total = 0;
  for_each_triangle(g, [&](Vertex, Vertex, Vertex) { ++total; });
  return total;
}

std::size_t common_neighbors(const AttributedGraph& g, Vertex a, Vertex b) {
  auto x = g.neighbors(a);
  auto y = g.neighbors(b);
  std::size_t count = 0;
  auto i = x.begin();
  auto j = y.begin();
  while (i != x.end() && j != y.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

double cosine_similarity(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("cosine_similarity: length mismatch (" +
                                std::to_string(x.size()) + " vs " + std::to_string(y.size()) +
                                ")");
  }
  std::size_t dot = 0;
  std::size_t nx = 0;
  std::size_t ny = 0;
  for (std::size_t l = 0; l < x.size(); ++l) {
    dot += x[l] & y[l];
    nx += x[l];
    ny += y[l];
  }
  if (nx == 0 || ny == 0) return 0.0;
  // For 0/1 vectors the squared norms are popcounts; one sqrt of the
  // product keeps values like 1/2 exact.
  return static_cast<double>(dot) / std::sqrt(static_cast<double>(nx) * static_cast<double>(ny));
}

std::size_t max_bucket(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("delta must be in (0, 1], got " + std::to_string(delta));
  }
  return static_cast<std::size_t>(std::floor(1.0 / delta + 1e-9));
}

std::size_t bucket_of(double similarity, double delta) {
  const std::size_t top = max_bucket(delta);
  // The slack absorbs rounding in the similarity (e.g. 0.3 / 0.1).
  const auto b = static_cast<std::size_t>(std::floor(similarity / delta + 1e-9));
  return std::min(b, top);
}

std::size_t aggregate_feature(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y,
                              double delta) {
  return bucket_of(cosine_similarity(x, y), delta);
}

}  // namespace cagm

#pragma once

// Attributed graph data model, community partitions and exact structural
// counters.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cagm {

using Vertex = std::uint32_t;
using Community = std::uint32_t;

/// Raised for malformed user input: files, flags, out-of-range parameters.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undirected edge, always stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Normalizes (a, b) so that the smaller endpoint comes first.
constexpr Edge make_edge(Vertex a, Vertex b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

constexpr std::uint64_t edge_key(Edge e) {
  return (static_cast<std::uint64_t>(e.u) << 32) | e.v;
}

/// Dense n x k binary matrix. Row i is the attribute vector of vertex i.
class AttributeMatrix {
 public:
  AttributeMatrix() = default;
  AttributeMatrix(std::size_t rows, std::size_t cols);

  /// Throws InputError on ragged rows or entries other than 0/1.
  static AttributeMatrix from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<const std::uint8_t> row(std::size_t i) const {
    return {bits_.data() + i * cols_, cols_};
  }
  std::uint8_t at(std::size_t i, std::size_t l) const { return bits_[i * cols_ + l]; }
  void set(std::size_t i, std::size_t l, bool value) {
    bits_[i * cols_ + l] = value ? 1 : 0;
  }

  friend bool operator==(const AttributeMatrix&, const AttributeMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Simple undirected graph with a binary attribute vector per vertex.
/// Immutable after construction.
class AttributedGraph {
 public:
  AttributedGraph() = default;

  /// Builds the graph from an arbitrary edge list. Duplicates (in either
  /// orientation) are merged. Throws InputError on self-loops, vertex ids
  /// >= n, or an attribute matrix whose row count differs from n.
  AttributedGraph(std::size_t n, std::vector<Edge> edges, AttributeMatrix attributes);

  /// Same, with an n x 0 attribute matrix.
  AttributedGraph(std::size_t n, std::vector<Edge> edges);

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_attributes() const { return attributes_.cols(); }

  /// Edges sorted lexicographically.
  std::span<const Edge> edges() const { return edges_; }

  /// Sorted neighbour list.
  std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(Vertex a, Vertex b) const;

  const AttributeMatrix& attributes() const { return attributes_; }

  /// Copy of this graph with a different attribute matrix.
  AttributedGraph with_attributes(AttributeMatrix attributes) const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> adjacency_;
  AttributeMatrix attributes_;
};

/// Disjoint cover of the vertex set by communities C0, C1, ..., Cp.
/// C0 is the discard community of unassigned vertices and may be empty.
class CommunityPartition {
 public:
  CommunityPartition() = default;

  /// membership[v] is the community of v. num_communities counts C0, so
  /// every entry must be < num_communities. Throws InputError otherwise.
  CommunityPartition(std::vector<Community> membership, std::size_t num_communities);

  /// All n vertices in C1, C0 empty.
  static CommunityPartition single(std::size_t n);

  /// Builds from explicit groups; group i becomes C_{i+1}, vertices not in
  /// any group go to C0. Throws InputError if groups overlap.
  static CommunityPartition from_groups(std::size_t n,
                                        const std::vector<std::vector<Vertex>>& groups);

  std::size_t num_vertices() const { return membership_.size(); }
  /// Includes C0.
  std::size_t num_communities() const { return members_.size(); }

  Community community_of(Vertex v) const { return membership_[v]; }
  std::span<const Community> membership() const { return membership_; }
  std::span<const Vertex> members(Community c) const { return members_[c]; }
  std::size_t size(Community c) const { return members_[c].size(); }
  std::size_t largest_community_size() const;

  friend bool operator==(const CommunityPartition& a, const CommunityPartition& b) {
    return a.membership_ == b.membership_ && a.members_.size() == b.members_.size();
  }

 private:
  std::vector<Community> membership_;
  std::vector<std::vector<Vertex>> members_;
};

/// Exact community-separated structural counters.
struct StructuralCensus {
  std::vector<std::size_t> d_intra;
  std::vector<std::size_t> d_inter;
  std::vector<std::size_t> m_intra;  // per community, C0 included
  std::size_t m_inter = 0;
  std::size_t tri_intra = 0;
  std::size_t tri_inter = 0;
  std::size_t tri_total = 0;
  std::size_t wedges = 0;
  std::vector<std::size_t> tri_intra_by_community;  // debug breakdown
};

/// Triangles and edges wholly inside C0 count as intra.
StructuralCensus structural_census(const AttributedGraph& g, const CommunityPartition& p);

/// Number of paths of length two: sum over v of deg(v)(deg(v)-1)/2.
std::size_t wedge_count(const AttributedGraph& g);

/// Total triangle count.
std::size_t triangle_count(const AttributedGraph& g);

/// Number of common neighbours of a and b.
std::size_t common_neighbors(const AttributedGraph& g, Vertex a, Vertex b);

/// Cosine of two 0/1 vectors; 0 when either vector is all zero.
/// Throws std::invalid_argument on length mismatch.
double cosine_similarity(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y);

/// Highest bucket index floor(1/delta). Throws std::invalid_argument unless
/// 0 < delta <= 1.
std::size_t max_bucket(double delta);

/// floor(cosine_similarity(x, y) / delta).
std::size_t aggregate_feature(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y,
                              double delta);

/// Bucket of a precomputed similarity value.
std::size_t bucket_of(double similarity, double delta);

}  // namespace cagm

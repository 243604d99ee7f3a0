#pragma once

// Brute-force reference implementations for small inputs.

#include <cstddef>
#include <set>
#include <vector>

#include "cagm/graph.hpp"

namespace cagm::testing {

/// Triangles by triple loop, split into (all in one community, rest).
struct TriangleSplit {
  std::size_t intra = 0;
  std::size_t inter = 0;
};
TriangleSplit brute_triangles(const AttributedGraph& g, const CommunityPartition& p);

/// Intra-community triangles of an explicit adjacency matrix.
std::size_t brute_intra_triangles(const std::vector<std::vector<bool>>& adj,
                                  const CommunityPartition& p);

/// Max over graphs at edit distance <= 1 of the largest change in the
/// intra-community triangle count caused by toggling one pair.
std::size_t brute_ls_intra_at_1(const AttributedGraph& g, const CommunityPartition& p);

/// L2-closest non-decreasing sequence by enumerating all contiguous block
/// splits (the optimum is piecewise constant at block means).
std::vector<double> brute_isotonic(const std::vector<double>& y);

/// Sorted degree sequences realizable by some simple graph on n vertices.
std::set<std::vector<std::size_t>> realizable_sequences(std::size_t n);

/// Modularity straight from the definition sum_ij [A_ij - k_i k_j / 2m]
/// delta(c_i, c_j) / 2m.
double brute_modularity(const AttributedGraph& g, const std::vector<int>& labels);

/// All set partitions of {0..n-1} as restricted growth strings.
std::vector<std::vector<int>> set_partitions(std::size_t n);

}  // namespace cagm::testing

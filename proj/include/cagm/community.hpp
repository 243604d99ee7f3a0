#pragma once

// Modularity, the attribute-augmented objective and the differentially
// private divisive partition search.

#include <cstddef>
#include <string>
#include <vector>

#include "cagm/graph.hpp"
#include "cagm/rng.hpp"

namespace cagm {

/// Weights of the combined objective Q = w_s * Q_s + w_a * Q_a and the
/// sensitivity bound used to score partitions under the exponential
/// mechanism.
struct ObjectiveConfig {
  double w_s = 0.98;

  double w_a() const { return 1.0 - w_s; }

  /// Number of auxiliary similarity edges for n vertices: ceil(n(n-1)/20).
  static std::size_t aux_edge_quota(std::size_t n);

  /// Sensitivity of structural modularity. 0.0003 assumes graphs with at
  /// least 10,000 edges; smaller graphs use 3/m.
  static double structural_sensitivity(std::size_t m);

  /// w_s * structural_sensitivity(m) + w_a * 60 / n.
  double sensitivity_bound(std::size_t n, std::size_t m) const;

  void validate() const;
};

/// Divisive search shape. The number of exponential-mechanism selections is
/// fixed to `rounds` before the data is touched; each gets eps_c / rounds.
struct SearchConfig {
  std::size_t rounds = 8;
  std::size_t fanout = 4;
  std::size_t propagation_sweeps = 20;

  void validate() const;
};

/// Standard modularity sum_C (l_C/m - (d_C/2m)^2), C0 included as a
/// community. Throws std::invalid_argument if g has no edges.
double modularity(const AttributedGraph& g, const CommunityPartition& p);

/// Graph on the same vertices whose edges are the ceil(n(n-1)/20) pairs with
/// the highest attribute cosine similarity. Ties go to the lexicographically
/// smaller pair. Attributes are carried over unchanged.
/// Throws std::invalid_argument if n < 2.
AttributedGraph build_auxiliary_graph(const AttributedGraph& g);

/// w_s * modularity(g, p) + w_a * modularity(aux, p). A zero weight skips
/// evaluation of its term.
double combined_objective(const AttributedGraph& g, const AttributedGraph& aux,
                          const CommunityPartition& p, const ObjectiveConfig& cfg);

/// Outcome of the private search, with the accounting that backs it.
struct PartitionSearchResult {
  CommunityPartition partition;
  std::size_t selections = 0;       // exponential-mechanism invocations
  double eps_per_selection = 0.0;
  double sensitivity = 0.0;
  double eps_consumed = 0.0;        // selections * eps_per_selection <= eps_c
  std::vector<std::string> log;     // diagnostics, one line per round
};

/// Top-down divisive search. Starting from a single community, each round
/// proposes up to `fanout` bisections of existing communities (label
/// propagation on the community's induced subgraph) plus the unchanged
/// partition, and picks one with the exponential mechanism scored by the
/// combined objective. C0 stays empty: every vertex is assigned.
/// Throws std::invalid_argument if eps_c <= 0 or g has no edges.
PartitionSearchResult dp_partition_search(const AttributedGraph& g, double eps_c,
                                          const ObjectiveConfig& cfg, const SearchConfig& search,
                                          Rng& rng);

CommunityPartition dp_partition(const AttributedGraph& g, double eps_c,
                                const ObjectiveConfig& cfg, const SearchConfig& search, Rng& rng);

/// Renumbers non-empty communities C1..Cq in order of first appearance,
/// keeping C0 as is.
CommunityPartition compact(const CommunityPartition& p);

}  // namespace cagm

#pragma once

// Fidelity of a synthetic attributed graph with respect to the original:
// relative errors, Hellinger distances between distributions, community
// detectability and CCDF tables.

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cagm/graph.hpp"
#include "cagm/rng.hpp"

namespace cagm {

namespace detail {
void check_normalized(double total);
}

/// (1/sqrt 2) * || sqrt(p) - sqrt(q) ||_2. The shorter vector is padded
/// with zeros. Throws std::invalid_argument unless both sum to 1 within
/// 1e-9 and have no negative entries.
double hellinger(std::span<const double> p, std::span<const double> q);

/// Same over sparse distributions; keys missing from one side have mass 0.
template <typename Key>
double hellinger(const std::map<Key, double>& p, const std::map<Key, double>& q) {
  double tp = 0.0;
  double tq = 0.0;
  for (const auto& [k, v] : p) {
    if (v < 0.0) throw std::invalid_argument("hellinger: negative mass");
    tp += v;
  }
  for (const auto& [k, v] : q) {
    if (v < 0.0) throw std::invalid_argument("hellinger: negative mass");
    tq += v;
  }
  detail::check_normalized(tp);
  detail::check_normalized(tq);
  double sum = 0.0;
  auto a = p.begin();
  auto b = q.begin();
  while (a != p.end() || b != q.end()) {
    double x = 0.0;
    double y = 0.0;
    if (b == q.end() || (a != p.end() && a->first < b->first)) {
      x = (a++)->second;
    } else if (a == p.end() || b->first < a->first) {
      y = (b++)->second;
    } else {
      x = (a++)->second;
      y = (b++)->second;
    }
    const double d = std::sqrt(x) - std::sqrt(y);
    sum += d * d;
  }
  return std::min(1.0, std::sqrt(sum / 2.0));
}

/// 3 * triangles / wedges; nothing when the graph has no wedge.
std::optional<double> global_clustering(const AttributedGraph& g);

/// Per vertex; 0 for vertices of degree below 2.
std::vector<double> local_clustering(const AttributedGraph& g);

/// Fraction of vertices of each degree 0..n-1.
std::vector<double> degree_distribution(const AttributedGraph& g);

/// Empirical distribution of local clustering values.
std::map<double, double> lcc_distribution(const AttributedGraph& g);

/// |a - b| / b; nothing when b is zero.
std::optional<double> relative_error(double synthetic, double original);

struct RelativeErrors {
  std::optional<double> rho_E;
  std::optional<double> rho_tri;
  std::optional<double> rho_c;
};

/// Relative errors of edge count, triangle count and global clustering.
/// A metric whose original value is zero is left empty.
RelativeErrors relative_errors(const AttributedGraph& g, const AttributedGraph& synthetic);

struct DistributionDistances {
  double H_d = 0.0;
  double H_lc = 0.0;
};

/// Throws std::invalid_argument on a vertex-count mismatch.
DistributionDistances degree_and_lcc_distances(const AttributedGraph& g,
                                               const AttributedGraph& synthetic);

/// Largest Hellinger distance, over the communities of p, between the
/// attribute-vector distributions of the two graphs.
double rho_a(const AttributedGraph& g, const AttributedGraph& synthetic,
             const CommunityPartition& p);

/// Symmetric best-match F1 average over the non-empty communities of both
/// partitions. Throws std::invalid_argument on empty or mismatched input.
double avg_f1(const CommunityPartition& a, const CommunityPartition& b);

/// Greedy modularity optimization by local moves and aggregation. Vertex
/// visiting order is shuffled with rng, so the result is a function of the
/// seed. C0 is left empty. Throws std::invalid_argument without edges.
CommunityPartition louvain(const AttributedGraph& g, Rng& rng);

/// Rows (value, fraction of vertices with a strictly larger value).
using Ccdf = std::vector<std::pair<double, double>>;

struct CcdfTables {
  Ccdf degree_original;
  Ccdf degree_synthetic;
  Ccdf lcc_original;
  Ccdf lcc_synthetic;
};

/// Degree CCDFs on 0..max degree of either graph; LCC CCDFs on the union of
/// observed values and a 0.05 grid.
CcdfTables ccdf_tables(const AttributedGraph& g, const AttributedGraph& synthetic);

struct FidelityReport {
  std::optional<double> rho_E;
  std::optional<double> rho_tri;
  std::optional<double> rho_c;
  double H_d = 0.0;
  double H_lc = 0.0;
  double rho_a = 0.0;
  std::optional<double> avg_f1;  // empty when either graph has no edges
};

struct EvaluateOptions {
  std::size_t louvain_runs = 5;
  std::uint64_t seed = 1;
};

/// All metrics. Detectability is the mean Avg-F1 between Louvain on each
/// graph, run i of both graphs sharing seed stream i.
FidelityReport evaluate(const AttributedGraph& g, const AttributedGraph& synthetic,
                        const CommunityPartition& p, const EvaluateOptions& options = {});

}  // namespace cagm

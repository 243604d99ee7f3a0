#pragma once

// C-AGM parameters and their estimators, exact and differentially private.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cagm/community.hpp"
#include "cagm/graph.hpp"
#include "cagm/rng.hpp"

namespace cagm {

/// Inputs of the community-preserving edge model.
struct ThetaM {
  std::vector<std::size_t> d_intra;  // per vertex
  std::vector<std::size_t> d_inter;  // per vertex
  std::size_t tri_intra = 0;
  std::size_t tri_inter = 0;

  /// Half the intra-degree sum of each community.
  std::vector<std::size_t> m_intra(const CommunityPartition& p) const;
  std::size_t m_inter() const;
  /// Total number of edges a sample must have.
  std::size_t edge_target(const CommunityPartition& p) const;
};

/// Per community and attribute, Pr(x_l = 1 | C).
struct ThetaX {
  std::vector<std::vector<double>> prob;  // [community][attribute]
};

/// Bucketed attribute-edge correlations.
struct ThetaF {
  double delta = 0.25;
  std::vector<std::vector<double>> intra;  // [community][bucket]
  std::vector<double> inter;               // [bucket]
  std::size_t degree_cap = 0;              // truncation used by the private path, 0 if none

  std::size_t num_buckets() const { return inter.size(); }
};

struct CagmParams {
  CommunityPartition partition;
  std::size_t num_attributes = 0;
  ThetaM theta_m;
  ThetaX theta_x;
  ThetaF theta_f;

  std::size_t num_vertices() const { return partition.num_vertices(); }
  /// Throws std::invalid_argument if the pieces are inconsistent: sizes,
  /// probabilities outside [0, 1], distributions not summing to 1, odd
  /// degree sums.
  void validate() const;
};

/// Sub-budgets of a total epsilon: eps_c = eps/2, eps_F = eps/6 and eps/12
/// each for degrees, total triangles, intra triangles and attributes.
struct PrivacyBudget {
  double eps_total = 0.0;
  double eps_c = 0.0;
  double eps_F = 0.0;
  double eps_d = 0.0;
  double eps_tri = 0.0;
  double eps_tri_intra = 0.0;
  double eps_X = 0.0;

  /// Shares in twelfths of eps_total; they add up to 12.
  static constexpr int kTwelfths[6] = {6, 2, 1, 1, 1, 1};
};

/// Throws std::invalid_argument unless eps_total > 0 and finite. The last
/// share is the exact remainder so that the shares, added in declaration
/// order, reproduce eps_total bit for bit.
PrivacyBudget split_budget(double eps_total);

/// Record of the budget spent by each private computation.
class BudgetLedger {
 public:
  struct Entry {
    std::string name;
    double eps = 0.0;
    int twelfths = 0;
  };

  explicit BudgetLedger(double eps_total) : eps_total_(eps_total) {}

  void charge(std::string name, double eps, int twelfths);
  std::span<const Entry> entries() const { return entries_; }
  double eps_total() const { return eps_total_; }
  /// Entries added in charge order.
  double spent() const;
  int spent_twelfths() const;
  /// Exact equality of spent() with eps_total and of the twelfths with 12.
  bool balanced() const;

 private:
  double eps_total_;
  std::vector<Entry> entries_;
};

ThetaM estimate_theta_m(const AttributedGraph& g, const CommunityPartition& p);

/// Communities of size 0 get probability 0.
ThetaX estimate_theta_x(const AttributedGraph& g, const CommunityPartition& p);

/// Attribute counts perturbed with Lap(k / eps_X), clamped to [0, |C|].
ThetaX dp_estimate_theta_x(const AttributedGraph& g, const CommunityPartition& p, double eps_X,
                           Rng& rng);

/// Histograms of aggregated features over intra edges (per community) and
/// inter edges, normalized; empty histograms become uniform.
ThetaF estimate_theta_f(const AttributedGraph& g, const CommunityPartition& p, double delta);

/// Drops edges until every degree is at most cap. Vertices are visited in
/// descending id order; at each step the incident edge whose other endpoint
/// has the largest current degree (ties to the larger id) goes first.
AttributedGraph truncate_degrees(const AttributedGraph& g, std::size_t cap);

/// Bucket counts on the degree-truncated graph perturbed with
/// Lap(2 * cap / eps_F), clamped at 0 and normalized. Communities with
/// fewer than two vertices, and the inter row when at most one community is
/// non-empty, cannot hold edges; they get the uniform distribution
/// directly.
ThetaF dp_estimate_theta_f(const AttributedGraph& g, const CommunityPartition& p, double delta,
                           std::size_t cap, double eps_F, Rng& rng);

struct DpDegreeSequences {
  /// Per community, the released non-decreasing intra sequence.
  std::vector<std::vector<std::size_t>> intra_sorted;
  /// Per vertex inter-community degrees.
  std::vector<std::size_t> inter;
  /// Per vertex intra degree: inside each community the sorted sequence is
  /// handed out in order of increasing released inter degree (ties by id).
  std::vector<std::size_t> intra;
};

/// Lap(2 / eps_d) noise on every entry of each community's sorted intra
/// sequence and on every inter degree, then isotonic regression of the
/// intra sequences and repair of all sequences to graphical with even sum.
DpDegreeSequences dp_degree_sequences(const AttributedGraph& g, const CommunityPartition& p,
                                      double eps_d, Rng& rng);

struct TriangleCounts {
  std::size_t intra = 0;
  std::size_t inter = 0;
  std::size_t total = 0;
};

/// Ladder mechanism on the intra count (budget eps_tri_intra) and on the
/// total count (budget eps_tri); inter = max(0, total - intra).
TriangleCounts dp_triangle_counts(const AttributedGraph& g, const CommunityPartition& p,
                                  double eps_tri, double eps_tri_intra, Rng& rng);

/// Exact fit on a given partition.
CagmParams fit(const AttributedGraph& g, const CommunityPartition& p, double delta);

struct DpFitConfig {
  double delta = 0.25;
  std::size_t degree_cap = 100;
  ObjectiveConfig objective;
  SearchConfig search;
};

struct DpFitResult {
  CagmParams params;
  BudgetLedger ledger{0.0};
  PartitionSearchResult search;
};

/// Private fit: split the budget, search a partition, then estimate every
/// parameter with its share. The ledger is checked to balance.
DpFitResult dp_fit(const AttributedGraph& g, double eps_total, const DpFitConfig& cfg, Rng& rng);

}  // namespace cagm

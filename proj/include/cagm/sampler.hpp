#pragma once

// Synthetic graph generation from fitted parameters: attribute sampling, the
// community-preserving edge model with triangle enforcement and
// reconnection, and correlation-aware acceptance-rejection edge sampling.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "cagm/graph.hpp"
#include "cagm/params.hpp"
#include "cagm/rng.hpp"

namespace cagm {

/// Raised when sampling cannot make progress.
class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Walker alias table for O(1) draws from a fixed discrete distribution.
class AliasTable {
 public:
  AliasTable() = default;
  /// Weights must be non-negative with a positive sum.
  explicit AliasTable(std::span<const double> weights);

  std::size_t sample(Rng& rng) const;
  std::size_t size() const { return prob_.size(); }
  bool empty() const { return prob_.empty(); }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

/// Class of an edge: the community id for intra edges, num_communities()
/// for inter edges.
using EdgeClass = std::uint32_t;

/// Mutable simple graph split into intra and inter adjacency, with a
/// creation stamp per edge so that the oldest edge of each class can be
/// found.
class EdgeSet {
 public:
  explicit EdgeSet(const CommunityPartition& p);

  std::size_t num_vertices() const { return membership_.size(); }
  std::size_t num_edges() const { return stamps_.size(); }
  EdgeClass inter_class() const { return num_classes_ - 1; }
  EdgeClass class_of(Vertex a, Vertex b) const {
    return membership_[a] == membership_[b] ? membership_[a] : inter_class();
  }
  std::size_t class_size(EdgeClass cls) const { return by_age_[cls].size(); }

  bool contains(Vertex a, Vertex b) const;
  /// Adds the edge as the youngest; false if it is already present.
  bool add(Vertex a, Vertex b);
  /// Throws std::logic_error if the edge is absent.
  void remove(Vertex a, Vertex b);
  std::optional<Edge> oldest(EdgeClass cls) const;

  std::span<const Vertex> intra_neighbors(Vertex v) const { return intra_[v]; }
  std::span<const Vertex> inter_neighbors(Vertex v) const { return inter_[v]; }
  std::size_t degree(Vertex v) const { return intra_[v].size() + inter_[v].size(); }

  std::size_t common_neighbors(Vertex a, Vertex b) const;
  /// Common neighbours in the community of a; a and b share it.
  std::size_t common_intra_neighbors(Vertex a, Vertex b) const;

  struct Triangles {
    std::size_t intra = 0;
    std::size_t total = 0;
    std::size_t inter() const { return total - intra; }
  };
  Triangles triangles() const;

  /// Connected components, each sorted, listed by smallest member.
  std::vector<std::vector<Vertex>> components() const;

  /// Edges sorted lexicographically.
  std::vector<Edge> edges() const;
  AttributedGraph to_graph(AttributeMatrix attributes) const;

 private:
  std::vector<Community> membership_;
  EdgeClass num_classes_;
  std::vector<std::vector<Vertex>> intra_;
  std::vector<std::vector<Vertex>> inter_;
  std::unordered_map<std::uint64_t, std::uint64_t> stamps_;
  std::vector<std::map<std::uint64_t, Edge>> by_age_;
  std::uint64_t clock_ = 0;
};

/// Chung-Lu style candidate edges. Within a community a pair is drawn with
/// probability proportional to d_intra(v) d_intra(w) / (2 m_C), across
/// communities proportional to d_inter(v) d_inter(w) / (2 m_inter). Each
/// class carries its exact share of the total mass, so that mixing over
/// classes reproduces the normalized pair distribution.
class CandidateEdgeSampler {
 public:
  CandidateEdgeSampler(const ThetaM& theta_m, const CommunityPartition& p);

  std::size_t num_classes() const { return mass_.size(); }
  EdgeClass inter_class() const { return static_cast<EdgeClass>(mass_.size() - 1); }
  /// Sum of the pair probabilities inside the class.
  double class_mass(EdgeClass cls) const { return mass_[cls]; }
  /// Distinct edges the class should end up with.
  std::size_t class_target(EdgeClass cls) const { return target_[cls]; }

  /// Pair drawn within the class; the class mass must be positive.
  Edge draw(EdgeClass cls, Rng& rng) const;
  /// Class drawn by mass, then a pair within it.
  Edge draw(Rng& rng) const;
  /// Vertex of community c drawn proportional to d_intra.
  Vertex draw_intra_vertex(Community c, Rng& rng) const;
  /// Vertex drawn proportional to d_inter.
  Vertex draw_inter_vertex(Rng& rng) const;

  /// Normalized probability of the unordered pair (a, b) under the mixture.
  double pair_probability(Vertex a, Vertex b) const;

 private:
  const CommunityPartition* partition_;
  std::vector<double> d_intra_;
  std::vector<double> d_inter_;
  std::vector<std::vector<Vertex>> members_;
  std::vector<AliasTable> intra_tables_;  // per community
  AliasTable inter_table_;
  std::vector<double> mass_;  // per class
  std::vector<double> degree_sum_;  // per class, the 2m of that class
  std::vector<std::size_t> target_;
  AliasTable class_table_;
  double total_mass_ = 0.0;
};

/// Each bit drawn independently with the probability of its vertex's
/// community.
AttributeMatrix sample_attribute_matrix(const ThetaX& theta_x, const CommunityPartition& p,
                                        std::size_t num_attributes, Rng& rng);

/// Per community, draws pairs until m_C distinct intra edges are placed,
/// then inter edges up to m_inter. Throws SamplerError if a class cannot be
/// filled.
EdgeSet gen_initial_edge_set(const CandidateEdgeSampler& sampler, const CommunityPartition& p,
                             Rng& rng);

/// Optional veto on a new edge introduced by a swap.
using EdgeGate = std::function<bool(Vertex, Vertex, Rng&)>;

struct EnforceOptions {
  /// Proposals per phase are capped at this multiple of the edge count.
  std::size_t proposal_factor = 50;
  EdgeGate gate;
  /// Recounts triangles after every accepted swap and checks them against
  /// the incremental counts and the phase invariants. Slow; for tests.
  bool verify = false;
};

struct EnforceStats {
  std::size_t phase1_proposals = 0;
  std::size_t phase1_swaps = 0;
  bool phase1_capped = false;
  std::size_t phase2_proposals = 0;
  std::size_t phase2_swaps = 0;
  bool phase2_capped = false;
  EdgeSet::Triangles before;
  EdgeSet::Triangles after;
};

/// Swaps oldest edges for wedge-closing edges until the intra and then the
/// inter triangle targets are reached or the proposal cap is hit. Phase 1
/// replaces the oldest intra edge of the sampled community; phase 2 the
/// oldest inter edge. Edge counts per class never change.
EnforceStats get_final_edge_set(EdgeSet& edges, const ThetaM& theta_m,
                                const CandidateEdgeSampler& sampler,
                                const CommunityPartition& p, Rng& rng,
                                const EnforceOptions& options = {});

struct ReconnectStats {
  std::size_t components_before = 0;
  std::size_t components_after = 0;
  std::size_t swaps = 0;
  /// Small components with positive target degree left unattached.
  std::size_t unresolved = 0;
};

/// Attaches every small component that contains a vertex of positive target
/// degree to the main component (most vertices, ties to the smallest id).
/// Each swap removes a non-bridge main-component edge (a, b) and adds
/// (u, a) for a vertex u of the small component, where (u, a) is of the
/// same class as (a, b).
ReconnectStats reconnect(EdgeSet& edges, const ThetaM& theta_m, Rng& rng);

struct StructureOptions {
  EnforceOptions enforce;
  std::size_t max_rounds = 20;
  double tolerance = 0.02;
};

struct StructureStats {
  std::size_t rounds = 0;
  EnforceStats enforce;  // summed over rounds; before/after span the run
  ReconnectStats reconnect;  // swaps summed, components of the last round
  std::size_t triangle_target = 0;
  std::size_t triangles = 0;
  bool within_window = false;
};

/// Triangle enforcement alternated with reconnection until the total
/// triangle count is within the tolerance window of the target.
StructureStats enforce_structure(EdgeSet& edges, const ThetaM& theta_m,
                                 const CandidateEdgeSampler& sampler,
                                 const CommunityPartition& p, Rng& rng,
                                 const StructureOptions& options = {});

/// Bucket distributions per community (intra) and for inter edges.
struct BucketDistributions {
  std::vector<std::vector<double>> intra;
  std::vector<double> inter;
};

/// Distributions of the aggregated feature over the given edges, with one
/// pseudo-count per bucket.
BucketDistributions empirical_bucket_distributions(std::span<const Edge> edges,
                                                   const AttributeMatrix& x,
                                                   const CommunityPartition& p, double delta);

struct AcceptanceTables {
  double delta = 0.25;
  std::vector<std::vector<double>> intra;  // [community][bucket]
  std::vector<double> inter;               // [bucket]

  double probability(const CommunityPartition& p, const AttributeMatrix& x, Vertex a,
                     Vertex b) const;
};

/// R = theta_f / empirical per entry, divided by the largest R. Throws
/// std::invalid_argument on mismatched shapes or a degenerate table.
AcceptanceTables build_acceptance_tables(const ThetaF& theta_f,
                                         const BucketDistributions& empirical);

/// One candidate draw and one acceptance test.
std::optional<Edge> propose_edge(const CandidateEdgeSampler& sampler,
                                 const AcceptanceTables& tables, const AttributeMatrix& x,
                                 const CommunityPartition& p, Rng& rng);

struct SampleOptions {
  StructureOptions structure;
  /// Swapped-in edges also pass the acceptance test.
  bool gate_enforcement = true;
  /// Draws without a new edge before giving up.
  std::size_t stall_window = 1'000'000;
};

struct SampleDiagnostics {
  std::size_t aux_edges = 0;
  std::size_t draws = 0;
  std::size_t accepted = 0;
  std::size_t duplicates = 0;
  std::size_t rejected = 0;
  std::size_t edge_target = 0;
  StructureStats structure;
};

struct SampleResult {
  AttributedGraph graph;
  SampleDiagnostics diagnostics;
};

/// Full attributed sample: attributes, an auxiliary structural sample for
/// the acceptance tables, acceptance-rejection edge sampling up to each
/// class's edge count, then triangle enforcement and reconnection.
SampleResult sample_graph(const CagmParams& params, Rng& rng, const SampleOptions& options = {});

/// Structural sample only (initial edges, enforcement, reconnection), with
/// an n x 0 attribute matrix.
SampleResult sample_cpgm(const ThetaM& theta_m, const CommunityPartition& p, Rng& rng,
                         const StructureOptions& options = {});

std::string describe(const SampleDiagnostics& d);

}  // namespace cagm

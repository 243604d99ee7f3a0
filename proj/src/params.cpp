#include "cagm/params.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cagm/degree_sequence.hpp"
#include "cagm/dp_mech.hpp"

namespace cagm {

std::vector<std::size_t> ThetaM::m_intra(const CommunityPartition& p) const {
  std::vector<std::size_t> sums(p.num_communities(), 0);
  for (Vertex v = 0; v < d_intra.size(); ++v) sums[p.community_of(v)] += d_intra[v];
  for (auto& s : sums) s /= 2;
  return sums;
}

std::size_t ThetaM::m_inter() const {
  return std::accumulate(d_inter.begin(), d_inter.end(), std::size_t{0}) / 2;
}

std::size_t ThetaM::edge_target(const CommunityPartition& p) const {
  const auto intra = m_intra(p);
  return std::accumulate(intra.begin(), intra.end(), std::size_t{0}) + m_inter();
}

namespace {

void check_distribution(const std::vector<double>& dist, std::size_t buckets, const char* what) {
  if (dist.size() != buckets) {
    throw std::invalid_argument(std::string(what) + ": wrong number of buckets");
  }
  double total = 0.0;
  for (double x : dist) {
    if (!(x >= 0.0)) throw std::invalid_argument(std::string(what) + ": negative probability");
    total += x;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    throw std::invalid_argument(std::string(what) + ": does not sum to 1");
  }
}

}  // namespace

void CagmParams::validate() const {
  const std::size_t n = num_vertices();
  const std::size_t communities = partition.num_communities();
  if (theta_m.d_intra.size() != n || theta_m.d_inter.size() != n) {
    throw std::invalid_argument("degree sequences do not cover every vertex");
  }
  std::vector<std::size_t> sums(communities, 0);
  for (Vertex v = 0; v < n; ++v) {
    const Community c = partition.community_of(v);
    if (theta_m.d_intra[v] + 1 > std::max<std::size_t>(partition.size(c), 1)) {
      throw std::invalid_argument("intra degree of vertex " + std::to_string(v) +
                                  " exceeds its community size");
    }
    sums[c] += theta_m.d_intra[v];
  }
  for (std::size_t c = 0; c < communities; ++c) {
    if (sums[c] % 2 != 0) {
      throw std::invalid_argument("odd intra-degree sum in community " + std::to_string(c));
    }
  }
  const std::size_t inter_sum =
      std::accumulate(theta_m.d_inter.begin(), theta_m.d_inter.end(), std::size_t{0});
  if (inter_sum % 2 != 0) throw std::invalid_argument("odd inter-degree sum");

  if (theta_x.prob.size() != communities) {
    throw std::invalid_argument("attribute model does not cover every community");
  }
  for (const auto& row : theta_x.prob) {
    if (row.size() != num_attributes) {
      throw std::invalid_argument("attribute model has the wrong number of attributes");
    }
    for (double q : row) {
      if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("attribute probability outside [0, 1]");
      }
    }
  }
  const std::size_t buckets = max_bucket(theta_f.delta) + 1;
  if (theta_f.intra.size() != communities) {
    throw std::invalid_argument("correlation model does not cover every community");
  }
  for (const auto& dist : theta_f.intra) check_distribution(dist, buckets, "intra correlation");
  check_distribution(theta_f.inter, buckets, "inter correlation");
}

PrivacyBudget split_budget(double eps_total) {
  if (!(eps_total > 0.0) || !std::isfinite(eps_total)) {
    throw std::invalid_argument("privacy budget must be positive and finite");
  }
  PrivacyBudget b;
  b.eps_total = eps_total;
  b.eps_c = eps_total / 2.0;
  b.eps_F = eps_total / 6.0;
  b.eps_d = eps_total / 12.0;
  b.eps_tri = eps_total / 12.0;
  b.eps_tri_intra = eps_total / 12.0;
  const double rest = b.eps_c + b.eps_F + b.eps_d + b.eps_tri + b.eps_tri_intra;
  // rest is within a factor two of eps_total, so the subtraction is exact.
  b.eps_X = eps_total - rest;
  return b;
}

void BudgetLedger::charge(std::string name, double eps, int twelfths) {
  entries_.push_back({std::move(name), eps, twelfths});
}

double BudgetLedger::spent() const {
  double total = 0.0;
  for (const auto& e : entries_) total += e.eps;
  return total;
}

int BudgetLedger::spent_twelfths() const {
  int total = 0;
  for (const auto& e : entries_) total += e.twelfths;
  return total;
}

bool BudgetLedger::balanced() const {
  return spent() == eps_total_ && spent_twelfths() == 12;
}

ThetaM estimate_theta_m(const AttributedGraph& g, const CommunityPartition& p) {
  StructuralCensus census = structural_census(g, p);
  ThetaM m;
  m.d_intra = std::move(census.d_intra);
  m.d_inter = std::move(census.d_inter);
  m.tri_intra = census.tri_intra;
  m.tri_inter = census.tri_inter;
  return m;
}

namespace {

std::vector<std::vector<double>> attribute_counts(const AttributedGraph& g,
                                                  const CommunityPartition& p) {
  const std::size_t k = g.num_attributes();
  std::vector<std::vector<double>> counts(p.num_communities(), std::vector<double>(k, 0.0));
  const AttributeMatrix& x = g.attributes();
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    auto& row = counts[p.community_of(v)];
    for (std::size_t l = 0; l < k; ++l) row[l] += x.at(v, l);
  }
  return counts;
}

void check_partition(const AttributedGraph& g, const CommunityPartition& p) {
  if (p.num_vertices() != g.num_vertices()) {
    throw std::invalid_argument("partition covers " + std::to_string(p.num_vertices()) +
                                " vertices, graph has " + std::to_string(g.num_vertices()));
  }
}

ThetaX to_probabilities(std::vector<std::vector<double>> counts, const CommunityPartition& p) {
  ThetaX theta;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    const double size = static_cast<double>(p.size(static_cast<Community>(c)));
    for (double& q : counts[c]) q = size > 0 ? std::clamp(q, 0.0, size) / size : 0.0;
  }
  theta.prob = std::move(counts);
  return theta;
}

struct BucketCounts {
  std::vector<std::vector<double>> intra;
  std::vector<double> inter;
};

BucketCounts bucket_counts(const AttributedGraph& g, const CommunityPartition& p, double delta) {
  const std::size_t buckets = max_bucket(delta) + 1;
  BucketCounts counts{std::vector<std::vector<double>>(p.num_communities(),
                                                       std::vector<double>(buckets, 0.0)),
                      std::vector<double>(buckets, 0.0)};
  const AttributeMatrix& x = g.attributes();
  for (const Edge& e : g.edges()) {
    const std::size_t b = aggregate_feature(x.row(e.u), x.row(e.v), delta);
    const Community cu = p.community_of(e.u);
    if (cu == p.community_of(e.v)) {
      counts.intra[cu][b] += 1.0;
    } else {
      counts.inter[b] += 1.0;
    }
  }
  return counts;
}

std::vector<double> normalize_or_uniform(std::vector<double> counts) {
  double total = 0.0;
  for (double& c : counts) {
    c = std::max(c, 0.0);
    total += c;
  }
  if (total <= 0.0) {
    std::fill(counts.begin(), counts.end(), 1.0 / static_cast<double>(counts.size()));
  } else {
    for (double& c : counts) c /= total;
  }
  return counts;
}

ThetaF to_distributions(BucketCounts counts, double delta, std::size_t cap) {
  ThetaF theta;
  theta.delta = delta;
  theta.degree_cap = cap;
  for (auto& row : counts.intra) theta.intra.push_back(normalize_or_uniform(std::move(row)));
  theta.inter = normalize_or_uniform(std::move(counts.inter));
  return theta;
}

}  // namespace

ThetaX estimate_theta_x(const AttributedGraph& g, const CommunityPartition& p) {
  check_partition(g, p);
  return to_probabilities(attribute_counts(g, p), p);
}

ThetaX dp_estimate_theta_x(const AttributedGraph& g, const CommunityPartition& p, double eps_X,
                           Rng& rng) {
  if (!(eps_X > 0.0)) throw std::invalid_argument("dp_estimate_theta_x: eps_X must be positive");
  check_partition(g, p);
  auto counts = attribute_counts(g, p);
  const double sensitivity = static_cast<double>(g.num_attributes());
  for (auto& row : counts) {
    for (double& q : row) q = laplace_noise(q, sensitivity, eps_X, rng);
  }
  return to_probabilities(std::move(counts), p);
}

ThetaF estimate_theta_f(const AttributedGraph& g, const CommunityPartition& p, double delta) {
  check_partition(g, p);
  return to_distributions(bucket_counts(g, p, delta), delta, 0);
}

AttributedGraph truncate_degrees(const AttributedGraph& g, std::size_t cap) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<Vertex>> adj(n);
  std::vector<std::size_t> degree(n);
  for (Vertex v = 0; v < n; ++v) {
    auto nb = g.neighbors(v);
    adj[v].assign(nb.begin(), nb.end());
    degree[v] = nb.size();
  }
  for (Vertex v = static_cast<Vertex>(n); v-- > 0;) {
    while (degree[v] > cap) {
      auto& list = adj[v];
      auto victim = list.begin();
      for (auto it = list.begin(); it != list.end(); ++it) {
        if (degree[*it] > degree[*victim] || (degree[*it] == degree[*victim] && *it > *victim)) {
          victim = it;
        }
      }
      const Vertex w = *victim;
      list.erase(victim);
      adj[w].erase(std::find(adj[w].begin(), adj[w].end(), v));
      --degree[v];
      --degree[w];
    }
  }
  std::vector<Edge> edges;
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w : adj[v]) {
      if (v < w) edges.push_back({v, w});
    }
  }
  return AttributedGraph(n, std::move(edges), g.attributes());
}

ThetaF dp_estimate_theta_f(const AttributedGraph& g, const CommunityPartition& p, double delta,
                           std::size_t cap, double eps_F, Rng& rng) {
  if (cap < 1) throw std::invalid_argument("dp_estimate_theta_f: degree cap must be >= 1");
  if (!(eps_F > 0.0)) throw std::invalid_argument("dp_estimate_theta_f: eps_F must be positive");
  check_partition(g, p);
  const AttributedGraph truncated = truncate_degrees(g, cap);
  auto counts = bucket_counts(truncated, p, delta);
  const double sensitivity = 2.0 * static_cast<double>(cap);
  // Rows that cannot hold an edge under the public partition stay empty and
  // fall back to uniform without noise.
  std::size_t occupied = 0;
  for (Community c = 0; c < p.num_communities(); ++c) {
    if (p.size(c) > 0) ++occupied;
    if (p.size(c) < 2) continue;
    for (double& x : counts.intra[c]) x = laplace_noise(x, sensitivity, eps_F, rng);
  }
  if (occupied >= 2) {
    for (double& x : counts.inter) x = laplace_noise(x, sensitivity, eps_F, rng);
  }
  return to_distributions(std::move(counts), delta, cap);
}

DpDegreeSequences dp_degree_sequences(const AttributedGraph& g, const CommunityPartition& p,
                                      double eps_d, Rng& rng) {
  if (!(eps_d > 0.0)) throw std::invalid_argument("dp_degree_sequences: eps_d must be positive");
  check_partition(g, p);
  const std::size_t n = g.num_vertices();
  const StructuralCensus census = structural_census(g, p);
  DpDegreeSequences out;
  out.intra_sorted.resize(p.num_communities());

  for (Community c = 0; c < p.num_communities(); ++c) {
    const std::size_t size = p.size(c);
    if (size == 0) continue;
    std::vector<double> noisy;
    noisy.reserve(size);
    for (Vertex v : p.members(c)) noisy.push_back(static_cast<double>(census.d_intra[v]));
    std::sort(noisy.begin(), noisy.end());
    for (double& d : noisy) d = laplace_noise(d, 2.0, eps_d, rng);
    const auto monotone = isotonic_regression(noisy);
    std::vector<std::int64_t> rounded(size);
    for (std::size_t i = 0; i < size; ++i) rounded[i] = std::llround(monotone[i]);
    const std::vector<std::size_t> caps(size, size - 1);
    out.intra_sorted[c] = make_graphical(rounded, caps);
  }

  std::vector<std::int64_t> inter(n);
  std::vector<std::size_t> inter_caps(n);
  for (Vertex v = 0; v < n; ++v) {
    inter[v] = std::llround(laplace_noise(static_cast<double>(census.d_inter[v]), 2.0, eps_d, rng));
    inter_caps[v] = n - p.size(p.community_of(v));
  }
  out.inter = make_graphical(inter, inter_caps);

  out.intra.assign(n, 0);
  for (Community c = 0; c < p.num_communities(); ++c) {
    std::vector<Vertex> order(p.members(c).begin(), p.members(c).end());
    std::stable_sort(order.begin(), order.end(),
                     [&](Vertex a, Vertex b) { return out.inter[a] < out.inter[b]; });
    for (std::size_t r = 0; r < order.size(); ++r) out.intra[order[r]] = out.intra_sorted[c][r];
  }
  return out;
}

TriangleCounts dp_triangle_counts(const AttributedGraph& g, const CommunityPartition& p,
                                  double eps_tri, double eps_tri_intra, Rng& rng) {
  if (!(eps_tri > 0.0) || !(eps_tri_intra > 0.0)) {
    throw std::invalid_argument("dp_triangle_counts: budgets must be positive");
  }
  check_partition(g, p);
  const StructuralCensus census = structural_census(g, p);
  const auto intra_spec =
      LadderSpec::from(static_cast<std::int64_t>(census.tri_intra), TriangleLadder::intra(g, p));
  const auto total_spec =
      LadderSpec::from(static_cast<std::int64_t>(census.tri_total), TriangleLadder::total(g));
  TriangleCounts out;
  out.intra = static_cast<std::size_t>(ladder_count(intra_spec, eps_tri_intra, rng));
  out.total = static_cast<std::size_t>(ladder_count(total_spec, eps_tri, rng));
  out.inter = out.total > out.intra ? out.total - out.intra : 0;
  return out;
}

CagmParams fit(const AttributedGraph& g, const CommunityPartition& p, double delta) {
  check_partition(g, p);
  CagmParams params;
  params.partition = p;
  params.num_attributes = g.num_attributes();
  params.theta_m = estimate_theta_m(g, p);
  params.theta_x = estimate_theta_x(g, p);
  params.theta_f = estimate_theta_f(g, p, delta);
  return params;
}

DpFitResult dp_fit(const AttributedGraph& g, double eps_total, const DpFitConfig& cfg, Rng& rng) {
  const PrivacyBudget budget = split_budget(eps_total);
  max_bucket(cfg.delta);
  DpFitResult result;
  result.ledger = BudgetLedger(eps_total);

  result.search = dp_partition_search(g, budget.eps_c, cfg.objective, cfg.search, rng);
  if (result.search.eps_consumed > budget.eps_c * (1.0 + 1e-12)) {
    throw std::logic_error("partition search overspent its budget");
  }
  result.ledger.charge("community_partition", budget.eps_c, PrivacyBudget::kTwelfths[0]);
  const CommunityPartition& p = result.search.partition;

  CagmParams& params = result.params;
  params.partition = p;
  params.num_attributes = g.num_attributes();

  params.theta_f = dp_estimate_theta_f(g, p, cfg.delta, cfg.degree_cap, budget.eps_F, rng);
  result.ledger.charge("attribute_edge_correlations", budget.eps_F, PrivacyBudget::kTwelfths[1]);

  DpDegreeSequences degrees = dp_degree_sequences(g, p, budget.eps_d, rng);
  result.ledger.charge("degree_sequences", budget.eps_d, PrivacyBudget::kTwelfths[2]);
  params.theta_m.d_intra = std::move(degrees.intra);
  params.theta_m.d_inter = std::move(degrees.inter);

  const TriangleCounts tri = dp_triangle_counts(g, p, budget.eps_tri, budget.eps_tri_intra, rng);
  result.ledger.charge("triangles_total", budget.eps_tri, PrivacyBudget::kTwelfths[3]);
  result.ledger.charge("triangles_intra", budget.eps_tri_intra, PrivacyBudget::kTwelfths[4]);
  params.theta_m.tri_intra = tri.intra;
  params.theta_m.tri_inter = tri.inter;

  params.theta_x = dp_estimate_theta_x(g, p, budget.eps_X, rng);
  result.ledger.charge("attribute_distributions", budget.eps_X, PrivacyBudget::kTwelfths[5]);

  if (!result.ledger.balanced()) throw std::logic_error("privacy budget ledger does not balance");
  return result;
}

}  // namespace cagm

#include "cagm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cagm {

// ---------------------------------------------------------------- AliasTable

AliasTable::AliasTable(std::span<const double> weights) {
  const std::size_t n = weights.size();
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("AliasTable: weights must be finite and non-negative");
    }
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("AliasTable: weights sum to zero");

  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<std::size_t> small;
  std::vector<std::size_t> large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::size_t i : large) prob_[i] = 1.0;
  // Leftovers from rounding.
  for (std::size_t i : small) prob_[i] = 1.0;
}

std::size_t AliasTable::sample(Rng& rng) const {
  const std::size_t i = rng.index(prob_.size());
  return rng.uniform() < prob_[i] ? i : alias_[i];
}

// ------------------------------------------------------------------- EdgeSet

EdgeSet::EdgeSet(const CommunityPartition& p)
    : membership_(p.membership().begin(), p.membership().end()),
      num_classes_(static_cast<EdgeClass>(p.num_communities() + 1)),
      intra_(p.num_vertices()),
      inter_(p.num_vertices()),
      by_age_(num_classes_) {}

bool EdgeSet::contains(Vertex a, Vertex b) const {
  if (a == b) return false;
  return stamps_.count(edge_key(make_edge(a, b))) != 0;
}

bool EdgeSet::add(Vertex a, Vertex b) {
  if (a == b) throw std::logic_error("EdgeSet::add: self-loop");
  const Edge e = make_edge(a, b);
  const std::uint64_t stamp = clock_;
  if (!stamps_.emplace(edge_key(e), stamp).second) return false;
  ++clock_;
  const EdgeClass cls = class_of(a, b);
  by_age_[cls].emplace(stamp, e);
  auto& adj = cls == inter_class() ? inter_ : intra_;
  adj[a].push_back(b);
  adj[b].push_back(a);
  return true;
}

namespace {

void erase_one(std::vector<Vertex>& list, Vertex x) {
  auto it = std::find(list.begin(), list.end(), x);
  *it = list.back();
  list.pop_back();
}

}  // namespace

void EdgeSet::remove(Vertex a, Vertex b) {
  const Edge e = make_edge(a, b);
  auto it = stamps_.find(edge_key(e));
  if (it == stamps_.end()) throw std::logic_error("EdgeSet::remove: edge not present");
  const EdgeClass cls = class_of(a, b);
  by_age_[cls].erase(it->second);
  stamps_.erase(it);
  auto& adj = cls == inter_class() ? inter_ : intra_;
  erase_one(adj[a], b);
  erase_one(adj[b], a);
}

std::optional<Edge> EdgeSet::oldest(EdgeClass cls) const {
  if (by_age_[cls].empty()) return std::nullopt;
  return by_age_[cls].begin()->second;
}

std::size_t EdgeSet::common_neighbors(Vertex a, Vertex b) const {
  if (degree(a) > degree(b)) std::swap(a, b);
  std::size_t count = 0;
  for (Vertex w : intra_[a]) count += contains(w, b);
  for (Vertex w : inter_[a]) count += contains(w, b);
  return count;
}

std::size_t EdgeSet::common_intra_neighbors(Vertex a, Vertex b) const {
  if (intra_[a].size() > intra_[b].size()) std::swap(a, b);
  std::size_t count = 0;
  for (Vertex w : intra_[a]) count += contains(w, b);
  return count;
}

EdgeSet::Triangles EdgeSet::triangles() const {
  Triangles t;
  for (const auto& [key, stamp] : stamps_) {
    const auto a = static_cast<Vertex>(key >> 32);
    const auto b = static_cast<Vertex>(key & 0xFFFFFFFFu);
    t.total += common_neighbors(a, b);
    if (membership_[a] == membership_[b]) t.intra += common_intra_neighbors(a, b);
  }
  t.total /= 3;
  t.intra /= 3;
  return t;
}

std::vector<std::vector<Vertex>> EdgeSet::components() const {
  const std::size_t n = num_vertices();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> queue;
  for (Vertex s = 0; s < n; ++s) {
    if (seen[s]) continue;
    seen[s] = true;
    queue.assign(1, s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex v = queue[head];
      for (const auto* adj : {&intra_[v], &inter_[v]}) {
        for (Vertex w : *adj) {
          if (!seen[w]) {
            seen[w] = true;
            queue.push_back(w);
          }
        }
      }
    }
    std::sort(queue.begin(), queue.end());
    out.push_back(queue);
  }
  return out;
}

std::vector<Edge> EdgeSet::edges() const {
  std::vector<Edge> out;
  out.reserve(stamps_.size());
  for (const auto& [key, stamp] : stamps_) {
    out.push_back({static_cast<Vertex>(key >> 32), static_cast<Vertex>(key & 0xFFFFFFFFu)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

AttributedGraph EdgeSet::to_graph(AttributeMatrix attributes) const {
  return AttributedGraph(num_vertices(), edges(), std::move(attributes));
}

// ------------------------------------------------------ CandidateEdgeSampler

CandidateEdgeSampler::CandidateEdgeSampler(const ThetaM& theta_m, const CommunityPartition& p)
    : partition_(&p) {
  const std::size_t n = p.num_vertices();
  const std::size_t k = p.num_communities();
  if (theta_m.d_intra.size() != n || theta_m.d_inter.size() != n) {
    throw std::invalid_argument("CandidateEdgeSampler: degree sequences do not match partition");
  }
  d_intra_.assign(theta_m.d_intra.begin(), theta_m.d_intra.end());
  d_inter_.assign(theta_m.d_inter.begin(), theta_m.d_inter.end());
  members_.resize(k);
  intra_tables_.resize(k);
  mass_.assign(k + 1, 0.0);
  degree_sum_.assign(k + 1, 0.0);
  target_.assign(k + 1, 0);

  std::vector<double> inter_by_community(k, 0.0);
  for (Community c = 0; c < k; ++c) {
    auto members = p.members(c);
    members_[c].assign(members.begin(), members.end());
    std::vector<double> weights;
    std::size_t sum = 0;
    double squares = 0.0;
    for (Vertex v : members) {
      weights.push_back(d_intra_[v]);
      sum += theta_m.d_intra[v];
      squares += d_intra_[v] * d_intra_[v];
      inter_by_community[c] += d_inter_[v];
    }
    target_[c] = sum / 2;
    degree_sum_[c] = static_cast<double>(sum);
    if (sum > 0) {
      const double s = static_cast<double>(sum);
      mass_[c] = (s * s - squares) / (2.0 * s);
      intra_tables_[c] = AliasTable(weights);
    }
  }
  const std::size_t inter_sum =
      std::accumulate(theta_m.d_inter.begin(), theta_m.d_inter.end(), std::size_t{0});
  target_[k] = inter_sum / 2;
  degree_sum_[k] = static_cast<double>(inter_sum);
  if (inter_sum > 0) {
    const double s = static_cast<double>(inter_sum);
    double same = 0.0;
    for (double t : inter_by_community) same += t * t;
    mass_[k] = (s * s - same) / (2.0 * s);
    inter_table_ = AliasTable(d_inter_);
  }
  total_mass_ = std::accumulate(mass_.begin(), mass_.end(), 0.0);
  if (total_mass_ > 0.0) class_table_ = AliasTable(mass_);
}

Edge CandidateEdgeSampler::draw(EdgeClass cls, Rng& rng) const {
  if (!(mass_[cls] > 0.0)) throw std::logic_error("CandidateEdgeSampler: empty class");
  if (cls == inter_class()) {
    while (true) {
      const auto v = static_cast<Vertex>(inter_table_.sample(rng));
      const auto w = static_cast<Vertex>(inter_table_.sample(rng));
      if (partition_->community_of(v) != partition_->community_of(w)) return make_edge(v, w);
    }
  }
  const auto& members = members_[cls];
  while (true) {
    const Vertex v = members[intra_tables_[cls].sample(rng)];
    const Vertex w = members[intra_tables_[cls].sample(rng)];
    if (v != w) return make_edge(v, w);
  }
}

Edge CandidateEdgeSampler::draw(Rng& rng) const {
  if (!(total_mass_ > 0.0)) throw std::logic_error("CandidateEdgeSampler: no edge mass");
  return draw(static_cast<EdgeClass>(class_table_.sample(rng)), rng);
}

Vertex CandidateEdgeSampler::draw_intra_vertex(Community c, Rng& rng) const {
  return members_[c][intra_tables_[c].sample(rng)];
}

Vertex CandidateEdgeSampler::draw_inter_vertex(Rng& rng) const {
  return static_cast<Vertex>(inter_table_.sample(rng));
}

double CandidateEdgeSampler::pair_probability(Vertex a, Vertex b) const {
  if (a == b || !(total_mass_ > 0.0)) return 0.0;
  const Community ca = partition_->community_of(a);
  const bool intra = ca == partition_->community_of(b);
  const EdgeClass cls = intra ? ca : inter_class();
  if (!(degree_sum_[cls] > 0.0)) return 0.0;
  const auto& d = intra ? d_intra_ : d_inter_;
  return d[a] * d[b] / degree_sum_[cls] / total_mass_;
}

// ---------------------------------------------------------------- sampling

AttributeMatrix sample_attribute_matrix(const ThetaX& theta_x, const CommunityPartition& p,
                                        std::size_t num_attributes, Rng& rng) {
  if (theta_x.prob.size() < p.num_communities()) {
    throw std::invalid_argument("sample_attribute_matrix: community missing from ThetaX");
  }
  AttributeMatrix x(p.num_vertices(), num_attributes);
  for (Vertex v = 0; v < p.num_vertices(); ++v) {
    const auto& probs = theta_x.prob[p.community_of(v)];
    if (probs.size() != num_attributes) {
      throw std::invalid_argument("sample_attribute_matrix: wrong attribute count in ThetaX");
    }
    for (std::size_t l = 0; l < num_attributes; ++l) x.set(v, l, rng.bernoulli(probs[l]));
  }
  return x;
}

namespace {

constexpr std::size_t kStallDraws = 1'000'000;

void check_fillable(const CandidateEdgeSampler& sampler, EdgeClass cls) {
  if (sampler.class_target(cls) > 0 && !(sampler.class_mass(cls) > 0.0)) {
    std::ostringstream msg;
    msg << "edge class " << cls << " needs " << sampler.class_target(cls)
        << " edges but no pair can be drawn";
    throw SamplerError(msg.str());
  }
}

}  // namespace

EdgeSet gen_initial_edge_set(const CandidateEdgeSampler& sampler, const CommunityPartition& p,
                             Rng& rng) {
  EdgeSet edges(p);
  for (EdgeClass cls = 0; cls < sampler.num_classes(); ++cls) {
    check_fillable(sampler, cls);
    const std::size_t target = sampler.class_target(cls);
    std::size_t placed = 0;
    std::size_t idle = 0;
    while (placed < target) {
      const Edge e = sampler.draw(cls, rng);
      if (edges.add(e.u, e.v)) {
        ++placed;
        idle = 0;
      } else if (++idle >= kStallDraws) {
        std::ostringstream msg;
        msg << "edge class " << cls << ": no new edge in " << kStallDraws << " draws after "
            << placed << " of " << target;
        throw SamplerError(msg.str());
      }
    }
  }
  return edges;
}

namespace {

void verify_counts(const EdgeSet& edges, const EdgeSet::Triangles& expected, const char* phase) {
  const EdgeSet::Triangles actual = edges.triangles();
  if (actual.intra != expected.intra || actual.total != expected.total) {
    throw std::logic_error(std::string(phase) + ": incremental triangle count drifted");
  }
}

}  // namespace

EnforceStats get_final_edge_set(EdgeSet& edges, const ThetaM& theta_m,
                                const CandidateEdgeSampler& sampler,
                                const CommunityPartition& p, Rng& rng,
                                const EnforceOptions& options) {
  EnforceStats stats;
  EdgeSet::Triangles mu = edges.triangles();
  stats.before = mu;
  const std::size_t cap = options.proposal_factor * std::max<std::size_t>(edges.num_edges(), 1);
  auto gate_allows = [&](Vertex a, Vertex b) { return !options.gate || options.gate(a, b, rng); };

  // Phase 1: intra-community triangles.
  std::vector<Community> eligible;
  for (Community c = 0; c < p.num_communities(); ++c) {
    if (edges.class_size(c) > 0 && sampler.class_mass(c) > 0.0) eligible.push_back(c);
  }
  while (mu.intra < theta_m.tri_intra) {
    if (eligible.empty() || stats.phase1_proposals >= cap) {
      stats.phase1_capped = true;
      break;
    }
    ++stats.phase1_proposals;
    const Community c = eligible[rng.index(eligible.size())];
    const Vertex v1 = sampler.draw_intra_vertex(c, rng);
    auto n1 = edges.intra_neighbors(v1);
    if (n1.empty()) continue;
    const Vertex v2 = n1[rng.index(n1.size())];
    auto n2 = edges.intra_neighbors(v2);
    const Vertex v3 = n2[rng.index(n2.size())];
    if (v3 == v1 || edges.contains(v1, v3)) continue;

    const Edge old = *edges.oldest(c);
    const std::size_t prev_intra = edges.common_intra_neighbors(old.u, old.v);
    const std::size_t prev_total = edges.common_neighbors(old.u, old.v);
    edges.remove(old.u, old.v);
    const std::size_t new_intra = edges.common_intra_neighbors(v1, v3);
    if (prev_intra < new_intra && gate_allows(v1, v3)) {
      const std::size_t new_total = edges.common_neighbors(v1, v3);
      edges.add(v1, v3);
      mu.intra = mu.intra - prev_intra + new_intra;
      mu.total = mu.total - prev_total + new_total;
      ++stats.phase1_swaps;
      if (options.verify) verify_counts(edges, mu, "phase 1");
    } else {
      edges.add(old.u, old.v);  // back in as the youngest
    }
  }

  // Phase 2: inter-community triangles from intra/inter wedges. Swapping
  // inter edges never touches a triangle inside one community.
  const EdgeClass inter = edges.inter_class();
  while (mu.inter() < theta_m.tri_inter) {
    if (edges.class_size(inter) == 0 || !(sampler.class_mass(inter) > 0.0) ||
        stats.phase2_proposals >= cap) {
      stats.phase2_capped = true;
      break;
    }
    ++stats.phase2_proposals;
    const Vertex v1 = sampler.draw_inter_vertex(rng);
    auto n1 = edges.inter_neighbors(v1);
    if (n1.empty()) continue;
    const Vertex v2 = n1[rng.index(n1.size())];
    auto n2 = edges.intra_neighbors(v2);
    if (n2.empty()) continue;
    const Vertex v3 = n2[rng.index(n2.size())];
    if (v3 == v1 || edges.contains(v1, v3)) continue;

    const Edge old = *edges.oldest(inter);
    const std::size_t prev = edges.common_neighbors(old.u, old.v);
    edges.remove(old.u, old.v);
    const std::size_t fresh = edges.common_neighbors(v1, v3);
    if (prev < fresh && gate_allows(v1, v3)) {
      edges.add(v1, v3);
      mu.total = mu.total - prev + fresh;
      ++stats.phase2_swaps;
      if (options.verify) verify_counts(edges, mu, "phase 2");
    } else {
      edges.add(old.u, old.v);
    }
  }
  stats.after = mu;
  return stats;
}

// ---------------------------------------------------------------- reconnect

namespace {

// True if b is reachable from a without the edge (a, b).
bool reachable_without(const EdgeSet& edges, Vertex a, Vertex b) {
  std::vector<bool> seen(edges.num_vertices(), false);
  std::vector<Vertex> stack{a};
  seen[a] = true;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (auto adj : {edges.intra_neighbors(v), edges.inter_neighbors(v)}) {
      for (Vertex w : adj) {
        if (seen[w] || (v == a && w == b)) continue;
        if (w == b) return true;
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return false;
}

}  // namespace

ReconnectStats reconnect(EdgeSet& edges, const ThetaM& theta_m, Rng& rng) {
  ReconnectStats stats;
  const auto comps = edges.components();
  stats.components_before = comps.size();
  stats.components_after = comps.size();
  if (comps.size() <= 1) return stats;

  std::size_t main = 0;
  for (std::size_t i = 1; i < comps.size(); ++i) {
    if (comps[i].size() > comps[main].size()) main = i;
  }
  std::vector<Edge> main_edges;
  for (Vertex v : comps[main]) {
    for (auto adj : {edges.intra_neighbors(v), edges.inter_neighbors(v)}) {
      for (Vertex w : adj) {
        if (v < w) main_edges.push_back({v, w});
      }
    }
  }
  std::sort(main_edges.begin(), main_edges.end());

  auto wants_edges = [&](Vertex v) { return theta_m.d_intra[v] + theta_m.d_inter[v] > 0; };
  constexpr std::size_t kCandidates = 32;

  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    if (ci == main) continue;
    std::vector<Vertex> hosts;
    for (Vertex v : comps[ci]) {
      if (wants_edges(v)) hosts.push_back(v);
    }
    if (hosts.empty()) continue;
    for (std::size_t i = hosts.size(); i > 1; --i) std::swap(hosts[i - 1], hosts[rng.index(i)]);

    bool attached = false;
    for (Vertex u : hosts) {
      if (main_edges.empty()) break;
      struct Option {
        std::size_t index;
        Vertex a;
        Vertex b;
        std::size_t cn;
      };
      std::vector<Option> options;
      const std::size_t start = rng.index(main_edges.size());
      for (std::size_t s = 0; s < main_edges.size() && options.size() < kCandidates; ++s) {
        const std::size_t idx = (start + s) % main_edges.size();
        const Edge e = main_edges[idx];
        const EdgeClass cls = edges.class_of(e.u, e.v);
        for (auto [a, b] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
          if (edges.class_of(u, a) == cls) {
            options.push_back({idx, a, b, edges.common_neighbors(a, b)});
            break;
          }
        }
      }
      std::stable_sort(options.begin(), options.end(),
                       [](const Option& x, const Option& y) { return x.cn < y.cn; });
      for (const Option& opt : options) {
        if (opt.cn == 0 && !reachable_without(edges, opt.a, opt.b)) continue;
        edges.remove(opt.a, opt.b);
        edges.add(u, opt.a);
        main_edges[opt.index] = make_edge(u, opt.a);
        attached = true;
        break;
      }
      if (attached) break;
    }
    if (!attached) {
      ++stats.unresolved;
      continue;
    }
    ++stats.swaps;
    --stats.components_after;
    for (Vertex v : comps[ci]) {
      for (auto adj : {edges.intra_neighbors(v), edges.inter_neighbors(v)}) {
        for (Vertex w : adj) {
          if (v < w) main_edges.push_back({v, w});
        }
      }
    }
  }
  return stats;
}

StructureStats enforce_structure(EdgeSet& edges, const ThetaM& theta_m,
                                 const CandidateEdgeSampler& sampler,
                                 const CommunityPartition& p, Rng& rng,
                                 const StructureOptions& options) {
  StructureStats stats;
  stats.triangle_target = theta_m.tri_intra + theta_m.tri_inter;
  const double target = static_cast<double>(stats.triangle_target);
  const double floor = (1.0 - options.tolerance) * target;
  while (true) {
    const EnforceStats e = get_final_edge_set(edges, theta_m, sampler, p, rng, options.enforce);
    if (stats.rounds == 0) stats.enforce.before = e.before;
    stats.enforce.after = e.after;
    stats.enforce.phase1_proposals += e.phase1_proposals;
    stats.enforce.phase1_swaps += e.phase1_swaps;
    stats.enforce.phase1_capped = e.phase1_capped;
    stats.enforce.phase2_proposals += e.phase2_proposals;
    stats.enforce.phase2_swaps += e.phase2_swaps;
    stats.enforce.phase2_capped = e.phase2_capped;
    ++stats.rounds;

    const ReconnectStats r = reconnect(edges, theta_m, rng);
    if (stats.rounds == 1) stats.reconnect.components_before = r.components_before;
    stats.reconnect.components_after = r.components_after;
    stats.reconnect.swaps += r.swaps;
    stats.reconnect.unresolved = r.unresolved;

    stats.triangles = edges.triangles().total;
    if (static_cast<double>(stats.triangles) >= floor) break;
    if (stats.rounds >= options.max_rounds) break;
    if (e.phase1_swaps + e.phase2_swaps + r.swaps == 0) break;
  }
  stats.within_window =
      std::fabs(static_cast<double>(stats.triangles) - target) <= options.tolerance * target;
  return stats;
}

// ------------------------------------------------------- acceptance tables

BucketDistributions empirical_bucket_distributions(std::span<const Edge> edges,
                                                   const AttributeMatrix& x,
                                                   const CommunityPartition& p, double delta) {
  const std::size_t buckets = max_bucket(delta) + 1;
  BucketDistributions d{std::vector<std::vector<double>>(p.num_communities(),
                                                         std::vector<double>(buckets, 1.0)),
                        std::vector<double>(buckets, 1.0)};
  for (const Edge& e : edges) {
    const std::size_t b = aggregate_feature(x.row(e.u), x.row(e.v), delta);
    const Community c = p.community_of(e.u);
    if (c == p.community_of(e.v)) {
      d.intra[c][b] += 1.0;
    } else {
      d.inter[b] += 1.0;
    }
  }
  auto normalize = [](std::vector<double>& row) {
    const double total = std::accumulate(row.begin(), row.end(), 0.0);
    for (double& v : row) v /= total;
  };
  for (auto& row : d.intra) normalize(row);
  normalize(d.inter);
  return d;
}

AcceptanceTables build_acceptance_tables(const ThetaF& theta_f,
                                         const BucketDistributions& empirical) {
  const std::size_t buckets = theta_f.inter.size();
  if (empirical.inter.size() != buckets || empirical.intra.size() != theta_f.intra.size()) {
    throw std::invalid_argument("build_acceptance_tables: shapes do not match");
  }
  auto ratio = [](double model, double observed) {
    if (!(observed > 0.0)) {
      throw std::invalid_argument("build_acceptance_tables: empirical distribution has a zero");
    }
    return model / observed;
  };
  AcceptanceTables t;
  t.delta = theta_f.delta;
  double sup = 0.0;
  t.intra.resize(theta_f.intra.size());
  for (std::size_t c = 0; c < theta_f.intra.size(); ++c) {
    if (theta_f.intra[c].size() != buckets || empirical.intra[c].size() != buckets) {
      throw std::invalid_argument("build_acceptance_tables: bucket counts differ");
    }
    for (std::size_t b = 0; b < buckets; ++b) {
      t.intra[c].push_back(ratio(theta_f.intra[c][b], empirical.intra[c][b]));
      sup = std::max(sup, t.intra[c].back());
    }
  }
  for (std::size_t b = 0; b < buckets; ++b) {
    t.inter.push_back(ratio(theta_f.inter[b], empirical.inter[b]));
    sup = std::max(sup, t.inter.back());
  }
  if (!(sup > 0.0) || !std::isfinite(sup)) {
    throw std::invalid_argument("build_acceptance_tables: degenerate ratios");
  }
  for (auto& row : t.intra) {
    for (double& r : row) r /= sup;
  }
  for (double& r : t.inter) r /= sup;
  return t;
}

double AcceptanceTables::probability(const CommunityPartition& p, const AttributeMatrix& x,
                                     Vertex a, Vertex b) const {
  const std::size_t bucket = aggregate_feature(x.row(a), x.row(b), delta);
  const Community c = p.community_of(a);
  return c == p.community_of(b) ? intra[c][bucket] : inter[bucket];
}

std::optional<Edge> propose_edge(const CandidateEdgeSampler& sampler,
                                 const AcceptanceTables& tables, const AttributeMatrix& x,
                                 const CommunityPartition& p, Rng& rng) {
  const Edge e = sampler.draw(rng);
  if (rng.uniform() < tables.probability(p, x, e.u, e.v)) return e;
  return std::nullopt;
}

// ------------------------------------------------------------- full sample

SampleResult sample_graph(const CagmParams& params, Rng& rng, const SampleOptions& options) {
  params.validate();
  const CommunityPartition& p = params.partition;
  const ThetaM& theta_m = params.theta_m;
  SampleResult result;
  SampleDiagnostics& diag = result.diagnostics;

  AttributeMatrix x =
      sample_attribute_matrix(params.theta_x, p, params.num_attributes, rng);
  const CandidateEdgeSampler sampler(theta_m, p);
  for (EdgeClass cls = 0; cls < sampler.num_classes(); ++cls) check_fillable(sampler, cls);

  // Auxiliary structural sample, used only to estimate the bucket
  // distributions of the edge model.
  AcceptanceTables tables;
  {
    EdgeSet aux = gen_initial_edge_set(sampler, p, rng);
    EnforceOptions plain;
    plain.proposal_factor = options.structure.enforce.proposal_factor;
    get_final_edge_set(aux, theta_m, sampler, p, rng, plain);
    diag.aux_edges = aux.num_edges();
    const auto aux_edges = aux.edges();
    tables = build_acceptance_tables(
        params.theta_f, empirical_bucket_distributions(aux_edges, x, p, params.theta_f.delta));
  }

  const std::size_t classes = sampler.num_classes();
  std::vector<std::size_t> filled(classes, 0);
  std::vector<double> active(classes, 0.0);
  for (EdgeClass cls = 0; cls < classes; ++cls) {
    diag.edge_target += sampler.class_target(cls);
    if (sampler.class_target(cls) > 0) active[cls] = sampler.class_mass(cls);
  }
  EdgeSet edges(p);
  AliasTable picker;
  if (diag.edge_target > 0) picker = AliasTable(active);
  std::size_t idle = 0;
  while (edges.num_edges() < diag.edge_target) {
    const auto cls = static_cast<EdgeClass>(picker.sample(rng));
    const Edge e = sampler.draw(cls, rng);
    ++diag.draws;
    if (++idle > options.stall_window) {
      std::ostringstream msg;
      msg << "acceptance stall: no edge added in " << options.stall_window << " draws ("
          << edges.num_edges() << " of " << diag.edge_target << " edges placed)";
      throw SamplerError(msg.str());
    }
    if (edges.contains(e.u, e.v)) {
      ++diag.duplicates;
      continue;
    }
    if (!(rng.uniform() < tables.probability(p, x, e.u, e.v))) {
      ++diag.rejected;
      continue;
    }
    edges.add(e.u, e.v);
    ++diag.accepted;
    idle = 0;
    if (++filled[cls] == sampler.class_target(cls)) {
      active[cls] = 0.0;
      if (edges.num_edges() < diag.edge_target) picker = AliasTable(active);
    }
  }

  StructureOptions structure = options.structure;
  if (options.gate_enforcement) {
    structure.enforce.gate = [&](Vertex a, Vertex b, Rng& r) {
      return r.uniform() < tables.probability(p, x, a, b);
    };
  }
  diag.structure = enforce_structure(edges, theta_m, sampler, p, rng, structure);
  result.graph = edges.to_graph(std::move(x));
  return result;
}

SampleResult sample_cpgm(const ThetaM& theta_m, const CommunityPartition& p, Rng& rng,
                         const StructureOptions& options) {
  const CandidateEdgeSampler sampler(theta_m, p);
  EdgeSet edges = gen_initial_edge_set(sampler, p, rng);
  SampleResult result;
  result.diagnostics.edge_target = edges.num_edges();
  result.diagnostics.accepted = edges.num_edges();
  result.diagnostics.structure = enforce_structure(edges, theta_m, sampler, p, rng, options);
  result.graph = edges.to_graph(AttributeMatrix(p.num_vertices(), 0));
  return result;
}

std::string describe(const SampleDiagnostics& d) {
  const StructureStats& s = d.structure;
  std::ostringstream out;
  out << "edge_target " << d.edge_target << '\n'
      << "aux_edges " << d.aux_edges << '\n'
      << "draws " << d.draws << '\n'
      << "accepted " << d.accepted << '\n'
      << "duplicates " << d.duplicates << '\n'
      << "rejected " << d.rejected << '\n'
      << "structure_rounds " << s.rounds << '\n'
      << "phase1_proposals " << s.enforce.phase1_proposals << '\n'
      << "phase1_swaps " << s.enforce.phase1_swaps << '\n'
      << "phase1_capped " << s.enforce.phase1_capped << '\n'
      << "phase2_proposals " << s.enforce.phase2_proposals << '\n'
      << "phase2_swaps " << s.enforce.phase2_swaps << '\n'
      << "phase2_capped " << s.enforce.phase2_capped << '\n'
      << "components_before " << s.reconnect.components_before << '\n'
      << "components_after " << s.reconnect.components_after << '\n'
      << "reconnect_swaps " << s.reconnect.swaps << '\n'
      << "reconnect_unresolved " << s.reconnect.unresolved << '\n'
      << "triangle_target " << s.triangle_target << '\n'
      << "triangles " << s.triangles << '\n'
      << "within_window " << s.within_window << '\n';
  return out.str();
}

}  // namespace cagm

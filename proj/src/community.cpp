#include "cagm/community.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "cagm/dp_mech.hpp"

namespace cagm {

std::size_t ObjectiveConfig::aux_edge_quota(std::size_t n) {
  const std::size_t pairs = n * (n > 0 ? n - 1 : 0);
  return (pairs + 19) / 20;
}

double ObjectiveConfig::structural_sensitivity(std::size_t m) {
  if (m >= 10000) return 0.0003;
  return 3.0 / static_cast<double>(std::max<std::size_t>(m, 1));
}

double ObjectiveConfig::sensitivity_bound(std::size_t n, std::size_t m) const {
  validate();
  const double attr = n > 0 ? 60.0 / static_cast<double>(n) : 0.0;
  return w_s * structural_sensitivity(m) + w_a() * attr;
}

void ObjectiveConfig::validate() const {
  if (!(w_s >= 0.0 && w_s <= 1.0)) {
    throw std::invalid_argument("w_s must be in [0, 1], got " + std::to_string(w_s));
  }
}

void SearchConfig::validate() const {
  if (rounds == 0) throw std::invalid_argument("search rounds must be positive");
  if (fanout == 0) throw std::invalid_argument("search fanout must be positive");
}

double modularity(const AttributedGraph& g, const CommunityPartition& p) {
  const std::size_t m = g.num_edges();
  if (m == 0) throw std::invalid_argument("modularity: graph has no edges");
  if (p.num_vertices() != g.num_vertices()) {
    throw std::invalid_argument("modularity: partition does not match graph");
  }
  std::vector<double> inner(p.num_communities(), 0.0);
  std::vector<double> volume(p.num_communities(), 0.0);
  for (const Edge& e : g.edges()) {
    const Community cu = p.community_of(e.u);
    const Community cv = p.community_of(e.v);
    if (cu == cv) inner[cu] += 1.0;
    volume[cu] += 1.0;
    volume[cv] += 1.0;
  }
  const double md = static_cast<double>(m);
  double q = 0.0;
  for (std::size_t c = 0; c < inner.size(); ++c) {
    const double share = volume[c] / (2.0 * md);
    q += inner[c] / md - share * share;
  }
  return q;
}

namespace {

struct SimilarPair {
  double similarity;
  Vertex u;
  Vertex v;
};

// True when a ranks ahead of b: higher similarity, then smaller pair.
bool ranks_ahead(const SimilarPair& a, const SimilarPair& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  return std::tie(a.u, a.v) < std::tie(b.u, b.v);
}

}  // namespace

AttributedGraph build_auxiliary_graph(const AttributedGraph& g) {
  const std::size_t n = g.num_vertices();
  if (n < 2) throw std::invalid_argument("build_auxiliary_graph: need at least 2 vertices");
  const AttributeMatrix& x = g.attributes();
  const std::size_t k = x.cols();
  const std::size_t words = (k + 63) / 64;
  std::vector<std::uint64_t> packed(n * words, 0);
  std::vector<std::size_t> ones(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < k; ++l) {
      if (x.at(i, l)) {
        packed[i * words + l / 64] |= std::uint64_t{1} << (l % 64);
        ++ones[i];
      }
    }
  }
  auto similarity = [&](std::size_t i, std::size_t j) {
    if (ones[i] == 0 || ones[j] == 0) return 0.0;
    std::size_t dot = 0;
    for (std::size_t w = 0; w < words; ++w) {
      dot += static_cast<std::size_t>(__builtin_popcountll(packed[i * words + w] & packed[j * words + w]));
    }
    return static_cast<double>(dot) /
           std::sqrt(static_cast<double>(ones[i]) * static_cast<double>(ones[j]));
  };

  const std::size_t quota = ObjectiveConfig::aux_edge_quota(n);
  // Bounded heap whose top is the weakest pair kept so far.
  auto weaker_on_top = [](const SimilarPair& a, const SimilarPair& b) { return ranks_ahead(a, b); };
  std::priority_queue<SimilarPair, std::vector<SimilarPair>, decltype(weaker_on_top)> heap(
      weaker_on_top);
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) {
      SimilarPair cand{similarity(i, j), i, j};
      if (heap.size() < quota) {
        heap.push(cand);
      } else if (ranks_ahead(cand, heap.top())) {
        heap.pop();
        heap.push(cand);
      }
    }
  }
  std::vector<Edge> edges;
  edges.reserve(heap.size());
  while (!heap.empty()) {
    edges.push_back({heap.top().u, heap.top().v});
    heap.pop();
  }
  return AttributedGraph(n, std::move(edges), x);
}

double combined_objective(const AttributedGraph& g, const AttributedGraph& aux,
                          const CommunityPartition& p, const ObjectiveConfig& cfg) {
  cfg.validate();
  double q = 0.0;
  if (cfg.w_s > 0.0) q += cfg.w_s * modularity(g, p);
  if (cfg.w_a() > 0.0) q += cfg.w_a() * modularity(aux, p);
  return q;
}

CommunityPartition compact(const CommunityPartition& p) {
  std::vector<Community> remap(p.num_communities(), 0);
  std::vector<bool> assigned(p.num_communities(), false);
  assigned[0] = true;
  Community next = 1;
  std::vector<Community> membership(p.num_vertices());
  for (Vertex v = 0; v < p.num_vertices(); ++v) {
    const Community c = p.community_of(v);
    if (!assigned[c]) {
      remap[c] = next++;
      assigned[c] = true;
    }
    membership[v] = remap[c];
  }
  return CommunityPartition(std::move(membership), next);
}

namespace {

// Label propagation restricted to `members`; returns the vertices of one
// side of a bisection, or nothing when propagation finds a single group.
std::optional<std::vector<Vertex>> propagate_bisection(const AttributedGraph& g,
                                                       const CommunityPartition& p,
                                                       Community c, std::size_t sweeps,
                                                       Rng& rng) {
  auto members = p.members(c);
  const std::size_t size = members.size();
  std::vector<std::size_t> local(g.num_vertices(), size);
  for (std::size_t i = 0; i < size; ++i) local[members[i]] = i;

  std::vector<std::vector<std::size_t>> adj(size);
  for (std::size_t i = 0; i < size; ++i) {
    for (Vertex w : g.neighbors(members[i])) {
      if (local[w] < size) adj[i].push_back(local[w]);
    }
  }
  std::vector<std::size_t> label(size);
  std::iota(label.begin(), label.end(), 0);
  std::vector<std::size_t> order(label);
  std::vector<std::size_t> tally(size, 0);
  std::vector<std::size_t> best;
  for (std::size_t s = 0; s < sweeps; ++s) {
    for (std::size_t i = size; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    bool changed = false;
    for (std::size_t i : order) {
      if (adj[i].empty()) continue;
      std::size_t top = 0;
      best.clear();
      for (std::size_t w : adj[i]) {
        const std::size_t count = ++tally[label[w]];
        if (count > top) {
          top = count;
          best.assign(1, label[w]);
        } else if (count == top) {
          best.push_back(label[w]);
        }
      }
      for (std::size_t w : adj[i]) tally[label[w]] = 0;
      const bool keeps = std::find(best.begin(), best.end(), label[i]) != best.end();
      if (!keeps) {
        label[i] = best[rng.index(best.size())];
        changed = true;
      }
    }
    if (!changed) break;
  }

  // Groups of connected vertices, largest first; isolated vertices follow
  // the largest group.
  std::vector<std::size_t> group_size(size, 0);
  for (std::size_t i = 0; i < size; ++i) {
    if (!adj[i].empty()) ++group_size[label[i]];
  }
  std::vector<std::size_t> groups;
  for (std::size_t l = 0; l < size; ++l) {
    if (group_size[l] > 0) groups.push_back(l);
  }
  if (groups.size() < 2) return std::nullopt;
  std::stable_sort(groups.begin(), groups.end(),
                   [&](std::size_t a, std::size_t b) { return group_size[a] > group_size[b]; });
  std::vector<int> side_of_label(size, 0);
  std::size_t load[2] = {0, 0};
  for (std::size_t l : groups) {
    const int side = load[1] < load[0] ? 1 : 0;
    side_of_label[l] = side;
    load[side] += group_size[l];
  }
  std::vector<Vertex> moved;
  for (std::size_t i = 0; i < size; ++i) {
    if (!adj[i].empty() && side_of_label[label[i]] == 1) moved.push_back(members[i]);
  }
  return moved;
}

}  // namespace

PartitionSearchResult dp_partition_search(const AttributedGraph& g, double eps_c,
                                          const ObjectiveConfig& cfg, const SearchConfig& search,
                                          Rng& rng) {
  if (!(eps_c > 0.0)) throw std::invalid_argument("dp_partition: eps_c must be positive");
  cfg.validate();
  search.validate();
  if (g.num_edges() == 0) throw std::invalid_argument("dp_partition: graph has no edges");
  const std::size_t n = g.num_vertices();

  const AttributedGraph aux = cfg.w_a() > 0.0 ? build_auxiliary_graph(g) : AttributedGraph();
  PartitionSearchResult result;
  result.sensitivity = cfg.sensitivity_bound(n, g.num_edges());
  result.eps_per_selection = eps_c / static_cast<double>(search.rounds);

  std::vector<Community> current(n, 1);
  std::size_t communities = 2;
  for (std::size_t round = 0; round < search.rounds; ++round) {
    CommunityPartition now(current, communities);
    std::vector<std::vector<Community>> candidates{current};
    std::vector<Community> splittable;
    for (Community c = 1; c < communities; ++c) {
      if (now.size(c) >= 2) splittable.push_back(c);
    }
    for (std::size_t f = 0; f < search.fanout && !splittable.empty(); ++f) {
      const Community c = splittable[rng.index(splittable.size())];
      auto moved = propagate_bisection(g, now, c, search.propagation_sweeps, rng);
      if (!moved) continue;
      std::vector<Community> next = current;
      // The side holding the smallest member keeps label c so that equal
      // bisections compare equal.
      const Vertex anchor = now.members(c).front();
      const bool anchor_moves = std::binary_search(moved->begin(), moved->end(), anchor);
      for (Vertex v : now.members(c)) {
        const bool in_moved = std::binary_search(moved->begin(), moved->end(), v);
        if (in_moved != anchor_moves) next[v] = static_cast<Community>(communities);
      }
      if (std::find(candidates.begin(), candidates.end(), next) == candidates.end()) {
        candidates.push_back(std::move(next));
      }
    }

    std::vector<double> scores;
    scores.reserve(candidates.size());
    for (const auto& cand : candidates) {
      const bool grows = std::find(cand.begin(), cand.end(), communities) != cand.end();
      CommunityPartition part(cand, grows ? communities + 1 : communities);
      scores.push_back(cfg.w_a() > 0.0 ? combined_objective(g, aux, part, cfg)
                                       : cfg.w_s * modularity(g, part));
    }
    const std::size_t pick =
        exponential_select(scores, result.sensitivity, result.eps_per_selection, rng);
    ++result.selections;
    std::ostringstream line;
    line << "round " << round << ": " << candidates.size() << " candidates, picked " << pick
         << " (score " << scores[pick] << ")";
    result.log.push_back(line.str());
    if (pick != 0) {
      current = candidates[pick];
      ++communities;
    }
  }
  result.eps_consumed = result.eps_per_selection * static_cast<double>(result.selections);
  result.partition = compact(CommunityPartition(std::move(current), communities));
  return result;
}

CommunityPartition dp_partition(const AttributedGraph& g, double eps_c,
                                const ObjectiveConfig& cfg, const SearchConfig& search, Rng& rng) {
  return dp_partition_search(g, eps_c, cfg, search, rng).partition;
}

}  // namespace cagm

#include "cagm/dp_mech.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace cagm {

double laplace_noise(double value, double sensitivity, double eps, Rng& rng) {
  if (!(eps > 0.0)) throw std::invalid_argument("laplace_noise: eps must be positive");
  if (!(sensitivity > 0.0)) {
    throw std::invalid_argument("laplace_noise: sensitivity must be positive");
  }
  const double scale = sensitivity / eps;
  const double u = rng.uniform_open() - 0.5;
  const double magnitude = -std::log1p(-2.0 * std::fabs(u));
  const double y = u < 0 ? -magnitude : magnitude;
  return value + scale * y;
}

std::vector<double> exponential_weights(std::span<const double> scores, double delta_u,
                                        double eps) {
  if (scores.empty()) throw std::invalid_argument("exponential_select: no candidates");
  if (!(delta_u > 0.0)) throw std::invalid_argument("exponential_select: delta_u must be positive");
  if (!(eps >= 0.0)) throw std::invalid_argument("exponential_select: eps must be non-negative");
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> w(scores.size());
  if (std::isinf(eps)) {
    for (std::size_t i = 0; i < scores.size(); ++i) w[i] = scores[i] == top ? 1.0 : 0.0;
  } else {
    const double coeff = eps / (2.0 * delta_u);
    for (std::size_t i = 0; i < scores.size(); ++i) w[i] = std::exp(coeff * (scores[i] - top));
  }
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return w;
}

std::size_t exponential_select(std::span<const double> scores, double delta_u, double eps,
                               Rng& rng) {
  const auto w = exponential_weights(scores, delta_u, eps);
  double u = rng.uniform();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (u < w[i]) return i;
    u -= w[i];
  }
  // Rounding left a sliver of mass; return the last candidate with weight.
  for (std::size_t i = w.size(); i-- > 0;) {
    if (w[i] > 0) return i;
  }
  return w.size() - 1;
}

namespace {

// (cap, a) -> largest b. The closed form is non-decreasing in each of a, b
// and cap, so for a fixed (cap, a) only the largest b can attain the max.
using ProfileTable = std::map<std::pair<std::size_t, std::size_t>, std::size_t>;

void record(ProfileTable& table, std::size_t cap, std::size_t a, std::size_t b) {
  auto [it, inserted] = table.try_emplace({cap, a}, b);
  if (!inserted) it->second = std::max(it->second, b);
}

std::size_t sorted_intersection_size(const std::vector<Vertex>& x, const std::vector<Vertex>& y) {
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

// Records the profile of every pair inside `scope`, using neighbour lists
// already restricted to the scope.
void scan_scope(const AttributedGraph& g, std::span<const Vertex> scope,
                const std::vector<std::vector<Vertex>>& scoped_adj, std::size_t cap,
                ProfileTable& table) {
  bool isolated_pair_seen = false;
  for (std::size_t x = 0; x < scope.size(); ++x) {
    const Vertex i = scope[x];
    const auto& ni = scoped_adj[i];
    for (std::size_t y = x + 1; y < scope.size(); ++y) {
      const Vertex j = scope[y];
      const auto& nj = scoped_adj[j];
      if (ni.empty() && nj.empty()) {
        if (!isolated_pair_seen) record(table, cap, 0, 0);
        isolated_pair_seen = true;
        continue;
      }
      const std::size_t a = sorted_intersection_size(ni, nj);
      const std::size_t adjacent = g.has_edge(i, j) ? 1 : 0;
      const std::size_t b = ni.size() + nj.size() - 2 * adjacent - 2 * a;
      record(table, cap, a, b);
    }
  }
}

std::vector<TriangleLadder::PairProfile> flatten(const ProfileTable& table) {
  std::vector<TriangleLadder::PairProfile> out;
  out.reserve(table.size());
  for (const auto& [key, b] : table) out.push_back({key.second, b, key.first});
  return out;
}

}  // namespace

TriangleLadder TriangleLadder::intra(const AttributedGraph& g, const CommunityPartition& p) {
  if (p.num_vertices() != g.num_vertices()) {
    throw std::invalid_argument("partition does not match graph");
  }
  std::vector<std::vector<Vertex>> scoped(g.num_vertices());
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    for (Vertex w : g.neighbors(v)) {
      if (p.community_of(w) == p.community_of(v)) scoped[v].push_back(w);
    }
  }
  ProfileTable table;
  TriangleLadder ladder;
  for (Community c = 0; c < p.num_communities(); ++c) {
    if (p.size(c) < 2) continue;
    const std::size_t cap = p.size(c) - 2;
    ladder.ceiling_ = std::max(ladder.ceiling_, cap);
    scan_scope(g, p.members(c), scoped, cap, table);
  }
  ladder.profiles_ = flatten(table);
  return ladder;
}

TriangleLadder TriangleLadder::total(const AttributedGraph& g) {
  const std::size_t n = g.num_vertices();
  TriangleLadder ladder;
  if (n < 2) return ladder;
  std::vector<std::vector<Vertex>> adj(n);
  std::vector<Vertex> all(n);
  for (Vertex v = 0; v < n; ++v) {
    auto nb = g.neighbors(v);
    adj[v].assign(nb.begin(), nb.end());
    all[v] = v;
  }
  ProfileTable table;
  ladder.ceiling_ = n - 2;
  scan_scope(g, all, adj, n - 2, table);
  ladder.profiles_ = flatten(table);
  return ladder;
}

std::size_t TriangleLadder::at(std::size_t t) const {
  std::size_t best = 0;
  for (const auto& pr : profiles_) {
    const std::size_t value = pr.common + (t + std::min(t, pr.exclusive)) / 2;
    best = std::max(best, std::min(value, pr.cap));
  }
  return best;
}

std::size_t TriangleLadder::saturation_point() const {
  std::size_t t = 0;
  while (at(t) < ceiling_) ++t;
  return t;
}

std::size_t ls_intra_triangles_at_t(const AttributedGraph& g, const CommunityPartition& p,
                                    std::size_t t) {
  if (t < 1) throw std::invalid_argument("ls_intra_triangles_at_t: t must be >= 1");
  return TriangleLadder::intra(g, p).at(t);
}

std::size_t ls_total_triangles_at_t(const AttributedGraph& g, std::size_t t) {
  if (t < 1) throw std::invalid_argument("ls_total_triangles_at_t: t must be >= 1");
  return TriangleLadder::total(g).at(t);
}

LadderSpec LadderSpec::from(std::int64_t true_count, const TriangleLadder& ladder) {
  LadderSpec spec;
  spec.true_count = true_count;
  spec.ceiling = ladder.ceiling();
  const std::size_t last = ladder.saturation_point();
  spec.ladder.reserve(last + 1);
  for (std::size_t t = 0; t <= last; ++t) spec.ladder.push_back(ladder.at(t));
  return spec;
}

namespace {

void validate(const LadderSpec& spec) {
  for (std::size_t t = 0; t < spec.ladder.size(); ++t) {
    if (spec.ladder[t] > spec.ceiling) {
      throw std::invalid_argument("ladder value at t=" + std::to_string(t) +
                                  " exceeds its ceiling");
    }
    if (t > 0 && spec.ladder[t] < spec.ladder[t - 1]) {
      throw std::invalid_argument("ladder decreases at t=" + std::to_string(t));
    }
  }
}

std::size_t ladder_value(const LadderSpec& spec, std::size_t t) {
  return t < spec.ladder.size() ? spec.ladder[t] : spec.ceiling;
}

constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

}  // namespace

std::vector<Rung> ladder_rungs(const LadderSpec& spec, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("ladder_count: eps must be positive");
  validate(spec);
  std::vector<Rung> rungs;
  rungs.push_back({0, 0, 0, 0.0});
  if (spec.ceiling == 0 && std::all_of(spec.ladder.begin(), spec.ladder.end(),
                                       [](std::size_t v) { return v == 0; })) {
    return rungs;
  }
  const double half_eps = eps / 2.0;
  // Mass (relative to rung 0) of all rungs beyond index r once the ladder is
  // flat at the ceiling: 2c * sum_{j > r} e^{-eps j / 2}.
  auto log_tail_after = [&](std::size_t r) {
    return std::log(2.0 * static_cast<double>(spec.ceiling)) -
           half_eps * static_cast<double>(r + 1) - std::log(-std::expm1(-half_eps));
  };
  double log_total = 0.0;  // rung 0 contributes e^0
  std::uint64_t distance = 0;
  for (std::size_t r = 1;; ++r) {
    const std::size_t width = ladder_value(spec, r - 1);
    if (width > 0) {
      Rung rung{r, distance, distance + width,
                std::log(2.0 * static_cast<double>(width)) - half_eps * static_cast<double>(r)};
      log_total = std::max(log_total, rung.log_weight) +
                  std::log1p(std::exp(-std::fabs(log_total - rung.log_weight)));
      rungs.push_back(rung);
      distance += width;
    }
    if (r >= spec.ladder.size()) {
      const double tail = log_tail_after(r);
      if (tail - log_total < std::log(1e-12)) {
        rungs.push_back({r + 1, distance, kUnbounded, tail});
        break;
      }
    }
  }
  return rungs;
}

std::int64_t ladder_count(const LadderSpec& spec, double eps, Rng& rng) {
  const auto rungs = ladder_rungs(spec, eps);
  double top = rungs.front().log_weight;
  for (const auto& r : rungs) top = std::max(top, r.log_weight);
  std::vector<double> w(rungs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < rungs.size(); ++i) {
    w[i] = std::exp(rungs[i].log_weight - top);
    total += w[i];
  }
  double u = rng.uniform() * total;
  std::size_t pick = 0;
  for (; pick + 1 < rungs.size(); ++pick) {
    if (u < w[pick]) break;
    u -= w[pick];
  }
  const Rung& rung = rungs[pick];
  if (rung.index == 0) return std::max<std::int64_t>(0, spec.true_count);

  std::uint64_t lo = rung.lo;
  std::uint64_t hi = rung.hi;
  if (hi == kUnbounded) {
    // Lumped tail: every further rung has width 2c and weight ratio
    // e^{-eps/2}, so the rung offset is geometric.
    const double q = std::exp(-eps / 2.0);
    const auto skip = static_cast<std::uint64_t>(std::floor(std::log(rng.uniform_open()) / std::log(q)));
    lo = rung.lo + skip * spec.ceiling;
    hi = lo + spec.ceiling;
  }
  const std::uint64_t width = hi - lo;
  const std::uint64_t k = rng.index(2 * width);
  const auto offset = static_cast<std::int64_t>(lo + 1 + k % width);
  const std::int64_t value = k < width ? spec.true_count + offset : spec.true_count - offset;
  return std::max<std::int64_t>(0, value);
}

}  // namespace cagm

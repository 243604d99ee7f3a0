// Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "cagm/community.hpp"
#include "cagm/degree_sequence.hpp"
#include "cagm/dp_mech.hpp"
#include "cagm/eval.hpp"
#include "cagm/params.hpp"
#include "cagm/sampler.hpp"
#include "support/oracles.hpp"
#include "support/planted.hpp"

using namespace cagm;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Verdict {
  bool pass = false;
  std::string detail;
};

testing::Planted planted(std::size_t k, std::uint64_t seed, std::size_t n = 2000) {
  testing::PlantedConfig cfg;
  cfg.n = n;
  cfg.communities = k;
  cfg.seed = seed;
  return testing::planted_graph(cfg);
}

std::string fixed(double x, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

// 1. Exact fit then sample preserves the edge count, each sample under 60 s.
Verdict edge_preservation() {
  bool ok = true;
  double slowest = 0.0;
  std::ostringstream d;
  for (std::size_t k = 2; k <= 8; ++k) {
    const testing::Planted pl = planted(k, 100 + k);
    const CagmParams params = fit(pl.graph, pl.partition, 0.25);
    Rng rng(derive_seed(1, k));
    const auto start = std::chrono::steady_clock::now();
    const SampleResult r = sample_graph(params, rng);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    slowest = std::max(slowest, secs);
    const double rho_e = *relative_error(static_cast<double>(r.graph.num_edges()),
                                         static_cast<double>(pl.graph.num_edges()));
    if (rho_e != 0.0 || secs >= 60.0) {
      ok = false;
      d << " K=" << k << " rho_E=" << rho_e;
    }
  }
  d << " K=2..8 rho_E=0, slowest sample " << fixed(slowest, 2) << " s";
  return {ok, d.str()};
}

// 2. Final triangle count within 2% of the fitted target in >= 9 of 10 runs.
Verdict triangle_tolerance() {
  bool ok = true;
  std::ostringstream d;
  for (std::size_t k : {2u, 4u, 6u, 8u}) {
    const testing::Planted pl = planted(k, 200 + k);
    const CagmParams params = fit(pl.graph, pl.partition, 0.25);
    const double target =
        static_cast<double>(params.theta_m.tri_intra + params.theta_m.tri_inter);
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      Rng rng(derive_seed(seed, k));
      const SampleResult r = sample_graph(params, rng);
      const double t = static_cast<double>(triangle_count(r.graph));
      if (std::fabs(t - target) <= 0.02 * target) ++hits;
    }
    d << " K=" << k << ":" << hits << "/10";
    if (hits < 9) ok = false;
  }
  return {ok, d.str()};
}

// Mean Avg-F1 of Louvain on both graphs over five shared seeds.
double detectability(const AttributedGraph& a, const AttributedGraph& b, std::uint64_t seed) {
  double sum = 0.0;
  for (std::uint64_t run = 0; run < 5; ++run) {
    Rng ra(derive_seed(seed, run));
    Rng rb(derive_seed(seed, run));
    sum += avg_f1(louvain(a, ra), louvain(b, rb));
  }
  return sum / 5.0;
}

// 3. Community structure survives the community-preserving model better
// than a community-blind Chung-Lu null built from the same census.
Verdict community_preservation() {
  double model = 0.0;
  double null = 0.0;
  double min_ratio = kInf;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const testing::Planted pl = planted(4, 300 + seed);
    const StructuralCensus c = structural_census(pl.graph, pl.partition);
    std::size_t intra_edges = 0;
    std::size_t intra_pairs = 0;
    for (Community k = 0; k < pl.partition.num_communities(); ++k) {
      intra_edges += c.m_intra[k];
      intra_pairs += pl.partition.size(k) * (pl.partition.size(k) - (pl.partition.size(k) > 0)) / 2;
    }
    const std::size_t n = pl.graph.num_vertices();
    const double intra_density = static_cast<double>(intra_edges) / static_cast<double>(intra_pairs);
    const double inter_density =
        static_cast<double>(c.m_inter) / static_cast<double>(n * (n - 1) / 2 - intra_pairs);
    min_ratio = std::min(min_ratio, intra_density / inter_density);

    const ThetaM theta = estimate_theta_m(pl.graph, pl.partition);
    Rng rng(derive_seed(seed, 3));
    const SampleResult cpgm = sample_cpgm(theta, pl.partition, rng);

    ThetaM blind;
    blind.d_intra.resize(n);
    blind.d_inter.assign(n, 0);
    for (Vertex v = 0; v < n; ++v) blind.d_intra[v] = pl.graph.degree(v);
    const CommunityPartition one = CommunityPartition::single(n);
    const EdgeSet null_edges = gen_initial_edge_set(CandidateEdgeSampler(blind, one), one, rng);
    const AttributedGraph null_graph = null_edges.to_graph(AttributeMatrix(n, 0));

    model += detectability(pl.graph, cpgm.graph, seed);
    null += detectability(pl.graph, null_graph, seed);
  }
  model /= 10.0;
  null /= 10.0;
  const bool ok = min_ratio >= 5.0 && model - null >= 0.15;
  return {ok, "Avg-F1 model " + fixed(model) + " null " + fixed(null) + " gap " +
                  fixed(model - null) + " (density ratio >= " + fixed(min_ratio, 1) + ")"};
}

// 4. Ledger shares add up to eps exactly; eps = 12 splits as 6,2,1,1,1,1.
Verdict budget_composition() {
  const testing::Planted pl = planted(3, 400, 500);
  bool ok = true;
  std::ostringstream d;
  for (double eps : {1.0, 2.0, 5.0, 12.0}) {
    Rng rng(derive_seed(4, static_cast<std::uint64_t>(eps)));
    const DpFitResult r = dp_fit(pl.graph, eps, {}, rng);
    const bool exact = r.ledger.balanced() && r.ledger.spent() == eps;
    ok = ok && exact;
    d << " eps=" << eps << (exact ? ":exact" : ":off");
    if (eps == 12.0) {
      std::vector<double> shares;
      for (const auto& e : r.ledger.entries()) shares.push_back(e.eps);
      const bool split = shares.size() == 6 && shares[0] == 6.0 &&
                         std::count(shares.begin(), shares.end(), 2.0) == 1 &&
                         std::count(shares.begin(), shares.end(), 1.0) == 4;
      ok = ok && split;
      d << (split ? " (6,2,1,1,1,1)" : " wrong split");
    }
  }
  return {ok, d.str()};
}

// 5. Mechanism correctness.
Verdict mechanisms() {
  std::ostringstream d;
  Rng rng(5);
  const std::size_t draws = 1'000'000;
  double sum = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double y = laplace_noise(0.0, 2.0, 2.0, rng);
    sum += y;
    sq += y * y;
  }
  const double mean = sum / static_cast<double>(draws);
  const double var = sq / static_cast<double>(draws) - mean * mean;
  const bool lap_ok = std::fabs(var - 2.0) <= 0.05 * 2.0;
  d << "Laplace var " << fixed(var) << " (2.0)";

  const std::vector<std::vector<double>> score_sets{
      {0.0, 1.0, 2.0, 3.0}, {5.0, 5.0, 5.0, 4.0, 0.0}, {-1.0, 0.5, 0.25}};
  const std::vector<double> eps_for{1.0, 2.0, 4.0};
  bool chi_ok = true;
  double min_p = 1.0;
  for (std::size_t s = 0; s < score_sets.size(); ++s) {
    const auto& scores = score_sets[s];
    const auto w = exponential_weights(scores, 1.0, eps_for[s]);
    std::vector<double> counts(scores.size(), 0.0);
    const std::size_t n = 100000;
    for (std::size_t i = 0; i < n; ++i) counts[exponential_select(scores, 1.0, eps_for[s], rng)] += 1;
    double stat = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const double e = w[i] * static_cast<double>(n);
      stat += (counts[i] - e) * (counts[i] - e) / e;
    }
    const boost::math::chi_squared dist(static_cast<double>(scores.size() - 1));
    const double p = boost::math::cdf(boost::math::complement(dist, stat));
    min_p = std::min(min_p, p);
    if (!(p > 0.01)) chi_ok = false;
  }
  d << ", chi2 min p " << fixed(min_p, 3);

  bool ladder_ok = true;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const std::size_t n = 5 + seed % 10;
    const AttributedGraph g = testing::random_graph(n, 0.5, 0, seed);
    const CommunityPartition p = testing::random_partition(n, 2, seed);
    const StructuralCensus c = structural_census(g, p);
    const auto intra = LadderSpec::from(static_cast<std::int64_t>(c.tri_intra),
                                        TriangleLadder::intra(g, p));
    const auto total = LadderSpec::from(static_cast<std::int64_t>(c.tri_total),
                                        TriangleLadder::total(g));
    if (ladder_count(intra, kInf, rng) != static_cast<std::int64_t>(c.tri_intra) ||
        ladder_count(total, kInf, rng) != static_cast<std::int64_t>(c.tri_total)) {
      ladder_ok = false;
    }
  }
  d << ", ladder exact on 100 graphs: " << (ladder_ok ? "yes" : "no");
  return {lap_ok && chi_ok && ladder_ok, d.str()};
}

// 6. Local sensitivity at distance 1 equals the brute-force oracle, and no
// ladder value exceeds the global bound.
Verdict sensitivity_oracle() {
  std::size_t agree = 0;
  bool bounded = true;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const std::size_t n = 4 + seed % 9;  // 4..12
    const double density = 0.2 + 0.1 * static_cast<double>(seed % 5);
    const AttributedGraph g = testing::random_graph(n, density, 0, seed);
    const CommunityPartition p = testing::random_partition(n, 1 + seed % 3, seed * 31);
    if (ls_intra_triangles_at_t(g, p, 1) == testing::brute_ls_intra_at_1(g, p)) ++agree;
    std::size_t global = 0;
    for (Community c = 0; c < p.num_communities(); ++c) {
      if (p.size(c) >= 2) global = std::max(global, p.size(c) - 2);
    }
    const std::size_t horizon = 2 * p.largest_community_size() + 2;
    for (std::size_t t = 1; t <= horizon; ++t) {
      if (ls_intra_triangles_at_t(g, p, t) > global) bounded = false;
    }
    if (ls_intra_triangles_at_t(g, p, horizon) != global) bounded = false;
  }
  return {agree == 200 && bounded, std::to_string(agree) + "/200 match the oracle, ceiling " +
                                       (bounded ? "respected" : "violated")};
}

// 7. Every private degree sequence is graphical with an even sum.
Verdict degree_postprocessing() {
  const testing::Planted pl = planted(4, 700);
  std::size_t checked = 0;
  std::size_t passed = 0;
  for (double eps : {0.1, 1.0}) {
    for (std::uint64_t run = 0; run < 100; ++run) {
      Rng rng(derive_seed(run, static_cast<std::uint64_t>(eps * 10)));
      const DpDegreeSequences d = dp_degree_sequences(pl.graph, pl.partition, eps, rng);
      bool ok = is_graphical(d.inter) &&
                std::accumulate(d.inter.begin(), d.inter.end(), std::size_t{0}) % 2 == 0;
      for (const auto& s : d.intra_sorted) {
        ok = ok && is_graphical(s) && std::accumulate(s.begin(), s.end(), std::size_t{0}) % 2 == 0;
      }
      ++checked;
      if (ok) ++passed;
    }
  }
  return {passed == checked, std::to_string(passed) + "/" + std::to_string(checked) +
                                 " runs graphical with even sums"};
}

// 8. evaluate(G, G) is the identity and the Hellinger closed form holds.
Verdict metric_identities() {
  std::size_t ok_graphs = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = 20 + 5 * seed;
    const AttributedGraph g = testing::random_graph(n, 0.15, 6, seed);
    const CommunityPartition p = testing::random_partition(n, 3, seed);
    const FidelityReport r = evaluate(g, g, p);
    const bool zero = (!r.rho_E || *r.rho_E == 0.0) && (!r.rho_tri || *r.rho_tri == 0.0) &&
                      (!r.rho_c || *r.rho_c == 0.0) && r.H_d == 0.0 && r.H_lc == 0.0 &&
                      r.rho_a == 0.0 && r.avg_f1 && *r.avg_f1 == 1.0;
    if (zero) ++ok_graphs;
  }
  const std::vector<double> a{1.0, 0.0};
  const std::vector<double> b{0.5, 0.5};
  const double h = hellinger(a, b);
  const bool closed = std::fabs(h - 0.5412) <= 1e-3;
  return {ok_graphs == 20 && closed, std::to_string(ok_graphs) +
                                         "/20 self-evaluations exact, H((1,0),(.5,.5)) = " +
                                         fixed(h)};
}

// Largest deviation relative to max(|exact|, 1e-3).
double worst(const std::vector<double>& dp, const std::vector<double>& exact) {
  double w = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    w = std::max(w, std::fabs(dp[i] - exact[i]) / std::max(std::fabs(exact[i]), 1e-3));
  }
  return w;
}

// 9. With a huge budget the private fit matches the exact fit on the same
// partition. Truncation is a deliberate bias of the correlation estimate,
// so it is checked twice: with a cap at the maximum degree (truncation is
// the identity) against the exact fit, and with the default cap against the
// exact estimate on the truncated graph.
Verdict zero_noise() {
  const testing::Planted pl = planted(4, 900);
  std::size_t max_degree = 0;
  for (Vertex v = 0; v < pl.graph.num_vertices(); ++v) {
    max_degree = std::max(max_degree, pl.graph.degree(v));
  }
  DpFitConfig cfg;
  cfg.degree_cap = max_degree;
  Rng rng(9);
  const DpFitResult r = dp_fit(pl.graph, 1e6, cfg, rng);
  const CommunityPartition& p = r.params.partition;
  const CagmParams exact = fit(pl.graph, p, 0.25);

  double wx = 0.0;
  for (std::size_t c = 0; c < exact.theta_x.prob.size(); ++c) {
    wx = std::max(wx, worst(r.params.theta_x.prob[c], exact.theta_x.prob[c]));
  }
  auto worst_f = [](const ThetaF& a, const ThetaF& b) {
    double w = worst(a.inter, b.inter);
    for (std::size_t c = 0; c < b.intra.size(); ++c) w = std::max(w, worst(a.intra[c], b.intra[c]));
    return w;
  };
  const double wf = worst_f(r.params.theta_f, exact.theta_f);

  Rng rng_cap(90);
  const ThetaF capped = dp_estimate_theta_f(pl.graph, p, 0.25, 100, 1e6 / 6.0, rng_cap);
  const ThetaF truncated = estimate_theta_f(truncate_degrees(pl.graph, 100), p, 0.25);
  const double wt = worst_f(capped, truncated);

  // Intra sequences are released sorted per community, without vertex
  // identities, so they are compared as sorted sequences.
  auto sorted_intra = [&](const ThetaM& t, Community c) {
    std::vector<double> s;
    for (Vertex v : p.members(c)) s.push_back(static_cast<double>(t.d_intra[v]));
    std::sort(s.begin(), s.end());
    return s;
  };
  double wd = worst(std::vector<double>(r.params.theta_m.d_inter.begin(), r.params.theta_m.d_inter.end()),
                    std::vector<double>(exact.theta_m.d_inter.begin(), exact.theta_m.d_inter.end()));
  for (Community c = 0; c < p.num_communities(); ++c) {
    wd = std::max(wd, worst(sorted_intra(r.params.theta_m, c), sorted_intra(exact.theta_m, c)));
  }
  const bool ok = wx <= 0.01 && wf <= 0.01 && wt <= 0.01 && wd <= 0.01;
  return {ok, "max rel. deviation X " + fixed(wx, 6) + " F " + fixed(wf, 6) + " (cap " +
                  std::to_string(max_degree) + "), F " + fixed(wt, 6) +
                  " (cap 100 vs truncated), degrees " + fixed(wd, 6)};
}

// 10. Accepted edges of the proposal step follow Q'_M * Gamma.
Verdict target_distribution() {
  const CommunityPartition p({1, 1, 1, 2, 2, 2}, 3);
  ThetaM m;
  m.d_intra = {2, 1, 1, 2, 1, 1};
  m.d_inter = {1, 2, 1, 1, 0, 1};
  const AttributeMatrix x = AttributeMatrix::from_rows(
      {{1, 1, 0, 0}, {1, 0, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}, {1, 1, 1, 1}, {0, 0, 0, 1}});
  ThetaF f;
  f.delta = 0.25;
  f.intra = {std::vector<double>(5, 0.2), {0.1, 0.1, 0.5, 0.1, 0.2}, {0.05, 0.05, 0.3, 0.3, 0.3}};
  f.inter = {0.4, 0.1, 0.3, 0.1, 0.1};
  BucketDistributions emp;
  emp.intra = {std::vector<double>(5, 0.2), {0.3, 0.1, 0.2, 0.2, 0.2}, std::vector<double>(5, 0.2)};
  emp.inter = {0.5, 0.2, 0.1, 0.1, 0.1};
  const CandidateEdgeSampler sampler(m, p);
  const AcceptanceTables tables = build_acceptance_tables(f, emp);

  std::map<Edge, double> target;
  double z = 0.0;
  for (Vertex a = 0; a < 6; ++a) {
    for (Vertex b = a + 1; b < 6; ++b) {
      const double w = sampler.pair_probability(a, b) * tables.probability(p, x, a, b);
      if (w > 0.0) target[{a, b}] = w;
      z += w;
    }
  }
  Rng rng(10);
  std::map<Edge, double> seen;
  double accepted = 0.0;
  for (int i = 0; i < 100000; ++i) {
    if (auto e = propose_edge(sampler, tables, x, p, rng)) {
      seen[*e] += 1.0;
      accepted += 1.0;
    }
  }
  double tv = 0.0;
  for (const auto& [e, w] : target) tv += std::fabs(w / z - seen[e] / accepted);
  for (const auto& [e, c] : seen) {
    if (!target.count(e)) tv += c / accepted;
  }
  tv *= 0.5;
  return {tv < 0.02, "TV " + fixed(tv) + " over " + std::to_string(static_cast<long>(accepted)) +
                         " accepted of 100000 draws, " + std::to_string(target.size()) + " pairs"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"exact-fit edge preservation", edge_preservation},
      {"triangle tolerance", triangle_tolerance},
      {"community preservation", community_preservation},
      {"budget composition", budget_composition},
      {"mechanism correctness", mechanisms},
      {"sensitivity oracle", sensitivity_oracle},
      {"degree post-processing", degree_postprocessing},
      {"metric identities", metric_identities},
      {"zero-noise consistency", zero_noise},
      {"sampler target distribution", target_distribution},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << i + 1 << ". "
              << criteria[i].first << ": " << v.detail << " [" << fixed(secs, 1) << " s]"
              << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}

#pragma once

// Differential-privacy mechanisms: Laplace noise, exponential selection and
// the ladder mechanism for triangle counts driven by local sensitivity at
// distance t.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cagm/graph.hpp"
#include "cagm/rng.hpp"

namespace cagm {

/// value + Y with Y ~ Lap(sensitivity / eps), sampled by inverse CDF.
/// Throws std::invalid_argument unless eps > 0 and sensitivity > 0.
double laplace_noise(double value, double sensitivity, double eps, Rng& rng);

/// Index i drawn with probability proportional to
/// exp(eps * scores[i] / (2 * delta_u)). eps = 0 gives a uniform draw.
/// Throws std::invalid_argument on an empty list, negative eps or
/// non-positive delta_u.
std::size_t exponential_select(std::span<const double> scores, double delta_u, double eps,
                               Rng& rng);

/// Selection probabilities used by exponential_select.
std::vector<double> exponential_weights(std::span<const double> scores, double delta_u,
                                        double eps);

template <typename T>
const T& exponential_select(std::span<const T> candidates, std::span<const double> scores,
                            double delta_u, double eps, Rng& rng) {
  if (candidates.size() != scores.size()) {
    throw std::invalid_argument("exponential_select: candidates and scores differ in length");
  }
  return candidates[exponential_select(scores, delta_u, eps, rng)];
}

/// Local sensitivity at distance t of a triangle count, in the closed form
///   max over pairs (i, j) of min{a_ij + floor((t + min{t, b_ij}) / 2), cap_ij}
/// where a_ij counts common neighbours of i and j inside the scope and b_ij
/// counts scope vertices other than i, j adjacent to exactly one of them.
/// For the intra-community count the scope of a pair is its community and
/// cap_ij = |C| - 2; for the whole-graph count the scope is V and the cap is
/// n - 2. Distinct (a, b, cap) triples are kept so the ladder can be
/// evaluated for many t without rescanning the graph.
class TriangleLadder {
 public:
  struct PairProfile {
    std::size_t common = 0;     // a_ij
    std::size_t exclusive = 0;  // b_ij
    std::size_t cap = 0;        // |C| - 2

    friend auto operator<=>(const PairProfile&, const PairProfile&) = default;
  };

  static TriangleLadder intra(const AttributedGraph& g, const CommunityPartition& p);
  static TriangleLadder total(const AttributedGraph& g);

  /// LS(G, t). t = 0 gives the local sensitivity itself.
  std::size_t at(std::size_t t) const;

  /// Global sensitivity the ladder saturates at.
  std::size_t ceiling() const { return ceiling_; }

  /// Smallest t with at(t) == ceiling().
  std::size_t saturation_point() const;

  std::span<const PairProfile> profiles() const { return profiles_; }

 private:
  std::vector<PairProfile> profiles_;
  std::size_t ceiling_ = 0;
};

/// LS of the intra-community triangle count at distance t >= 1.
/// Returns 0 when no community has two or more vertices.
/// Throws std::invalid_argument for t < 1.
std::size_t ls_intra_triangles_at_t(const AttributedGraph& g, const CommunityPartition& p,
                                    std::size_t t);

/// LS of the total triangle count at distance t >= 1, ceiling n - 2.
std::size_t ls_total_triangles_at_t(const AttributedGraph& g, std::size_t t);

/// Input of the ladder mechanism: the true answer and the ladder values
/// ladder[t] = LS(G, t) for t = 0, 1, ..., after which the ladder stays at
/// `ceiling`.
struct LadderSpec {
  std::int64_t true_count = 0;
  std::vector<std::size_t> ladder;
  std::size_t ceiling = 0;

  static LadderSpec from(std::int64_t true_count, const TriangleLadder& ladder);
};

/// One rung of the ladder: all integers at distance in (lo, hi] from the
/// true count, on both sides. Rung 0 is the singleton {true_count}.
struct Rung {
  std::size_t index = 0;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  /// log of (number of values in the rung) - eps * index / 2.
  double log_weight = 0.0;
};

/// Rungs enumerated until the geometric tail carries less than 1e-12 of the
/// mass; the remaining tail is lumped into one final rung.
std::vector<Rung> ladder_rungs(const LadderSpec& spec, double eps);

/// Exponential mechanism over rungs, utility -(rung index), sensitivity 1,
/// each value in a rung equally likely. Output clamped to >= 0.
/// Throws std::invalid_argument if eps <= 0 or the ladder is invalid
/// (decreasing or above its ceiling).
std::int64_t ladder_count(const LadderSpec& spec, double eps, Rng& rng);

}  // namespace cagm

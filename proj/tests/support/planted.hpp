#pragma once

// Planted-partition attributed graphs with heavy-tailed degrees and triadic
// closure, used as ground truth in tests.

#include <cstddef>
#include <cstdint>

#include "cagm/graph.hpp"

namespace cagm::testing {

struct PlantedConfig {
  std::size_t n = 2000;
  std::size_t communities = 4;
  double intra_degree = 10.0;  // mean, before closure
  double inter_degree = 1.5;   // mean
  double closure = 0.4;        // closing edges per intra edge
  std::size_t attributes = 12;
  std::uint64_t seed = 1;
};

struct Planted {
  AttributedGraph graph;
  CommunityPartition partition;
};

Planted planted_graph(const PlantedConfig& cfg);

/// G(n, p) with k uniform random attributes.
AttributedGraph random_graph(std::size_t n, double p, std::size_t k, std::uint64_t seed);

/// Uniform random assignment to communities 1..groups (C0 empty).
CommunityPartition random_partition(std::size_t n, std::size_t groups, std::uint64_t seed);

}  // namespace cagm::testing

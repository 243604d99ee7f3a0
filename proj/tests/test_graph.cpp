#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "cagm/graph.hpp"
#include "cagm/graph_io.hpp"
#include "support/oracles.hpp"
#include "support/planted.hpp"

using namespace cagm;

namespace {

AttributedGraph k3() { return AttributedGraph(3, {{0, 1}, {1, 2}, {0, 2}}); }

}  // namespace

TEST_CASE("minimal graph from text") {
  std::istringstream edges("0 1\n");
  std::istringstream attrs("1\n0\n");
  const AttributedGraph g = read_attributed_graph(edges, attrs);
  CHECK(g.num_vertices() == 2);
  CHECK(g.num_edges() == 1);
  CHECK(g.num_attributes() == 1);
}

TEST_CASE("duplicate edges merge") {
  std::istringstream edges("0 1\n0 1\n1,0\n");
  std::istringstream attrs("1\n0\n");
  CHECK(read_attributed_graph(edges, attrs).num_edges() == 1);
}

TEST_CASE("malformed input is rejected") {
  SUBCASE("self-loop") {
    std::istringstream edges("2 2\n");
    std::istringstream attrs("1\n0\n1\n");
    CHECK_THROWS_AS(read_attributed_graph(edges, attrs), InputError);
  }
  SUBCASE("vertex out of range") {
    std::istringstream edges("0 3\n");
    std::istringstream attrs("1\n0\n1\n");
    CHECK_THROWS_AS(read_attributed_graph(edges, attrs), InputError);
  }
  SUBCASE("non-binary attribute") {
    std::istringstream edges("0 1\n");
    std::istringstream attrs("1 2\n0 0\n");
    CHECK_THROWS_AS(read_attributed_graph(edges, attrs), InputError);
  }
  SUBCASE("ragged rows") {
    std::istringstream edges("0 1\n");
    std::istringstream attrs("1 0\n0\n");
    CHECK_THROWS_AS(read_attributed_graph(edges, attrs), InputError);
  }
  SUBCASE("missing file names the path") {
    try {
      load_attributed_graph("/nonexistent/g.edges", "/nonexistent/g.attrs");
      FAIL("expected an exception");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("/nonexistent/g.") != std::string::npos);
    }
  }
}

TEST_CASE("graph text round trip") {
  const AttributedGraph g = testing::random_graph(30, 0.2, 5, 7);
  std::ostringstream e;
  std::ostringstream a;
  write_edge_list(e, g);
  write_attributes(a, g.attributes());
  std::istringstream ei(e.str());
  std::istringstream ai(a.str());
  const AttributedGraph h = read_attributed_graph(ei, ai);
  CHECK(std::vector<Edge>(h.edges().begin(), h.edges().end()) ==
        std::vector<Edge>(g.edges().begin(), g.edges().end()));
  CHECK(h.attributes() == g.attributes());
}

TEST_CASE("partition text round trip and C0 default") {
  const CommunityPartition p = CommunityPartition::from_groups(5, {{0, 1}, {3}});
  CHECK(p.community_of(2) == 0);
  CHECK(p.community_of(4) == 0);
  std::ostringstream out;
  write_partition(out, p);
  std::istringstream in(out.str());
  CHECK(read_partition(in, 5) == p);

  std::istringstream partial("0 1\n1 1\n");
  const CommunityPartition q = read_partition(partial, 3);
  CHECK(q.community_of(2) == 0);
  CHECK(q.size(1) == 2);
}

TEST_CASE("overlapping groups are rejected") {
  CHECK_THROWS_AS(CommunityPartition::from_groups(3, {{0, 1}, {1, 2}}), InputError);
}

TEST_CASE("census of K3") {
  const AttributedGraph g = k3();
  SUBCASE("one community") {
    const StructuralCensus c = structural_census(g, CommunityPartition::single(3));
    CHECK(c.tri_intra == 1);
    CHECK(c.tri_inter == 0);
    CHECK(c.d_intra == std::vector<std::size_t>{2, 2, 2});
    CHECK(c.d_inter == std::vector<std::size_t>{0, 0, 0});
  }
  SUBCASE("split 1,1,2") {
    const CommunityPartition p({1, 1, 2}, 3);
    const StructuralCensus c = structural_census(g, p);
    CHECK(c.tri_intra == 0);
    CHECK(c.tri_inter == 1);
    CHECK(c.m_inter == 2);
    CHECK(c.m_intra[1] == 1);
    CHECK(c.m_intra[2] == 0);
  }
}

TEST_CASE("census matches brute force on random graphs") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const AttributedGraph g = testing::random_graph(25, 0.3, 0, seed);
    const CommunityPartition p = testing::random_partition(25, 3, seed + 100);
    const StructuralCensus c = structural_census(g, p);
    const testing::TriangleSplit t = testing::brute_triangles(g, p);
    CHECK(c.tri_intra == t.intra);
    CHECK(c.tri_inter == t.inter);
    CHECK(c.tri_total == t.intra + t.inter);
    CHECK(triangle_count(g) == t.intra + t.inter);
    std::size_t m = c.m_inter;
    for (std::size_t x : c.m_intra) m += x;
    CHECK(m == g.num_edges());
  }
}

TEST_CASE("wedge counts") {
  CHECK(wedge_count(AttributedGraph(3, {{0, 1}, {1, 2}})) == 1);
  CHECK(wedge_count(k3()) == 3);
  CHECK(wedge_count(AttributedGraph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}})) == 6);
}

TEST_CASE("common neighbours") {
  const AttributedGraph g(4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}});
  CHECK(common_neighbors(g, 1, 2) == 2);
  CHECK(common_neighbors(g, 0, 3) == 2);
  CHECK(common_neighbors(g, 0, 1) == 1);
}

TEST_CASE("cosine similarity and buckets") {
  const std::vector<std::uint8_t> a{1, 0, 1};
  const std::vector<std::uint8_t> b{1, 1, 0};
  const std::vector<std::uint8_t> c{1, 0};
  const std::vector<std::uint8_t> d{0, 1};
  const std::vector<std::uint8_t> z{0, 0, 0};
  CHECK(cosine_similarity(a, a) == doctest::Approx(1.0));
  CHECK(cosine_similarity(c, d) == 0.0);
  CHECK(cosine_similarity(b, a) == doctest::Approx(0.5));
  CHECK(cosine_similarity(a, z) == 0.0);
  CHECK_THROWS_AS(cosine_similarity(a, c), std::invalid_argument);

  CHECK(aggregate_feature(a, a, 0.25) == 4);
  CHECK(aggregate_feature(c, d, 0.25) == 0);
  CHECK(aggregate_feature(b, a, 0.25) == 2);
  CHECK(bucket_of(0.5, 0.25) == 2);
  CHECK(max_bucket(0.25) == 4);
  CHECK_THROWS_AS(max_bucket(0.0), std::invalid_argument);
  CHECK_THROWS_AS(max_bucket(1.5), std::invalid_argument);
}

TEST_CASE("set partition enumeration counts Bell numbers") {
  CHECK(testing::set_partitions(1).size() == 1);
  CHECK(testing::set_partitions(4).size() == 15);
  CHECK(testing::set_partitions(6).size() == 203);
}

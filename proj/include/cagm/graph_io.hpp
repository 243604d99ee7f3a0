#pragma once

// Plain-text formats. Edge list: one "u v" pair per line. Attribute matrix:
// one row of k bits per vertex. Partition: one "v community" pair per line.
// Tokens may be separated by whitespace or commas; '#' starts a comment.

#include <filesystem>
#include <iosfwd>

#include "cagm/graph.hpp"

namespace cagm {

/// Vertex ids in the edge file are the 0-based row indices of the
/// attribute file, so n is the attribute row count.
AttributedGraph load_attributed_graph(const std::filesystem::path& edge_path,
                                      const std::filesystem::path& attr_path);

AttributedGraph read_attributed_graph(std::istream& edges, std::istream& attributes);

/// Vertices not listed are placed in C0.
CommunityPartition load_partition(const std::filesystem::path& path, std::size_t n);
CommunityPartition read_partition(std::istream& in, std::size_t n);

void write_edge_list(std::ostream& out, const AttributedGraph& g);
void write_attributes(std::ostream& out, const AttributeMatrix& x);
void write_partition(std::ostream& out, const CommunityPartition& p);

void save_attributed_graph(const AttributedGraph& g, const std::filesystem::path& edge_path,
                           const std::filesystem::path& attr_path);
void save_partition(const CommunityPartition& p, const std::filesystem::path& path);

}  // namespace cagm

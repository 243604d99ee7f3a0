#include "cagm/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>

namespace cagm {

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == ',' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

long long parse_int(std::string_view token, std::size_t line_no, const char* what) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw InputError(std::string(what) + " line " + std::to_string(line_no) +
                     ": cannot parse '" + std::string(token) + "' as an integer");
  }
  return value;
}

std::ifstream open_input(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw InputError(std::string("cannot open ") + what + " '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

AttributedGraph read_attributed_graph(std::istream& edges, std::istream& attributes) {
  std::vector<std::vector<int>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(attributes, line)) {
    ++line_no;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    std::vector<int> row;
    row.reserve(tokens.size());
    for (auto t : tokens) {
      const long long b = parse_int(t, line_no, "attribute file");
      if (b != 0 && b != 1) {
        throw InputError("attribute file line " + std::to_string(line_no) + ": value " +
                         std::string(t) + " is not binary");
      }
      row.push_back(static_cast<int>(b));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError("attribute file line " + std::to_string(line_no) + ": ragged row with " +
                       std::to_string(row.size()) + " entries, expected " +
                       std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  const std::size_t n = rows.size();

  std::vector<Edge> list;
  line_no = 0;
  while (std::getline(edges, line)) {
    ++line_no;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) {
      throw InputError("edge file line " + std::to_string(line_no) + ": expected 'u v'");
    }
    const long long u = parse_int(tokens[0], line_no, "edge file");
    const long long v = parse_int(tokens[1], line_no, "edge file");
    if (u < 0 || v < 0 || u >= static_cast<long long>(n) || v >= static_cast<long long>(n)) {
      throw InputError("edge file line " + std::to_string(line_no) + ": vertex id out of range [0, " +
                       std::to_string(n) + ")");
    }
    if (u == v) {
      throw InputError("edge file line " + std::to_string(line_no) + ": self-loop on vertex " +
                       std::to_string(u));
    }
    list.push_back(make_edge(static_cast<Vertex>(u), static_cast<Vertex>(v)));
  }
  return AttributedGraph(n, std::move(list), AttributeMatrix::from_rows(rows));
}

AttributedGraph load_attributed_graph(const std::filesystem::path& edge_path,
                                      const std::filesystem::path& attr_path) {
  auto attrs = open_input(attr_path, "attribute file");
  auto edges = open_input(edge_path, "edge file");
  return read_attributed_graph(edges, attrs);
}

CommunityPartition read_partition(std::istream& in, std::size_t n) {
  std::vector<Community> membership(n, 0);
  std::vector<bool> seen(n, false);
  std::size_t num_communities = 1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) {
      throw InputError("partition file line " + std::to_string(line_no) +
                       ": expected 'v community'");
    }
    const long long v = parse_int(tokens[0], line_no, "partition file");
    const long long c = parse_int(tokens[1], line_no, "partition file");
    if (v < 0 || v >= static_cast<long long>(n)) {
      throw InputError("partition file line " + std::to_string(line_no) +
                       ": vertex id out of range");
    }
    if (c < 0 || c > 0xFFFFFFF) {
      throw InputError("partition file line " + std::to_string(line_no) +
                       ": invalid community index");
    }
    if (seen[v] && membership[v] != static_cast<Community>(c)) {
      throw InputError("partition file line " + std::to_string(line_no) + ": vertex " +
                       std::to_string(v) + " listed in two communities");
    }
    seen[v] = true;
    membership[v] = static_cast<Community>(c);
    num_communities = std::max<std::size_t>(num_communities, static_cast<std::size_t>(c) + 1);
  }
  return CommunityPartition(std::move(membership), num_communities);
}

CommunityPartition load_partition(const std::filesystem::path& path, std::size_t n) {
  auto in = open_input(path, "partition file");
  return read_partition(in, n);
}

void write_edge_list(std::ostream& out, const AttributedGraph& g) {
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_attributes(std::ostream& out, const AttributeMatrix& x) {
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t l = 0; l < x.cols(); ++l) {
      if (l) out << ' ';
      out << static_cast<int>(x.at(i, l));
    }
    out << '\n';
  }
}

void write_partition(std::ostream& out, const CommunityPartition& p) {
  for (Vertex v = 0; v < p.num_vertices(); ++v) out << v << ' ' << p.community_of(v) << '\n';
}

void save_attributed_graph(const AttributedGraph& g, const std::filesystem::path& edge_path,
                           const std::filesystem::path& attr_path) {
  auto e = open_output(edge_path);
  write_edge_list(e, g);
  auto a = open_output(attr_path);
  write_attributes(a, g.attributes());
}

void save_partition(const CommunityPartition& p, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_partition(out, p);
}

}  // namespace cagm

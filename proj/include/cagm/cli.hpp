#pragma once

// Command-line front end: fit, dp-fit, sample, evaluate and pipeline.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cagm::cli {

struct RunConfig {
  std::filesystem::path edges;
  std::filesystem::path attrs;
  /// Path of a partition file, or "detect" for Louvain on the input.
  std::string partition = "detect";
  std::optional<double> eps;
  double delta = 0.25;
  std::size_t cap = 100;
  double w_s = 0.98;
  std::size_t rounds = 8;
  std::size_t fanout = 4;
  std::size_t samples = 1;
  std::uint64_t seed = 1;
  std::filesystem::path out = "out";
  std::filesystem::path params;
  /// Prefixes p of synthetic graphs stored as p.edges and p.attrs.
  std::vector<std::string> synthetic;

  /// Throws InputError on out-of-range values.
  void validate() const;
};

/// Writes params.txt and census.txt to cfg.out.
void cmd_fit(const RunConfig& cfg, std::ostream& log);
/// Writes params.txt, budget_ledger.txt and manifest.txt to cfg.out.
void cmd_dp_fit(const RunConfig& cfg, std::ostream& log);
/// Writes sample_<i>.{edges,attrs,manifest} to cfg.out and returns the
/// prefixes.
std::vector<std::string> cmd_sample(const RunConfig& cfg, std::ostream& log);
/// Writes report.tsv and the CCDF tables to cfg.out.
void cmd_evaluate(const RunConfig& cfg, std::ostream& log);
/// fit (or dp-fit when eps is set), sample and evaluate.
void cmd_pipeline(const RunConfig& cfg, std::ostream& log);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

/// Parses arguments and runs the subcommand. Returns 0 on success, 1 on a
/// runtime failure and 2 on invalid input.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cagm::cli

#include "cagm/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cagm/eval.hpp"
#include "cagm/graph_io.hpp"
#include "cagm/params.hpp"
#include "cagm/params_io.hpp"
#include "cagm/sampler.hpp"

namespace cagm::cli {

namespace fs = std::filesystem;

void RunConfig::validate() const {
  if (eps && !(*eps > 0.0 && std::isfinite(*eps))) {
    throw InputError("--eps must be positive and finite");
  }
  if (!(delta > 0.0 && delta <= 1.0)) throw InputError("--delta must be in (0, 1]");
  if (cap < 1) throw InputError("--cap must be at least 1");
  if (!(w_s >= 0.0 && w_s <= 1.0)) throw InputError("--ws must be in [0, 1]");
  if (rounds < 1) throw InputError("--rounds must be at least 1");
  if (fanout < 1) throw InputError("--fanout must be at least 1");
  if (samples < 1) throw InputError("--samples must be at least 1");
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

void require(const fs::path& p, const char* flag) {
  if (p.empty()) throw InputError(std::string(flag) + " is required");
}

AttributedGraph load_input(const RunConfig& cfg) {
  require(cfg.edges, "--edges");
  require(cfg.attrs, "--attrs");
  return load_attributed_graph(cfg.edges, cfg.attrs);
}

CommunityPartition input_partition(const RunConfig& cfg, const AttributedGraph& g,
                                   std::ostream& log) {
  if (cfg.partition != "detect") return load_partition(cfg.partition, g.num_vertices());
  if (g.num_edges() == 0) return CommunityPartition::single(g.num_vertices());
  Rng rng(derive_seed(cfg.seed, 0x10));
  CommunityPartition p = louvain(g, rng);
  log << "detected " << p.num_communities() - 1 << " communities\n";
  return p;
}

void prepare_out(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory '" + dir.string() + "'");
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_census(std::ostream& out, const AttributedGraph& g, const CommunityPartition& p) {
  const StructuralCensus c = structural_census(g, p);
  out << "vertices " << g.num_vertices() << '\n'
      << "edges " << g.num_edges() << '\n'
      << "attributes " << g.num_attributes() << '\n'
      << "communities " << p.num_communities() << '\n'
      << "m_intra";
  for (std::size_t m : c.m_intra) out << ' ' << m;
  out << '\n'
      << "m_inter " << c.m_inter << '\n'
      << "tri_intra " << c.tri_intra << '\n'
      << "tri_inter " << c.tri_inter << '\n'
      << "tri_total " << c.tri_total << '\n'
      << "wedges " << c.wedges << '\n';
}

std::string hex(std::uint64_t x) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << x;
  return s.str();
}

}  // namespace

void cmd_fit(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const AttributedGraph g = load_input(cfg);
  const CommunityPartition p = input_partition(cfg, g, log);
  const CagmParams params = fit(g, p, cfg.delta);
  prepare_out(cfg.out);
  save_params(params, cfg.out / "params.txt");
  auto census = open_out(cfg.out / "census.txt");
  write_census(census, g, p);
  log << "wrote " << (cfg.out / "params.txt").string() << '\n';
}

void cmd_dp_fit(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (!cfg.eps) throw InputError("--eps is required for dp-fit");
  const AttributedGraph g = load_input(cfg);
  DpFitConfig fit_cfg;
  fit_cfg.delta = cfg.delta;
  fit_cfg.degree_cap = cfg.cap;
  fit_cfg.objective.w_s = cfg.w_s;
  fit_cfg.search.rounds = cfg.rounds;
  fit_cfg.search.fanout = cfg.fanout;
  Rng rng(derive_seed(cfg.seed, 0x20));
  const DpFitResult result = dp_fit(g, *cfg.eps, fit_cfg, rng);
  prepare_out(cfg.out);
  save_params(result.params, cfg.out / "params.txt");
  auto ledger = open_out(cfg.out / "budget_ledger.txt");
  write_ledger(ledger, result.ledger);
  auto manifest = open_out(cfg.out / "manifest.txt");
  manifest << std::setprecision(17) << "command dp-fit\n"
           << "seed " << cfg.seed << '\n'
           << "eps " << *cfg.eps << '\n'
           << "delta " << cfg.delta << '\n'
           << "cap " << cfg.cap << '\n'
           << "w_s " << cfg.w_s << '\n'
           << "rounds " << cfg.rounds << '\n'
           << "fanout " << cfg.fanout << '\n'
           << "communities " << result.params.partition.num_communities() - 1 << '\n';
  log << "wrote " << (cfg.out / "params.txt").string() << " (eps " << *cfg.eps << ")\n";
}

std::vector<std::string> cmd_sample(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  require(cfg.params, "--params");
  const std::string bytes = read_file(cfg.params);
  std::istringstream in(bytes);
  const CagmParams params = read_params(in);
  const std::uint64_t params_hash = fnv1a(bytes);
  prepare_out(cfg.out);
  std::vector<std::string> prefixes;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const std::uint64_t seed = derive_seed(cfg.seed, 0x100 + i);
    Rng rng(seed);
    const SampleResult result = sample_graph(params, rng);
    const fs::path prefix = cfg.out / ("sample_" + std::to_string(i));
    save_attributed_graph(result.graph, prefix.string() + ".edges", prefix.string() + ".attrs");
    auto manifest = open_out(prefix.string() + ".manifest");
    manifest << "master_seed " << cfg.seed << '\n'
             << "stream " << i << '\n'
             << "seed " << seed << '\n'
             << "params_fnv1a " << hex(params_hash) << '\n'
             << describe(result.diagnostics);
    prefixes.push_back(prefix.string());
    log << "wrote " << prefix.string() << ".edges (" << result.graph.num_edges() << " edges)\n";
  }
  return prefixes;
}

namespace {

std::string cell(const std::optional<double>& x) {
  if (!x) return "NA";
  std::ostringstream s;
  s << std::setprecision(6) << *x;
  return s.str();
}

void write_ccdf(const fs::path& path, const Ccdf& original, const Ccdf& synthetic) {
  auto out = open_out(path);
  out << "value\toriginal\tsynthetic\n" << std::setprecision(10);
  for (std::size_t i = 0; i < original.size(); ++i) {
    out << original[i].first << '\t' << original[i].second << '\t' << synthetic[i].second << '\n';
  }
}

}  // namespace

void cmd_evaluate(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (cfg.synthetic.empty()) throw InputError("--synthetic is required for evaluate");
  const AttributedGraph g = load_input(cfg);
  const CommunityPartition p = input_partition(cfg, g, log);
  prepare_out(cfg.out);

  std::vector<FidelityReport> reports;
  for (std::size_t i = 0; i < cfg.synthetic.size(); ++i) {
    const std::string& prefix = cfg.synthetic[i];
    const AttributedGraph s = load_attributed_graph(prefix + ".edges", prefix + ".attrs");
    if (s.num_vertices() != g.num_vertices() || s.num_attributes() != g.num_attributes()) {
      throw InputError("synthetic graph '" + prefix + "' does not match the original's shape");
    }
    EvaluateOptions options;
    options.seed = derive_seed(cfg.seed, 0x30);
    reports.push_back(evaluate(g, s, p, options));
    const CcdfTables t = ccdf_tables(g, s);
    write_ccdf(cfg.out / ("ccdf_degree_" + std::to_string(i) + ".tsv"), t.degree_original,
               t.degree_synthetic);
    write_ccdf(cfg.out / ("ccdf_lcc_" + std::to_string(i) + ".tsv"), t.lcc_original,
               t.lcc_synthetic);
  }

  auto columns = [](const FidelityReport& r) {
    return std::vector<std::optional<double>>{r.rho_E, r.rho_tri, r.rho_c, r.H_d,
                                              r.H_lc,  r.rho_a,   r.avg_f1};
  };
  auto table = open_out(cfg.out / "report.tsv");
  table << "graph\trho_E\trho_tri\trho_c\tH_d\tH_lc\trho_a\tavg_f1\n";
  std::vector<double> sums(7, 0.0);
  std::vector<std::size_t> counts(7, 0);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    table << cfg.synthetic[i];
    const auto row = columns(reports[i]);
    for (std::size_t c = 0; c < row.size(); ++c) {
      table << '\t' << cell(row[c]);
      if (row[c]) {
        sums[c] += *row[c];
        ++counts[c];
      }
    }
    table << '\n';
  }
  table << "mean";
  for (std::size_t c = 0; c < sums.size(); ++c) {
    table << '\t'
          << cell(counts[c] ? std::optional<double>(sums[c] / static_cast<double>(counts[c]))
                            : std::nullopt);
  }
  table << '\n';
  log << "wrote " << (cfg.out / "report.tsv").string() << '\n';
}

void cmd_pipeline(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (cfg.eps) {
    cmd_dp_fit(cfg, log);
  } else {
    cmd_fit(cfg, log);
  }
  RunConfig next = cfg;
  next.params = cfg.out / "params.txt";
  next.synthetic = cmd_sample(next, log);
  cmd_evaluate(next, log);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attributed graph synthesis with community preservation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
  RunConfig cfg;
  double eps = 0.0;
  app.add_option("--edges", cfg.edges, "edge list of the input graph");
  app.add_option("--attrs", cfg.attrs, "attribute matrix of the input graph");
  app.add_option("--partition", cfg.partition, "partition file, or 'detect'");
  auto* eps_opt = app.add_option("--eps", eps, "total privacy budget (dp-fit)");
  app.add_option("--delta", cfg.delta, "bucket width of the similarity aggregator");
  app.add_option("--cap", cfg.cap, "degree cap for the correlation counts");
  app.add_option("--ws", cfg.w_s, "weight of structural modularity");
  app.add_option("--rounds", cfg.rounds, "partition search rounds");
  app.add_option("--fanout", cfg.fanout, "candidates per partition search round");
  app.add_option("--samples", cfg.samples, "number of synthetic graphs");
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--params", cfg.params, "params file (sample)");
  app.add_option("--synthetic", cfg.synthetic, "prefixes of synthetic graphs (evaluate)");

  auto* fit = app.add_subcommand("fit", "exact parameter fit")->fallthrough();
  auto* dp = app.add_subcommand("dp-fit", "differentially private parameter fit")->fallthrough();
  auto* sample = app.add_subcommand("sample", "sample synthetic graphs")->fallthrough();
  auto* evaluate = app.add_subcommand("evaluate", "compare synthetic graphs")->fallthrough();
  auto* pipeline = app.add_subcommand("pipeline", "fit, sample and evaluate")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  if (eps_opt->count() > 0) cfg.eps = eps;

  try {
    if (fit->parsed()) {
      cmd_fit(cfg, out);
    } else if (dp->parsed()) {
      cmd_dp_fit(cfg, out);
    } else if (sample->parsed()) {
      cmd_sample(cfg, out);
    } else if (evaluate->parsed()) {
      cmd_evaluate(cfg, out);
    } else if (pipeline->parsed()) {
      cmd_pipeline(cfg, out);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace cagm::cli

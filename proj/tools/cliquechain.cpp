// cliquechain: batch entry points for ingestion, mining, scoring, export and
// serving. Defaults are shared with the service.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "cliquechain/chain_export.hpp"
#include "cliquechain/discovery.hpp"
#include "cliquechain/graph_io.hpp"
#include "cliquechain/ingest.hpp"
#include "cliquechain/interestingness.hpp"
#include "cliquechain/service.hpp"
#include "cliquechain/snapshot.hpp"

namespace cc = cliquechain;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitNonConvergence = 4;
constexpr int kExitInternal = 5;

int exit_code(cc::ErrorCode code) {
  switch (code) {
    case cc::ErrorCode::kInvalidArgument:
    case cc::ErrorCode::kNotFound: return kExitUsage;
    case cc::ErrorCode::kParse: return kExitParse;
    case cc::ErrorCode::kNonConvergence: return kExitNonConvergence;
    default: return kExitInternal;
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw cc::Error(cc::ErrorCode::kInvalidArgument, "cannot write '" + path + "'");
  return out;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(1) << '\n';
}

struct GraphArgs {
  std::string path;
  bool directed = false;

  void add(CLI::App* cmd) {
    cmd->add_option("--graph", path, "Edge-list file (tab-separated pairs)")->required();
    cmd->add_flag("--directed", directed, "Treat edges as directed");
  }
  cc::Graph load() const { return cc::read_edge_list_file(path, directed); }
};

int run_ingest(const std::string& input, const std::string& output, std::string provenance) {
  const auto eg = cc::build_entity_graph(cc::load_corpus(input));
  {
    auto out = open_out(output);
    cc::write_edge_list(out, eg.graph);
  }
  if (provenance.empty()) provenance = output + ".provenance.json";
  write_json_file(provenance, cc::provenance_to_json(eg));
  std::cerr << "ingest: " << eg.graph.num_vertices() << " entities, " << eg.graph.num_edges()
            << " edges\n";
  return kExitOk;
}

int run_mine(const GraphArgs& graph, const cc::DiscoveryOptions& options, const std::string& out,
             std::string model_out) {
  const auto g = graph.load();
  const auto result = cc::discover_chains(g, options);
  const auto dataset = fs::path(graph.path).stem().string();
  {
    auto o = open_out(out);
    cc::write_chain_document(o, cc::make_chain_document(dataset, g, result.cliques, result.chains));
  }
  if (model_out.empty()) model_out = out + ".model.json";
  cc::save_model_snapshot(model_out, result.background);
  std::cerr << "mine: " << result.chains.size() << " chain(s), background epoch "
            << result.background.epoch() << '\n';
  if (!result.complete) {
    std::cerr << "mine: stopped early: " << result.diagnostic << '\n';
    return kExitNonConvergence;
  }
  return kExitOk;
}

int run_score(const GraphArgs& graph, const std::string& model_path, std::size_t min_size,
              const cc::FitOptions& fit) {
  const auto g = graph.load();
  const auto background =
      model_path.empty() ? cc::build_background(g, fit) : cc::load_model_snapshot(model_path);
  const auto cliques = cc::enumerate_maximal_cliques(g, min_size).cliques;
  auto session = cc::ExplorationSession(fs::path(graph.path).stem().string(),
                                        std::make_shared<const cc::Graph>(g), cliques, background, fit);
  std::cout << "id\tscore\tvertices\n";
  for (const auto& r : session.rank_cliques()) {
    char score[32];
    std::snprintf(score, sizeof score, "%.9e", r.score);
    std::cout << r.id << '\t' << score << '\t';
    const auto& members = session.clique(r.id).vertices.members();
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i) std::cout << ',';
      std::cout << g.label(members[i]);
    }
    std::cout << '\n';
  }
  return kExitOk;
}

int run_export(const std::string& chains, const std::string& format, const std::string& out) {
  std::ifstream in(chains, std::ios::binary);
  if (!in) throw cc::Error(cc::ErrorCode::kInvalidArgument, "cannot open '" + chains + "'");
  const auto doc = cc::read_chain_document(in);
  std::ofstream file;
  std::ostream* o = &std::cout;
  if (!out.empty()) {
    file = open_out(out);
    o = &file;
  }
  if (format == "dot") {
    cc::render_chains_dot(*o, doc);
  } else {
    cc::render_chains_text(*o, doc);
  }
  return kExitOk;
}

int run_serve(cc::ServiceConfig config, const std::string& host) {
  // Block termination signals before any thread starts so only sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  cc::Service service(config);
  if (!config.snapshot_dir.empty() && fs::exists(fs::path(config.snapshot_dir) / "service.json")) {
    service.load_snapshot(config.snapshot_dir);
    std::cerr << "serve: restored state from " << config.snapshot_dir << '\n';
  }
  cc::HttpServer server(service);
  const int port = server.start(host, config.port);
  std::cerr << "serve: listening on " << host << ':' << port << '\n';

  int sig = 0;
  sigwait(&signals, &sig);
  std::cerr << "serve: shutting down\n";
  server.stop();
  service.wait_for_jobs();
  if (!config.snapshot_dir.empty()) {
    service.save_snapshot(config.snapshot_dir);
    std::cerr << "serve: state saved to " << config.snapshot_dir << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  const cc::ServiceConfig defaults;

  CLI::App app{"Maximal-clique chain mining against a maximum-entropy background"};
  app.require_subcommand(1);

  std::string input, output, provenance;
  auto* ingest = app.add_subcommand("ingest", "Build an entity graph and provenance from a corpus");
  ingest->add_option("--input", input, "Corpus JSON file")->required();
  ingest->add_option("--output", output, "Edge-list file to write")->required();
  ingest->add_option("--provenance", provenance, "Provenance JSON (default <output>.provenance.json)");

  GraphArgs mine_graph;
  cc::DiscoveryOptions mine_opts;
  mine_opts.min_score = defaults.min_score;
  mine_opts.min_size = defaults.min_size;
  mine_opts.fit = defaults.fit;
  std::string mine_out, model_out;
  auto* mine = app.add_subcommand("mine", "Discover chains and fold them into the background");
  mine_graph.add(mine);
  mine->add_option("--k", mine_opts.k, "Number of chains")->capture_default_str()->check(CLI::NonNegativeNumber);
  mine->add_option("--min-score", mine_opts.min_score, "Minimum interestingness")->capture_default_str();
  mine->add_option("--min-size", mine_opts.min_size, "Minimum clique size")->capture_default_str()->check(CLI::PositiveNumber);
  mine->add_option("--tol", mine_opts.fit.tol, "Fit tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  mine->add_option("--max-iter", mine_opts.fit.max_iter, "Fit sweep limit")->capture_default_str()->check(CLI::PositiveNumber);
  mine->add_option("--out", mine_out, "Chain document to write")->required();
  mine->add_option("--model-out", model_out, "Model snapshot to write (default <out>.model.json)");

  GraphArgs score_graph;
  std::string model_path;
  std::size_t score_min_size = defaults.min_size;
  cc::FitOptions score_fit = defaults.fit;
  auto* score = app.add_subcommand("score", "Rank all cliques against a background model");
  score_graph.add(score);
  score->add_option("--model", model_path, "Model snapshot (default: fresh degree background)");
  score->add_option("--min-size", score_min_size, "Minimum clique size")->capture_default_str()->check(CLI::PositiveNumber);
  score->add_option("--tol", score_fit.tol, "Fit tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  score->add_option("--max-iter", score_fit.max_iter, "Fit sweep limit")->capture_default_str()->check(CLI::PositiveNumber);

  cc::ServiceConfig serve_config = defaults;
  std::string host = "127.0.0.1";
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--port", serve_config.port, "Listen port")->capture_default_str();
  serve->add_option("--host", host, "Listen address")->capture_default_str();
  serve->add_option("--snapshot-dir", serve_config.snapshot_dir, "Directory for state snapshots");
  serve->add_option("--tol", serve_config.fit.tol, "Default fit tolerance")->capture_default_str();
  serve->add_option("--max-iter", serve_config.fit.max_iter, "Default fit sweep limit")->capture_default_str();
  serve->add_option("--min-size", serve_config.min_size, "Default minimum clique size")->capture_default_str();
  serve->add_option("--min-score", serve_config.min_score, "Default mining threshold")->capture_default_str();

  std::string chains, format = "text", export_out;
  auto* exp = app.add_subcommand("export", "Render a chain document");
  exp->add_option("--chains", chains, "Chain document")->required();
  exp->add_option("--format", format, "Output format")->check(CLI::IsMember({"dot", "text"}))->capture_default_str();
  exp->add_option("--out", export_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ingest) return run_ingest(input, output, provenance);
    if (*mine) return run_mine(mine_graph, mine_opts, mine_out, model_out);
    if (*score) return run_score(score_graph, model_path, score_min_size, score_fit);
    if (*serve) {
      // Environment fills in whatever was not given on the command line.
      auto config = cc::ServiceConfig::from_env(defaults);
      if (serve->count("--port")) config.port = serve_config.port;
      if (serve->count("--snapshot-dir")) config.snapshot_dir = serve_config.snapshot_dir;
      if (serve->count("--tol")) config.fit.tol = serve_config.fit.tol;
      if (serve->count("--max-iter")) config.fit.max_iter = serve_config.fit.max_iter;
      if (serve->count("--min-size")) config.min_size = serve_config.min_size;
      if (serve->count("--min-score")) config.min_score = serve_config.min_score;
      return run_serve(config, host);
    }
    if (*exp) return run_export(chains, format, export_out);
  } catch (const cc::Error& e) {
    std::cerr << "error [" << cc::to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error [internal]: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

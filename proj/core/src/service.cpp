#include "cliquechain/service.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cliquechain/chain_export.hpp"
#include "cliquechain/graph_io.hpp"
#include "cliquechain/snapshot.hpp"

namespace cliquechain {

using nlohmann::json;

namespace {

constexpr const char* kSnapshotFile = "service.json";

std::string now_iso8601() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

[[noreturn]] void bad_field(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, "payload." + key + ": " + what);
}

std::optional<std::uint64_t> opt_uint(const json& j, const std::string& key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  const auto& v = j.at(key);
  if (!v.is_number_unsigned()) {
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
    bad_field(key, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::uint64_t req_uint(const json& j, const std::string& key) {
  auto v = opt_uint(j, key);
  if (!v) bad_field(key, "missing");
  return *v;
}

std::optional<double> opt_double(const json& j, const std::string& key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number()) bad_field(key, "expected a number");
  return j.at(key).get<double>();
}

std::optional<std::string> opt_string(const json& j, const std::string& key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_string()) bad_field(key, "expected a string");
  return j.at(key).get<std::string>();
}

bool opt_bool(const json& j, const std::string& key, bool fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  if (!j.at(key).is_boolean()) bad_field(key, "expected a boolean");
  return j.at(key).get<bool>();
}

json parse_body(std::string_view body) {
  if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) return json::object();
  auto j = parse_json(std::string(body), "request body");
  if (!j.is_object()) throw Error(ErrorCode::kParse, "request body: expected an object");
  return j;
}

std::size_t parse_size(const std::string& text, const std::string& name) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kInvalidArgument, name + ": expected a non-negative integer");
  }
  return value;
}

json labels_of(const Graph& g, const VertexSet& s) {
  json out = json::array();
  for (auto v : s.members()) out.push_back(g.label(v));
  return out;
}

json chain_json(const Graph& g, std::span<const CliquePattern> cliques, const ChainPattern& c) {
  json jc = json::array();
  for (auto id : c.cliques) jc.push_back({{"id", id}, {"vertices", labels_of(g, cliques[id].vertices)}});
  json conn = json::array();
  for (const auto& s : c.connectors) conn.push_back(labels_of(g, s));
  return {{"cliques", jc}, {"connectors", conn}};
}

json chain_to_snapshot(const ChainPattern& c) {
  json conn = json::array();
  for (const auto& s : c.connectors) conn.push_back(s.members());
  return {{"cliques", c.cliques}, {"connectors", conn}};
}

ChainPattern chain_from_snapshot(const json& j) {
  ChainPattern c;
  c.cliques = j.at("cliques").get<std::vector<CliqueId>>();
  for (const auto& s : j.at("connectors")) c.connectors.emplace_back(s.get<std::vector<Vertex>>());
  return c;
}

std::string_view rule_name(StepRule rule) {
  return rule == StepRule::kClosedForm ? "closed_form" : "exact";
}

StepRule parse_rule(const std::string& name) {
  if (name == "exact") return StepRule::kExactSolve;
  if (name == "closed_form") return StepRule::kClosedForm;
  throw Error(ErrorCode::kParse, "unknown step rule '" + name + "'");
}

json fit_to_json(const FitOptions& f) {
  return {{"tol", f.tol}, {"max_iter", f.max_iter}, {"rule", rule_name(f.rule)}, {"damping", f.damping}};
}

FitOptions fit_from_json(const json& j) {
  FitOptions f;
  f.tol = j.at("tol").get<double>();
  f.max_iter = j.at("max_iter").get<std::size_t>();
  f.rule = parse_rule(j.at("rule").get<std::string>());
  f.damping = j.at("damping").get<double>();
  return f;
}

template <class T>
void env_override(const char* name, T& value) {
  const char* raw = std::getenv(name);
  if (!raw || !*raw) return;
  std::istringstream in(raw);
  T parsed{};
  if (!(in >> parsed) || !in.eof()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(name) + ": cannot parse '" + raw + "'");
  }
  value = parsed;
}

}  // namespace

ServiceConfig ServiceConfig::from_env(ServiceConfig base) {
  env_override("CLIQUECHAIN_PORT", base.port);
  if (const char* dir = std::getenv("CLIQUECHAIN_SNAPSHOT_DIR")) base.snapshot_dir = dir;
  env_override("CLIQUECHAIN_TOL", base.fit.tol);
  env_override("CLIQUECHAIN_MAX_ITER", base.fit.max_iter);
  env_override("CLIQUECHAIN_MIN_SIZE", base.min_size);
  env_override("CLIQUECHAIN_MIN_SCORE", base.min_score);
  return base;
}

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kParse: return 400;
    case ErrorCode::kInvalidArgument: return 422;
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kConflict: return 409;
    case ErrorCode::kNonConvergence: return 422;
    case ErrorCode::kInternal: return 500;
  }
  return 500;
}

json error_body(ErrorCode code, std::string_view message) {
  return {{"error", {{"code", to_string(code)}, {"message", message}}}};
}

Service::Service(ServiceConfig config) : config_(std::move(config)) {}

Service::~Service() { wait_for_jobs(); }

void Service::wait_for_jobs() {
  std::vector<std::jthread> threads;
  {
    std::lock_guard lk(registry_mutex_);
    threads.swap(job_threads_);
  }
  for (auto& t : threads) t.join();
}

// ---- datasets

std::shared_ptr<const Service::Dataset> Service::make_dataset(std::string id, const json& payload,
                                                              std::string created_at) const {
  if (!payload.is_object()) throw Error(ErrorCode::kParse, "payload: expected an object");
  const bool has_corpus = payload.contains("corpus");
  const bool has_edges = payload.contains("edge_list");
  if (has_corpus == has_edges) {
    throw Error(ErrorCode::kInvalidArgument, "payload: expected exactly one of 'corpus' or 'edge_list'");
  }

  auto ds = std::make_shared<Dataset>();
  ds->id = std::move(id);
  ds->created_at = std::move(created_at);
  ds->source = opt_string(payload, "source").value_or("");
  ds->payload = payload;
  ds->min_size = opt_uint(payload, "min_size").value_or(config_.min_size);
  if (ds->min_size < 1) bad_field("min_size", "must be at least 1");

  if (has_corpus) {
    ds->entity_graph = build_entity_graph(corpus_from_json(payload.at("corpus")));
    ds->graph = std::make_shared<const Graph>(ds->entity_graph->graph);
  } else {
    if (!payload.at("edge_list").is_string()) bad_field("edge_list", "expected a string");
    std::istringstream in(payload.at("edge_list").get<std::string>());
    ds->graph = std::make_shared<const Graph>(read_edge_list(in, opt_bool(payload, "directed", false)));
  }
  auto enumeration = enumerate_maximal_cliques(*ds->graph, ds->min_size);
  ds->symmetrized = enumeration.symmetrized;
  ds->cliques = std::move(enumeration.cliques);
  return ds;
}

json Service::dataset_json(const Dataset& ds) {
  return {{"id", ds.id},
          {"source", ds.source},
          {"created_at", ds.created_at},
          {"directed", ds.graph->directed()},
          {"vertices", ds.graph->num_vertices()},
          {"edges", ds.graph->num_edges()},
          {"cliques", ds.cliques.size()},
          {"min_size", ds.min_size},
          {"has_provenance", ds.entity_graph.has_value()}};
}

json Service::register_dataset(const json& payload) {
  std::string id;
  {
    std::lock_guard lk(registry_mutex_);
    id = "ds-" + std::to_string(next_dataset_++);
  }
  auto ds = make_dataset(id, payload, now_iso8601());
  std::lock_guard lk(registry_mutex_);
  datasets_.emplace(id, ds);
  return dataset_json(*ds);
}

std::shared_ptr<const Service::Dataset> Service::find_dataset(const std::string& id) const {
  std::lock_guard lk(registry_mutex_);
  auto it = datasets_.find(id);
  if (it == datasets_.end()) throw Error(ErrorCode::kNotFound, "unknown dataset '" + id + "'");
  return it->second;
}

json Service::dataset_summary(const std::string& id) const { return dataset_json(*find_dataset(id)); }

json Service::dataset_cliques(const std::string& id, std::optional<std::size_t> min_size) const {
  auto ds = find_dataset(id);
  const auto size = min_size.value_or(ds->min_size);
  if (size < 1) throw Error(ErrorCode::kInvalidArgument, "min_size must be at least 1");
  std::vector<CliquePattern> own;
  const std::vector<CliquePattern>* cliques = &ds->cliques;
  if (size != ds->min_size) {
    own = enumerate_maximal_cliques(*ds->graph, size).cliques;
    cliques = &own;
  }
  json out = json::array();
  for (const auto& c : *cliques) {
    out.push_back({{"id", c.id}, {"vertices", labels_of(*ds->graph, c.vertices)}});
  }
  return {{"dataset_id", ds->id},
          {"min_size", size},
          {"symmetrized", ds->symmetrized},
          {"cliques", out}};
}

// ---- sessions

std::shared_ptr<Service::SessionEntry> Service::find_session(const std::string& id) const {
  std::lock_guard lk(registry_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::kNotFound, "unknown session '" + id + "'");
  return it->second;
}

json Service::session_state(const SessionEntry& entry) const {
  const auto& s = entry.session;
  json chain = nullptr;
  if (s.current_chain()) chain = chain_json(s.graph(), s.cliques(), *s.current_chain());
  return {{"session_id", entry.id},
          {"dataset_id", s.dataset_id()},
          {"epoch", s.epoch()},
          {"status", to_string(s.status())},
          {"min_size", entry.min_size},
          {"chain", chain},
          {"finalized", s.finalized_chains().size()}};
}

json Service::create_session(const json& payload) {
  const auto dataset_id = opt_string(payload, "dataset_id");
  if (!dataset_id) bad_field("dataset_id", "missing");
  auto ds = find_dataset(*dataset_id);

  FitOptions fit = config_.fit;
  if (auto tol = opt_double(payload, "tol")) fit.tol = *tol;
  if (auto it = opt_uint(payload, "max_iter")) fit.max_iter = *it;
  const std::size_t min_size = opt_uint(payload, "min_size").value_or(ds->min_size);
  if (min_size < 1) throw Error(ErrorCode::kInvalidArgument, "min_size must be at least 1");
  if (fit.tol <= 0 || fit.max_iter < 1) {
    throw Error(ErrorCode::kInvalidArgument, "tol must be positive and max_iter at least 1");
  }

  auto cliques = min_size == ds->min_size ? ds->cliques
                                          : enumerate_maximal_cliques(*ds->graph, min_size).cliques;
  auto session = ExplorationSession::create(ds->id, ds->graph, std::move(cliques), fit);

  std::lock_guard lk(registry_mutex_);
  const auto id = "s-" + std::to_string(next_session_++);
  auto entry = std::make_shared<SessionEntry>(id, ds, min_size, std::move(session));
  sessions_.emplace(id, entry);
  return session_state(*entry);
}

json Service::session(const std::string& session_id) const {
  auto entry = find_session(session_id);
  std::shared_lock lk(entry->mutex);
  return session_state(*entry);
}

// Reads that need scores: a shared view when the cache is current, otherwise
// the cache is refreshed under the exclusive lock first.
template <class F>
json Service::with_fresh_scores(SessionEntry& entry, F&& read) const {
  {
    std::shared_lock lk(entry.mutex);
    if (entry.session.scores_fresh()) return read(std::as_const(entry.session));
  }
  std::unique_lock lk(entry.mutex);
  entry.session.refresh_scores();
  return read(std::as_const(entry.session));
}

json Service::ranked(const std::string& session_id) {
  auto entry = find_session(session_id);
  return with_fresh_scores(*entry, [&](const ExplorationSession& s) {
    json out = json::array();
    for (const auto& r : s.rank_cliques()) {
      out.push_back({{"id", r.id},
                     {"vertices", labels_of(s.graph(), s.clique(r.id).vertices)},
                     {"score", r.score}});
    }
    return json{{"session_id", entry->id},
                {"epoch", s.epoch()},
                {"status", to_string(s.status())},
                {"cliques", out}};
  });
}

json Service::candidates(const std::string& session_id) {
  auto entry = find_session(session_id);
  return with_fresh_scores(*entry, [&](const ExplorationSession& s) {
    json out = json::array();
    for (const auto& c : s.candidate_cliques()) {
      out.push_back({{"id", c.id},
                     {"vertices", labels_of(s.graph(), s.clique(c.id).vertices)},
                     {"score", c.score},
                     {"end", to_string(c.end)},
                     {"connector", labels_of(s.graph(), c.connector)}});
    }
    return json{{"session_id", entry->id},
                {"epoch", s.epoch()},
                {"status", to_string(s.status())},
                {"chain", chain_json(s.graph(), s.cliques(), *s.current_chain())},
                {"candidates", out}};
  });
}

json Service::start(const std::string& session_id, const json& payload) {
  auto entry = find_session(session_id);
  const auto clique = static_cast<CliqueId>(req_uint(payload, "clique_id"));
  const auto epoch = opt_uint(payload, "epoch");
  std::unique_lock lk(entry->mutex);
  ++mutations_;
  entry->session.start_chain(clique, epoch);
  return session_state(*entry);
}

json Service::extend(const std::string& session_id, const json& payload) {
  auto entry = find_session(session_id);
  const auto clique = static_cast<CliqueId>(req_uint(payload, "clique_id"));
  const auto epoch = opt_uint(payload, "epoch");
  std::unique_lock lk(entry->mutex);
  ++mutations_;
  entry->session.extend_chain(clique, epoch);
  return session_state(*entry);
}

json Service::finalize(const std::string& session_id, const json& payload) {
  auto entry = find_session(session_id);
  const auto epoch = opt_uint(payload, "epoch");
  std::unique_lock lk(entry->mutex);
  ++mutations_;
  auto& s = entry->session;
  const auto& done = s.finalize_chain(epoch);
  auto out = session_state(*entry);
  out["finalized_chain"] = to_json(export_chain(s.graph(), s.cliques(), done));
  return out;
}

json Service::clear(const std::string& session_id) {
  auto entry = find_session(session_id);
  std::unique_lock lk(entry->mutex);
  ++mutations_;
  entry->session.clear_chain();
  return session_state(*entry);
}

json Service::mine_locked(SessionEntry& entry, std::size_t k, double min_score) {
  ++mutations_;
  auto& s = entry.session;
  const auto report = s.auto_mine(k, min_score);
  json chains = json::array();
  for (const auto& c : report.chains) chains.push_back(to_json(export_chain(s.graph(), s.cliques(), c)));
  auto out = session_state(entry);
  out["chains"] = chains;
  out["complete"] = report.complete;
  out["diagnostic"] = report.diagnostic;
  return out;
}

// Rough cost model: one scoring pass over every clique per mined chain, each
// pass a handful of sweeps over all constraints of the pair model.
double Service::estimate_mine_seconds(const SessionEntry& entry, std::size_t k) const {
  const auto& s = entry.session;
  const double n = static_cast<double>(s.graph().num_vertices());
  const double per_fit = 5.0 * (s.graph().directed() ? 2.0 : 1.0) * n * n;
  const double threads = std::max(1u, std::thread::hardware_concurrency());
  const double ops = static_cast<double>(k) * (static_cast<double>(s.cliques().size()) + 1) * per_fit;
  return ops / (5e7 * threads);
}

Response Service::mine(const std::string& session_id, const json& payload) {
  auto entry = find_session(session_id);
  const std::size_t k = opt_uint(payload, "k").value_or(1);
  const double min_score = opt_double(payload, "min_score").value_or(config_.min_score);

  bool as_job = opt_bool(payload, "async", false);
  if (!as_job) {
    std::shared_lock lk(entry->mutex);
    as_job = estimate_mine_seconds(*entry, k) > config_.job_threshold_seconds;
  }
  if (!as_job) {
    std::unique_lock lk(entry->mutex);
    return {200, mine_locked(*entry, k, min_score)};
  }

  auto job = std::make_shared<Job>();
  job->session_id = session_id;
  std::lock_guard lk(registry_mutex_);
  job->id = "job-" + std::to_string(next_job_++);
  jobs_.emplace(job->id, job);
  job_threads_.emplace_back([this, entry, job, k, min_score] {
    json result;
    std::optional<json> error;
    try {
      std::unique_lock session_lock(entry->mutex);
      result = mine_locked(*entry, k, min_score);
    } catch (const Error& e) {
      error = error_body(e.code(), e.what())["error"];
    } catch (const std::exception& e) {
      error = error_body(ErrorCode::kInternal, e.what())["error"];
    }
    std::lock_guard job_lock(job->mutex);
    job->result = std::move(result);
    job->error = std::move(error);
    job->status = job->error ? "failed" : "done";
  });
  return {202, {{"job_id", job->id}, {"session_id", session_id}, {"status", "running"}}};
}

json Service::job(const std::string& job_id) const {
  std::shared_ptr<Job> job;
  {
    std::lock_guard lk(registry_mutex_);
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) throw Error(ErrorCode::kNotFound, "unknown job '" + job_id + "'");
    job = it->second;
  }
  std::lock_guard lk(job->mutex);
  json out = {{"job_id", job->id}, {"session_id", job->session_id}, {"status", job->status}};
  if (job->status == "done") out["result"] = job->result;
  if (job->error) out["error"] = *job->error;
  return out;
}

json Service::chains(const std::string& session_id) const {
  auto entry = find_session(session_id);
  std::shared_lock lk(entry->mutex);
  const auto& s = entry->session;
  auto doc = to_json(make_chain_document(s.dataset_id(), s.graph(), s.cliques(), s.finalized_chains()));
  auto out = session_state(*entry);
  out["chains"] = doc.at("chains");
  return out;
}

json Service::provenance(const std::string& session_id, const std::string& which) const {
  auto entry = find_session(session_id);
  std::shared_lock lk(entry->mutex);
  const auto& s = entry->session;
  const auto& eg = entry->dataset->entity_graph;
  if (!eg) throw Error(ErrorCode::kNotFound, "dataset " + s.dataset_id() + " was not built from a corpus");

  const ChainPattern* chain = nullptr;
  if (which.empty() || which == "current") {
    if (!s.current_chain()) throw Error(ErrorCode::kConflict, "no chain is being explored");
    chain = &*s.current_chain();
  } else {
    const auto index = parse_size(which, "chain");
    if (index >= s.finalized_chains().size()) {
      throw Error(ErrorCode::kNotFound, "no finalized chain " + which);
    }
    chain = &s.finalized_chains()[index].chain;
  }

  const auto& g = s.graph();
  std::set<std::pair<std::string, std::string>> edges;
  for (auto id : chain->cliques) {
    const auto& members = s.clique(id).vertices.members();
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        auto x = g.label(members[a]), y = g.label(members[b]);
        if (y < x) std::swap(x, y);
        edges.emplace(x, y);
      }
    }
  }

  auto refs_json = [](const std::vector<SentenceRef>* refs) {
    json out = json::array();
    if (refs) for (const auto& r : *refs) out.push_back(json::array({r.document, r.sentence}));
    return out;
  };

  json entities = json::array();
  const auto vertices = chain_vertices(*chain, s.cliques());
  for (auto v : vertices.members()) {
    const std::vector<SentenceRef>* refs = nullptr;
    auto it = eg->provenance.mentions.find(g.label(v));
    if (it != eg->provenance.mentions.end()) refs = &it->second;
    entities.push_back({{"label", g.label(v)}, {"mentions", refs_json(refs)}});
  }

  std::map<std::string, std::set<std::size_t>> witnessed;
  json jedges = json::array();
  for (const auto& e : edges) {
    const std::vector<SentenceRef>* refs = nullptr;
    auto it = eg->provenance.cooccurrences.find(e);
    if (it != eg->provenance.cooccurrences.end()) refs = &it->second;
    if (refs) for (const auto& r : *refs) witnessed[r.document].insert(r.sentence);
    jedges.push_back({{"source", e.first}, {"target", e.second}, {"witnesses", refs_json(refs)}});
  }

  json documents = json::array();
  for (const auto& [doc, indices] : witnessed) {
    const auto& texts = eg->sentences.at(doc);
    json sentences = json::array();
    for (auto i : indices) sentences.push_back({{"index", i}, {"text", texts.at(i)}});
    documents.push_back({{"id", doc}, {"sentences", sentences}});
  }

  return {{"session_id", entry->id},
          {"epoch", s.epoch()},
          {"chain", chain_json(g, s.cliques(), *chain)},
          {"entities", entities},
          {"edges", jedges},
          {"documents", documents}};
}

json Service::stats() const {
  std::lock_guard lk(registry_mutex_);
  return {{"datasets", datasets_.size()},
          {"sessions", sessions_.size()},
          {"jobs", jobs_.size()},
          {"mutations", mutations_.load()}};
}

// ---- snapshots

void Service::save_snapshot(const std::string& dir) const {
  json datasets = json::array();
  json sessions = json::array();
  std::vector<std::shared_ptr<SessionEntry>> entries;
  std::uint64_t counters[3];
  {
    std::lock_guard lk(registry_mutex_);
    for (const auto& [id, ds] : datasets_) {
      datasets.push_back({{"id", id}, {"created_at", ds->created_at}, {"payload", ds->payload}});
    }
    for (const auto& [id, entry] : sessions_) entries.push_back(entry);
    counters[0] = next_dataset_;
    counters[1] = next_session_;
    counters[2] = next_job_;
  }
  for (const auto& entry : entries) {
    std::shared_lock lk(entry->mutex);
    const auto& s = entry->session;
    json scores = json::array();
    for (const auto& c : s.cliques()) {
      scores.push_back(c.score ? json::array({*c.score, c.score_epoch}) : json(nullptr));
    }
    json finalized = json::array();
    for (const auto& f : s.finalized_chains()) {
      finalized.push_back({{"chain", chain_to_snapshot(f.chain)},
                           {"scores", f.scores},
                           {"score_epoch", f.score_epoch},
                           {"background_epoch", f.background_epoch}});
    }
    sessions.push_back({{"id", entry->id},
                        {"dataset_id", s.dataset_id()},
                        {"min_size", entry->min_size},
                        {"fit", fit_to_json(s.fit_options())},
                        {"model", model_to_json(s.background())},
                        {"scores", scores},
                        {"chain", s.current_chain() ? chain_to_snapshot(*s.current_chain()) : json(nullptr)},
                        {"finalized", finalized}});
  }

  const json doc = {{"format", "cliquechain-service"},
                    {"format_version", 1},
                    {"next_dataset", counters[0]},
                    {"next_session", counters[1]},
                    {"next_job", counters[2]},
                    {"datasets", datasets},
                    {"sessions", sessions}};

  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto path = fs::path(dir) / kSnapshotFile;
  const auto tmp = fs::path(dir) / (std::string(kSnapshotFile) + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kInternal, "cannot write '" + tmp.string() + "'");
    out << doc.dump(1) << '\n';
    if (!out) throw Error(ErrorCode::kInternal, "cannot write '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

void Service::load_snapshot(const std::string& dir) {
  const auto path = std::filesystem::path(dir) / kSnapshotFile;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "no snapshot at '" + path.string() + "'");
  const auto doc = parse_json(in, "snapshot '" + path.string() + "'");

  std::map<std::string, std::shared_ptr<const Dataset>> datasets;
  std::map<std::string, std::shared_ptr<SessionEntry>> sessions;
  try {
    if (doc.at("format") != "cliquechain-service" || doc.at("format_version") != 1) {
      throw Error(ErrorCode::kParse, "snapshot: unsupported format");
    }
    for (const auto& jd : doc.at("datasets")) {
      const auto id = jd.at("id").get<std::string>();
      datasets.emplace(id, make_dataset(id, jd.at("payload"), jd.at("created_at").get<std::string>()));
    }
    for (const auto& js : doc.at("sessions")) {
      const auto id = js.at("id").get<std::string>();
      const auto ds_id = js.at("dataset_id").get<std::string>();
      auto ds_it = datasets.find(ds_id);
      if (ds_it == datasets.end()) throw Error(ErrorCode::kParse, "snapshot: unknown dataset " + ds_id);
      const auto& ds = ds_it->second;
      const auto min_size = js.at("min_size").get<std::size_t>();
      auto cliques = min_size == ds->min_size ? ds->cliques
                                              : enumerate_maximal_cliques(*ds->graph, min_size).cliques;
      const auto& scores = js.at("scores");
      if (scores.size() != cliques.size()) throw Error(ErrorCode::kParse, "snapshot: score count mismatch");
      for (std::size_t i = 0; i < cliques.size(); ++i) {
        if (scores[i].is_null()) continue;
        cliques[i].score = scores[i].at(0).get<double>();
        cliques[i].score_epoch = scores[i].at(1).get<std::uint64_t>();
      }
      ExplorationSession session(ds->id, ds->graph, std::move(cliques), model_from_json(js.at("model")),
                                 fit_from_json(js.at("fit")));
      std::optional<ChainPattern> chain;
      if (!js.at("chain").is_null()) chain = chain_from_snapshot(js.at("chain"));
      std::vector<FinalizedChain> finalized;
      for (const auto& jf : js.at("finalized")) {
        finalized.push_back({chain_from_snapshot(jf.at("chain")), jf.at("scores").get<std::vector<double>>(),
                             jf.at("score_epoch").get<std::uint64_t>(),
                             jf.at("background_epoch").get<std::uint64_t>()});
      }
      session.restore(std::move(chain), std::move(finalized));
      sessions.emplace(id, std::make_shared<SessionEntry>(id, ds, min_size, std::move(session)));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("snapshot: ") + e.what());
  }

  wait_for_jobs();
  std::lock_guard lk(registry_mutex_);
  datasets_ = std::move(datasets);
  sessions_ = std::move(sessions);
  jobs_.clear();
  next_dataset_ = doc.at("next_dataset").get<std::uint64_t>();
  next_session_ = doc.at("next_session").get<std::uint64_t>();
  next_job_ = doc.at("next_job").get<std::uint64_t>();
}

// ---- routing

Response Service::handle(std::string_view method, std::string_view path,
                         const std::map<std::string, std::string>& query, std::string_view body) {
  try {
    return route(method, path, query, body);
  } catch (const Error& e) {
    return {http_status(e.code()), error_body(e.code(), e.what())};
  } catch (const json::exception& e) {
    return {400, error_body(ErrorCode::kParse, e.what())};
  } catch (const std::exception& e) {
    return {500, error_body(ErrorCode::kInternal, e.what())};
  }
}

Response Service::route(std::string_view method, std::string_view path,
                        const std::map<std::string, std::string>& query, std::string_view body) {
  std::vector<std::string> seg;
  for (std::size_t i = 0; i <= path.size();) {
    auto j = path.find('/', i);
    if (j == std::string_view::npos) j = path.size();
    if (j > i) seg.emplace_back(path.substr(i, j - i));
    i = j + 1;
  }
  auto param = [&](const std::string& key) -> std::optional<std::string> {
    auto it = query.find(key);
    if (it == query.end()) return std::nullopt;
    return it->second;
  };
  const bool get = method == "GET";
  const bool post = method == "POST";
  bool known = false;  // path exists but method differs

  auto is = [&](std::initializer_list<std::string_view> shape) {
    if (shape.size() != seg.size()) return false;
    std::size_t i = 0;
    for (auto s : shape) {
      if (s != "*" && s != seg[i]) return false;
      ++i;
    }
    return true;
  };

  if (is({"health"})) {
    if (get) return {200, {{"status", "ok"}}};
    known = true;
  } else if (is({"stats"})) {
    if (get) return {200, stats()};
    known = true;
  } else if (is({"datasets"})) {
    if (post) return {201, register_dataset(parse_body(body))};
    known = true;
  } else if (is({"datasets", "*"})) {
    if (get) return {200, dataset_summary(seg[1])};
    known = true;
  } else if (is({"datasets", "*", "cliques"})) {
    if (get) {
      std::optional<std::size_t> min_size;
      if (auto m = param("min_size")) min_size = parse_size(*m, "min_size");
      return {200, dataset_cliques(seg[1], min_size)};
    }
    known = true;
  } else if (is({"sessions"})) {
    if (post) return {201, create_session(parse_body(body))};
    known = true;
  } else if (is({"sessions", "*"})) {
    if (get) return {200, session(seg[1])};
    known = true;
  } else if (is({"sessions", "*", "*"})) {
    const auto& id = seg[1];
    const auto& op = seg[2];
    if (get) {
      if (op == "ranked") return {200, ranked(id)};
      if (op == "candidates") return {200, candidates(id)};
      if (op == "chains") return {200, chains(id)};
      if (op == "provenance") return {200, provenance(id, param("chain").value_or(""))};
    } else if (post) {
      if (op == "start") return {200, start(id, parse_body(body))};
      if (op == "extend") return {200, extend(id, parse_body(body))};
      if (op == "finalize") return {200, finalize(id, parse_body(body))};
      if (op == "clear") return {200, clear(id)};
      if (op == "mine") return mine(id, parse_body(body));
    }
    static const std::set<std::string> ops = {"ranked", "candidates", "chains", "provenance",
                                              "start",  "extend",     "finalize", "clear", "mine"};
    known = ops.contains(op);
  } else if (is({"jobs", "*"})) {
    if (get) return {200, job(seg[1])};
    known = true;
  } else if (is({"admin", "snapshot"})) {
    if (post) {
      const auto payload = parse_body(body);
      const auto dir = opt_string(payload, "dir").value_or(config_.snapshot_dir);
      if (dir.empty()) throw Error(ErrorCode::kInvalidArgument, "no snapshot directory configured");
      save_snapshot(dir);
      return {200, {{"saved", (std::filesystem::path(dir) / kSnapshotFile).string()}}};
    }
    known = true;
  }

  if (known) {
    return {405, {{"error", {{"code", "method_not_allowed"},
                             {"message", std::string(method) + " not allowed on " + std::string(path)}}}}};
  }
  return {404, error_body(ErrorCode::kNotFound, "no route for " + std::string(path))};
}

}  // namespace cliquechain

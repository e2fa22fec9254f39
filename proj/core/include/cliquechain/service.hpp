#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"

#include "cliquechain/cliques.hpp"
#include "cliquechain/error.hpp"
#include "cliquechain/ingest.hpp"
#include "cliquechain/maxent.hpp"
#include "cliquechain/session.hpp"

namespace cliquechain {

struct ServiceConfig {
  ServiceConfig() = default;
  int port = 8080;
  std::string snapshot_dir;  // empty disables persistence
  FitOptions fit;
  std::size_t min_size = kDefaultMinCliqueSize;
  double min_score = kDefaultMinScore;
  // Mining requests estimated to run longer than this become polled jobs.
  double job_threshold_seconds = 2.0;

  // Overrides from CLIQUECHAIN_PORT, CLIQUECHAIN_SNAPSHOT_DIR, CLIQUECHAIN_TOL,
  // CLIQUECHAIN_MAX_ITER, CLIQUECHAIN_MIN_SIZE and CLIQUECHAIN_MIN_SCORE.
  static ServiceConfig from_env(ServiceConfig base);
  static ServiceConfig from_env() { return from_env(ServiceConfig{}); }
};

struct Response {
  int status = 200;
  nlohmann::json body;
};

int http_status(ErrorCode code) noexcept;
nlohmann::json error_body(ErrorCode code, std::string_view message);

// In-memory registry of datasets, exploration sessions and mining jobs.
// Thread-safe: the registry has its own lock, and each session is guarded by
// a reader/writer lock so mutations on one session serialize while reads
// share the last committed state.
class Service {
 public:
  explicit Service(ServiceConfig config = {});
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  const ServiceConfig& config() const noexcept { return config_; }

  // Routes one request. Never throws; errors become structured responses.
  Response handle(std::string_view method, std::string_view path,
                  const std::map<std::string, std::string>& query, std::string_view body);

  nlohmann::json register_dataset(const nlohmann::json& payload);
  nlohmann::json dataset_summary(const std::string& id) const;
  nlohmann::json dataset_cliques(const std::string& id, std::optional<std::size_t> min_size) const;

  nlohmann::json create_session(const nlohmann::json& payload);
  nlohmann::json session(const std::string& session_id) const;
  nlohmann::json ranked(const std::string& session_id);
  nlohmann::json candidates(const std::string& session_id);
  nlohmann::json start(const std::string& session_id, const nlohmann::json& payload);
  nlohmann::json extend(const std::string& session_id, const nlohmann::json& payload);
  nlohmann::json finalize(const std::string& session_id, const nlohmann::json& payload);
  nlohmann::json clear(const std::string& session_id);
  // Returns {"job_id"} with status 202 when run as a job.
  Response mine(const std::string& session_id, const nlohmann::json& payload);
  nlohmann::json chains(const std::string& session_id) const;
  nlohmann::json provenance(const std::string& session_id, const std::string& chain) const;
  nlohmann::json job(const std::string& job_id) const;
  nlohmann::json stats() const;

  // Number of state-changing session calls served so far.
  std::uint64_t mutation_count() const noexcept { return mutations_; }

  // Writes/reads <dir>/service.json. Restoring replaces all current state.
  void save_snapshot(const std::string& dir) const;
  void load_snapshot(const std::string& dir);

  // Blocks until all running jobs have finished.
  void wait_for_jobs();

 private:
  struct Dataset {
    std::string id;
    std::string source;
    std::string created_at;
    nlohmann::json payload;
    std::shared_ptr<const Graph> graph;
    std::optional<EntityGraph> entity_graph;
    std::size_t min_size = kDefaultMinCliqueSize;
    bool symmetrized = false;
    std::vector<CliquePattern> cliques;
  };

  struct SessionEntry {
    std::string id;
    std::shared_ptr<const Dataset> dataset;
    std::size_t min_size;
    mutable std::shared_mutex mutex;
    ExplorationSession session;

    SessionEntry(std::string id_, std::shared_ptr<const Dataset> ds, std::size_t min_size_,
                 ExplorationSession s)
        : id(std::move(id_)), dataset(std::move(ds)), min_size(min_size_), session(std::move(s)) {}
  };

  struct Job {
    std::string id;
    std::string session_id;
    std::atomic<bool> done{false};
    mutable std::mutex mutex;
    std::string status = "running";
    nlohmann::json result;
    std::optional<nlohmann::json> error;
  };

  std::shared_ptr<const Dataset> make_dataset(std::string id, const nlohmann::json& payload,
                                              std::string created_at) const;
  static nlohmann::json dataset_json(const Dataset& ds);
  std::shared_ptr<const Dataset> find_dataset(const std::string& id) const;
  std::shared_ptr<SessionEntry> find_session(const std::string& id) const;

  nlohmann::json session_state(const SessionEntry& entry) const;
  template <class F>
  nlohmann::json with_fresh_scores(SessionEntry& entry, F&& read) const;
  nlohmann::json mine_locked(SessionEntry& entry, std::size_t k, double min_score);
  double estimate_mine_seconds(const SessionEntry& entry, std::size_t k) const;

  Response route(std::string_view method, std::string_view path,
                 const std::map<std::string, std::string>& query, std::string_view body);

  ServiceConfig config_;
  mutable std::mutex registry_mutex_;
  std::map<std::string, std::shared_ptr<const Dataset>> datasets_;
  std::map<std::string, std::shared_ptr<SessionEntry>> sessions_;
  std::map<std::string, std::shared_ptr<Job>> jobs_;
  std::vector<std::jthread> job_threads_;
  std::uint64_t next_dataset_ = 1;
  std::uint64_t next_session_ = 1;
  std::uint64_t next_job_ = 1;
  std::atomic<std::uint64_t> mutations_{0};
};

// Binds a Service to an HTTP listener. Routes are those of Service::handle.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and serves on a background thread; port 0 picks a free port.
  // Returns the bound port.
  int start(const std::string& host, int port);
  // Serves on the calling thread until stop() is called.
  void listen(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cliquechain

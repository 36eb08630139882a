#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "agentsafe/gateway/backend.hpp"
#include "agentsafe/gateway/live.hpp"
#include "agentsafe/gateway/scripted.hpp"

namespace agentsafe {

inline constexpr const char* kCacheFileName = "gateway_cache.jsonl";

/// Line-delimited (digest, request summary, response) records. Loading keeps the
/// first record per digest; appends go through a single writer.
class ResponseCache {
 public:
  ResponseCache() = default;

  static ResponseCache load(const std::filesystem::path& file) {
    ResponseCache cache;
    for (const auto& j : load_jsonl(file, ErrorCode::ReplayMiss)) {
      const auto digest = j.at("digest").get<std::string>();
      if (cache.entries_.contains(digest)) continue;
      Entry e{j.at("request"), response_from_payload(j.at("response")), j.value("backend", std::string{})};
      cache.entries_.emplace(digest, std::move(e));
    }
    return cache;
  }

  void open_for_append(const std::filesystem::path& file) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    if (std::filesystem::exists(file)) {
      auto existing = load(file);
      for (auto& [k, v] : existing.entries_) entries_.emplace(k, std::move(v));
    }
    out_.open(file, std::ios::binary | std::ios::app);
    if (!out_) throw Error(ErrorCode::IoError, "cannot write cache " + file.string());
  }

  const ModelResponse* find(const std::string& digest) const {
    const auto it = entries_.find(digest);
    return it == entries_.end() ? nullptr : &it->second.response;
  }

  void put(const std::string& digest, const ModelRequest& req, const ModelResponse& resp) {
    if (entries_.contains(digest)) return;
    Entry e{request_summary(req), resp, resp.backend_id};
    if (out_.is_open()) {
      json line = {{"digest", digest}, {"request", e.request}, {"response", response_payload(resp)},
                   {"backend", resp.backend_id}};
      out_ << line.dump() << '\n';
      out_.flush();
    }
    entries_.emplace(digest, std::move(e));
  }

  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    json request;
    ModelResponse response;
    std::string backend;
  };
  std::map<std::string, Entry> entries_;
  std::ofstream out_;
};

struct GatewayLogRecord {
  std::int64_t seq = 0;
  std::string digest;
  RequestKind kind = RequestKind::chat;
  RoleTag role = RoleTag::planner;
  std::optional<std::string> agent_id;
  int step = 0;
  std::string prompt;
  std::string backend_id;
  bool cache_hit = false;
  std::int64_t latency_ms = 0;
  std::string error;
};

enum class GatewayMode { direct, record, replay };

/// Single entry point for model queries. Thread-safe; every invoke (successful or
/// not) appends exactly one log record.
class Gateway {
 public:
  /// Calls go straight to `backend`.
  explicit Gateway(std::shared_ptr<ModelBackend> backend) : backend_(std::move(backend)) {
    dim_ = backend_->embedding_dim();
  }

  /// Record mode: calls go to `backend`, responses are appended to `cache_file`.
  /// Repeated requests are served from the recording so a replay sees the same answers.
  static Gateway recording(std::shared_ptr<ModelBackend> backend, const std::filesystem::path& cache_file) {
    Gateway g(std::move(backend));
    g.mode_ = GatewayMode::record;
    g.cache_.open_for_append(cache_file);
    return g;
  }

  /// Replay mode: only the recording is consulted; a miss is an error.
  static Gateway replaying(const std::filesystem::path& cache_file, std::size_t embedding_dim) {
    Gateway g;
    g.mode_ = GatewayMode::replay;
    g.dim_ = embedding_dim;
    if (!std::filesystem::exists(cache_file))
      throw Error(ErrorCode::ReplayMiss, "no recording at " + cache_file.string());
    g.cache_ = ResponseCache::load(cache_file);
    return g;
  }

  Gateway(Gateway&& other) noexcept
      : backend_(std::move(other.backend_)),
        mode_(other.mode_),
        dim_(other.dim_),
        cache_(std::move(other.cache_)),
        log_(std::move(other.log_)),
        live_calls_(other.live_calls_.load()) {}

  ModelResponse invoke(const ModelRequest& req) {
    req.validate();
    const std::string digest = request_hash(req);
    ModelResponse resp;
    std::string error;
    try {
      resp = dispatch(req, digest);
      check_shape(req, resp);
    } catch (const Error& e) {
      error = e.what();
      append_log(req, digest, resp, error);
      throw;
    }
    append_log(req, digest, resp, error);
    return resp;
  }

  std::string chat(const ModelRequest& req) { return invoke(req).text_or_empty(); }

  std::vector<double> embed(const ModelRequest& req) { return *invoke(req).vector; }

  GatewayMode mode() const { return mode_; }
  std::size_t embedding_dim() const { return dim_; }
  std::int64_t live_calls() const { return live_calls_.load(); }

  std::vector<GatewayLogRecord> log() const {
    std::lock_guard lock(log_mutex_);
    return log_;
  }

  std::size_t log_size() const {
    std::lock_guard lock(log_mutex_);
    return log_.size();
  }

  void write_log(const std::filesystem::path& path) const {
    std::string out;
    for (const auto& r : log()) {
      json j = {{"seq", r.seq},          {"digest", r.digest},         {"kind", to_string(r.kind)},
                {"role", to_string(r.role)}, {"step", r.step},          {"backend", r.backend_id},
                {"cache_hit", r.cache_hit}, {"latency_ms", r.latency_ms}};
      if (r.agent_id) j["agent"] = *r.agent_id;
      if (!r.error.empty()) j["error"] = r.error;
      out += j.dump() + "\n";
    }
    write_file(path, out);
  }

 private:
  Gateway() = default;

  ModelResponse dispatch(const ModelRequest& req, const std::string& digest) {
    if (mode_ != GatewayMode::direct) {
      std::lock_guard lock(cache_mutex_);
      if (const ModelResponse* hit = cache_.find(digest)) {
        ModelResponse r = *hit;
        r.cache_hit = true;
        r.latency_ms = 0;
        if (r.backend_id.empty()) r.backend_id = "cache";
        return r;
      }
      if (mode_ == GatewayMode::replay) {
        throw Error(ErrorCode::ReplayMiss, "no recorded response for " + to_string(req.role) + " " +
                                               to_string(req.kind) + " request: " + req.prompt.substr(0, 120));
      }
    }
    if (backend_->is_live()) ++live_calls_;
    ModelResponse r = backend_->invoke(req);
    if (mode_ == GatewayMode::record) {
      std::lock_guard lock(cache_mutex_);
      cache_.put(digest, req, r);
    }
    return r;
  }

  void check_shape(const ModelRequest& req, const ModelResponse& resp) const {
    if (req.kind == RequestKind::embed) {
      if (!resp.vector || resp.text) throw Error(ErrorCode::MalformedResponse, "embed request answered without a vector");
      if (resp.vector->size() != dim_)
        throw Error(ErrorCode::MalformedResponse, "embedding has dimension " + std::to_string(resp.vector->size()) +
                                                      ", expected " + std::to_string(dim_));
    } else if (!resp.text || resp.vector) {
      throw Error(ErrorCode::MalformedResponse, "chat request answered without text");
    }
  }

  void append_log(const ModelRequest& req, const std::string& digest, const ModelResponse& resp,
                  const std::string& error) {
    std::lock_guard lock(log_mutex_);
    GatewayLogRecord r;
    r.seq = static_cast<std::int64_t>(log_.size());
    r.digest = digest;
    r.kind = req.kind;
    r.role = req.role;
    r.agent_id = req.agent_id;
    r.step = req.step;
    r.prompt = req.prompt;
    r.backend_id = resp.backend_id;
    r.cache_hit = resp.cache_hit;
    r.latency_ms = resp.latency_ms;
    r.error = error;
    log_.push_back(std::move(r));
  }

  std::shared_ptr<ModelBackend> backend_;
  GatewayMode mode_ = GatewayMode::direct;
  std::size_t dim_ = 256;
  ResponseCache cache_;
  std::mutex cache_mutex_;
  mutable std::mutex log_mutex_;
  std::vector<GatewayLogRecord> log_;
  std::atomic<std::int64_t> live_calls_{0};
};

/// Backend selection as it appears in run configs and on the command line.
struct BackendConfig {
  std::string kind = "mock";  // mock | live | replay
  std::optional<std::filesystem::path> script_file;
  std::optional<ScriptedBehavior> script;
  std::optional<std::filesystem::path> record_dir;
  std::optional<std::filesystem::path> replay_dir;
  LiveConfig live;
  std::size_t embedding_dim = 256;

  static BackendConfig from_json(const json& j, const std::filesystem::path& base_dir = {}) {
    BackendConfig c;
    c.kind = j.value("kind", c.kind);
    if (j.contains("script")) c.script_file = base_dir / j.at("script").get<std::string>();
    if (j.contains("record_dir")) c.record_dir = base_dir / j.at("record_dir").get<std::string>();
    if (j.contains("replay_dir")) c.replay_dir = base_dir / j.at("replay_dir").get<std::string>();
    if (j.contains("live")) c.live = LiveConfig::from_json(j.at("live"));
    c.embedding_dim = j.value("embedding_dim", c.kind == "live" ? c.live.embedding_dim : c.embedding_dim);
    return c;
  }
};

inline Gateway make_gateway(const BackendConfig& config) {
  if (config.kind == "replay") {
    if (!config.replay_dir) throw Error(ErrorCode::ConfigError, "replay backend needs a recording directory");
    return Gateway::replaying(*config.replay_dir / kCacheFileName, config.embedding_dim);
  }
  std::shared_ptr<ModelBackend> backend;
  if (config.kind == "mock") {
    ScriptedBehavior behavior;
    if (config.script) {
      behavior = *config.script;
    } else if (config.script_file) {
      behavior = ScriptedBehavior::load(*config.script_file);
    }
    backend = std::make_shared<ScriptedBackend>(std::move(behavior), config.embedding_dim);
  } else if (config.kind == "live") {
    LiveConfig live = config.live;
    live.embedding_dim = config.embedding_dim;
    backend = std::make_shared<LiveBackend>(std::move(live));
  } else {
    throw Error(ErrorCode::ConfigError, "unknown backend '" + config.kind + "'");
  }
  if (config.record_dir) return Gateway::recording(std::move(backend), *config.record_dir / kCacheFileName);
  return Gateway(std::move(backend));
}

}  // namespace agentsafe

#pragma once

#include <chrono>
#include <cstdlib>
#include <optional>
#include <string>

#include <httplib.h>

#include "agentsafe/core/image_store.hpp"
#include "agentsafe/gateway/backend.hpp"

namespace agentsafe {

/// Settings for an OpenAI-compatible chat-completions / embeddings endpoint.
struct LiveConfig {
  std::string base_url = "https://api.openai.com";
  std::string chat_path = "/v1/chat/completions";
  std::string embed_path = "/v1/embeddings";
  std::string chat_model = "gpt-4o-mini";
  std::string embed_model = "text-embedding-3-small";
  std::string api_key_env = "OPENAI_API_KEY";
  double temperature = 0.0;
  int max_tokens = 512;
  int timeout_seconds = 60;
  std::size_t embedding_dim = 1536;
  std::string image_dir = "images";

  static LiveConfig from_json(const json& j) {
    LiveConfig c;
    c.base_url = j.value("base_url", c.base_url);
    c.chat_path = j.value("chat_path", c.chat_path);
    c.embed_path = j.value("embed_path", c.embed_path);
    c.chat_model = j.value("chat_model", c.chat_model);
    c.embed_model = j.value("embed_model", c.embed_model);
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.temperature = j.value("temperature", c.temperature);
    c.max_tokens = j.value("max_tokens", c.max_tokens);
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
    c.embedding_dim = j.value("embedding_dim", c.embedding_dim);
    c.image_dir = j.value("image_dir", c.image_dir);
    return c;
  }
};

class LiveBackend : public ModelBackend {
 public:
  explicit LiveBackend(LiveConfig config) : config_(std::move(config)), images_(config_.image_dir) {
    if (const char* key = std::getenv(config_.api_key_env.c_str())) api_key_ = key;
  }

  ModelResponse invoke(const ModelRequest& req) override {
    const auto t0 = std::chrono::steady_clock::now();
    ModelResponse resp = req.kind == RequestKind::embed ? embed(req) : chat(req);
    resp.backend_id = id();
    resp.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    return resp;
  }

  std::string id() const override { return "live:" + config_.chat_model; }
  std::size_t embedding_dim() const override { return config_.embedding_dim; }
  bool is_live() const override { return true; }

 private:
  json post(const std::string& path, const json& body) const {
    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) {
      throw Error(ErrorCode::BackendUnreachable,
                  config_.base_url + path + ": " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw Error(ErrorCode::BackendUnreachable,
                  config_.base_url + path + " returned HTTP " + std::to_string(res->status));
    }
    try {
      return json::parse(res->body);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedResponse, std::string("response is not JSON: ") + e.what());
    }
  }

  ModelResponse chat(const ModelRequest& req) const {
    json content = json::array();
    content.push_back({{"type", "text"}, {"text", req.prompt}});
    for (const auto& ref : req.image_refs) {
      const auto bytes = images_.get(ref);
      if (!bytes) throw Error(ErrorCode::InvalidRequest, "image " + ref + " not in store " + images_.root().string());
      content.push_back({{"type", "image_url"},
                         {"image_url", {{"url", "data:image/jpeg;base64," + base64_encode(*bytes)}}}});
    }
    json body = {{"model", config_.chat_model},
                 {"temperature", config_.temperature},
                 {"max_tokens", config_.max_tokens},
                 {"messages", json::array({{{"role", "user"}, {"content", content}}})}};
    const json reply = post(config_.chat_path, body);
    ModelResponse resp;
    try {
      resp.text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedResponse, std::string("chat reply missing content: ") + e.what());
    }
    return resp;
  }

  ModelResponse embed(const ModelRequest& req) const {
    json body = {{"model", config_.embed_model}, {"input", req.prompt}};
    const json reply = post(config_.embed_path, body);
    ModelResponse resp;
    try {
      resp.vector = reply.at("data").at(0).at("embedding").get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedResponse, std::string("embedding reply missing vector: ") + e.what());
    }
    return resp;
  }

  LiveConfig config_;
  ImageStore images_;
  std::string api_key_;
};

}  // namespace agentsafe

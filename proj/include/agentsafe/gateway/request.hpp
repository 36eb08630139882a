#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agentsafe/core/digest.hpp"
#include "agentsafe/core/error.hpp"
#include "agentsafe/core/json_io.hpp"

namespace agentsafe {

enum class RequestKind { chat, vision_chat, embed };

/// Subsystem that issued a request. Closed set.
enum class RoleTag { planner, judge, social, reflection, dataset };

inline constexpr RoleTag kAllRoles[] = {RoleTag::planner, RoleTag::judge, RoleTag::social, RoleTag::reflection,
                                        RoleTag::dataset};

inline std::string to_string(RequestKind k) {
  switch (k) {
    case RequestKind::chat: return "chat";
    case RequestKind::vision_chat: return "vision-chat";
    case RequestKind::embed: return "embed";
  }
  return "?";
}

inline RequestKind parse_request_kind(std::string_view s) {
  if (s == "chat") return RequestKind::chat;
  if (s == "vision-chat") return RequestKind::vision_chat;
  if (s == "embed") return RequestKind::embed;
  throw Error(ErrorCode::InvalidRequest, "unknown request kind '" + std::string(s) + "'");
}

inline std::string to_string(RoleTag r) {
  switch (r) {
    case RoleTag::planner: return "planner";
    case RoleTag::judge: return "judge";
    case RoleTag::social: return "social";
    case RoleTag::reflection: return "reflection";
    case RoleTag::dataset: return "dataset";
  }
  return "?";
}

inline RoleTag parse_role_tag(std::string_view s) {
  for (RoleTag r : kAllRoles) {
    if (to_string(r) == s) return r;
  }
  throw Error(ErrorCode::InvalidRequest, "unknown role tag '" + std::string(s) + "'");
}

struct ModelRequest {
  RequestKind kind = RequestKind::chat;
  std::string prompt;
  std::vector<std::string> image_refs;
  RoleTag role = RoleTag::planner;
  // Metadata; excluded from the request hash.
  std::optional<std::string> agent_id;
  int step = 0;

  void validate() const {
    if (kind == RequestKind::vision_chat && image_refs.empty())
      throw Error(ErrorCode::InvalidRequest, "vision-chat request needs at least one image ref");
    if (kind == RequestKind::embed && !image_refs.empty())
      throw Error(ErrorCode::InvalidRequest, "embed request must not carry image refs");
  }

  static ModelRequest chat(RoleTag role, std::string prompt) {
    return ModelRequest{RequestKind::chat, std::move(prompt), {}, role, std::nullopt, 0};
  }
  static ModelRequest vision(RoleTag role, std::string prompt, std::vector<std::string> images) {
    return ModelRequest{RequestKind::vision_chat, std::move(prompt), std::move(images), role, std::nullopt, 0};
  }
  static ModelRequest embed(RoleTag role, std::string text) {
    return ModelRequest{RequestKind::embed, std::move(text), {}, role, std::nullopt, 0};
  }

  ModelRequest& by(std::string agent) {
    agent_id = std::move(agent);
    return *this;
  }
  ModelRequest& at(int s) {
    step = s;
    return *this;
  }
};

struct ModelResponse {
  std::optional<std::string> text;
  std::optional<std::vector<double>> vector;
  std::string backend_id;
  bool cache_hit = false;
  std::int64_t latency_ms = 0;

  const std::string& text_or_empty() const {
    static const std::string kEmpty;
    return text ? *text : kEmpty;
  }
};

/// The semantic part of a request: what the hash covers and what the cache stores.
inline json request_summary(const ModelRequest& req) {
  return json{{"kind", to_string(req.kind)},
              {"role", to_string(req.role)},
              {"prompt", req.prompt},
              {"images", req.image_refs}};
}

/// Hex SHA-256 of the canonical (sorted-key) serialization of the request summary.
/// Step and agent id are deliberately not part of the digest.
inline std::string request_hash(const ModelRequest& req) { return sha256_hex(request_summary(req).dump()); }

inline json response_payload(const ModelResponse& resp) {
  json j = json::object();
  if (resp.text) j["text"] = *resp.text;
  if (resp.vector) j["vector"] = *resp.vector;
  return j;
}

inline ModelResponse response_from_payload(const json& j) {
  ModelResponse r;
  if (j.contains("text")) r.text = j.at("text").get<std::string>();
  if (j.contains("vector")) r.vector = j.at("vector").get<std::vector<double>>();
  return r;
}

}  // namespace agentsafe

#pragma once

#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "agentsafe/core/rng.hpp"
#include "agentsafe/gateway/backend.hpp"

namespace agentsafe {

struct ScriptRule {
  RoleTag role = RoleTag::planner;
  std::optional<RequestKind> kind;  // unset: any chat kind
  std::string pattern;
  std::vector<std::string> responses;
  // Treat responses as regex format strings ($1, $& ...) over the match.
  bool templated = false;
  std::regex compiled;
};

/// Declarative mock behavior: ordered rules (first match wins) plus one default
/// reply per role tag.
struct ScriptedBehavior {
  std::vector<ScriptRule> rules;
  std::map<RoleTag, std::string> defaults;
  std::uint64_t seed = 0;

  static std::string builtin_default(RoleTag role) {
    switch (role) {
      case RoleTag::planner: return "SAFE: no change needed";
      case RoleTag::judge: return "ACTIVITY KEEP: no safety concern found";
      case RoleTag::social: return "";
      case RoleTag::reflection: return "3";
      case RoleTag::dataset: return "";
    }
    return "";
  }

  ScriptedBehavior& add(RoleTag role, std::string pattern, std::string response) {
    ScriptRule r;
    r.role = role;
    r.pattern = std::move(pattern);
    r.responses = {std::move(response)};
    r.compiled = std::regex(r.pattern, std::regex::ECMAScript | std::regex::icase);
    rules.push_back(std::move(r));
    return *this;
  }

  ScriptedBehavior& add_choice(RoleTag role, std::string pattern, std::vector<std::string> responses) {
    add(role, std::move(pattern), "");
    rules.back().responses = std::move(responses);
    return *this;
  }

  ScriptedBehavior& set_default(RoleTag role, std::string response) {
    defaults[role] = std::move(response);
    return *this;
  }

  const std::string& default_for(RoleTag role) const {
    static const std::map<RoleTag, std::string> kBuiltin = [] {
      std::map<RoleTag, std::string> m;
      for (RoleTag r : kAllRoles) m[r] = builtin_default(r);
      return m;
    }();
    const auto it = defaults.find(role);
    return it != defaults.end() ? it->second : kBuiltin.at(role);
  }

  /// {"seed": 1, "rules": [{"role","pattern","response"|"responses","kind"?,"template"?}],
  ///  "defaults": {"judge": "..."}}
  static ScriptedBehavior from_json(const json& j) {
    ScriptedBehavior b;
    try {
      b.seed = j.value("seed", std::uint64_t{0});
      for (const auto& rj : j.value("rules", json::array())) {
        ScriptRule r;
        r.role = parse_role_tag(rj.at("role").get<std::string>());
        if (rj.contains("kind")) r.kind = parse_request_kind(rj.at("kind").get<std::string>());
        r.pattern = rj.at("pattern").get<std::string>();
        if (rj.contains("responses")) {
          r.responses = rj.at("responses").get<std::vector<std::string>>();
        } else {
          r.responses = {rj.at("response").get<std::string>()};
        }
        if (r.responses.empty()) throw Error(ErrorCode::ConfigError, "rule '" + r.pattern + "' has no responses");
        r.templated = rj.value("template", false);
        const bool icase = rj.value("icase", true);
        r.compiled = std::regex(r.pattern, icase ? std::regex::ECMAScript | std::regex::icase : std::regex::ECMAScript);
        b.rules.push_back(std::move(r));
      }
      if (j.contains("defaults")) {
        for (const auto& [role, text] : j.at("defaults").items()) b.defaults[parse_role_tag(role)] = text.get<std::string>();
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ConfigError, std::string("script: ") + e.what());
    } catch (const std::regex_error& e) {
      throw Error(ErrorCode::ConfigError, std::string("script pattern: ") + e.what());
    }
    return b;
  }

  static ScriptedBehavior load(const std::filesystem::path& path) { return from_json(load_json(path)); }
};

/// Deterministic unit vector seeded from the digest of the text.
inline std::vector<double> hashed_unit_vector(std::string_view text, std::size_t dim, std::uint64_t seed) {
  Rng rng(derive_seed(seed, text));
  std::vector<double> v(dim);
  double norm = 0.0;
  for (auto& x : v) {
    x = rng.normal();
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;
  return v;
}

/// Pure function of (request, script, seed).
class ScriptedBackend : public ModelBackend {
 public:
  explicit ScriptedBackend(ScriptedBehavior behavior, std::size_t embedding_dim = 256)
      : behavior_(std::move(behavior)), dim_(embedding_dim) {}

  ModelResponse invoke(const ModelRequest& req) override {
    ModelResponse resp;
    resp.backend_id = id();
    if (req.kind == RequestKind::embed) {
      resp.vector = hashed_unit_vector(req.prompt, dim_, behavior_.seed);
      return resp;
    }
    // Image refs become opaque tokens so rules can branch on image identity.
    std::string input = req.prompt;
    for (const auto& ref : req.image_refs) input += "\n[image:" + ref + "]";

    for (const auto& rule : behavior_.rules) {
      if (rule.role != req.role) continue;
      if (rule.kind && *rule.kind != req.kind) continue;
      std::smatch m;
      if (!std::regex_search(input, m, rule.compiled)) continue;
      const std::string& chosen = pick(rule.responses, req);
      resp.text = rule.templated ? m.format(chosen) : chosen;
      return resp;
    }
    resp.text = behavior_.default_for(req.role);
    return resp;
  }

  std::string id() const override { return "scripted"; }
  std::size_t embedding_dim() const override { return dim_; }
  const ScriptedBehavior& behavior() const { return behavior_; }

 private:
  const std::string& pick(const std::vector<std::string>& options, const ModelRequest& req) const {
    if (options.size() == 1) return options.front();
    const auto idx = derive_seed(behavior_.seed, request_hash(req)) % options.size();
    return options[idx];
  }

  ScriptedBehavior behavior_;
  std::size_t dim_;
};

}  // namespace agentsafe

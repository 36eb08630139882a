#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "agentsafe/gateway/gateway.hpp"

namespace agentsafe {

/// Memoizing front for embedding requests. The embedding ref of a text is the
/// digest of its embed request, which is also its key in a gateway recording.
class Embedder {
 public:
  Embedder(Gateway& gateway, RoleTag role = RoleTag::reflection) : gateway_(gateway), role_(role) {}

  struct Embedded {
    std::string ref;
    std::vector<double> vector;
  };

  Embedded embed(const std::string& text, const std::string& agent_id = {}, int step = 0) {
    ModelRequest req = ModelRequest::embed(role_, text);
    const std::string ref = request_hash(req);
    {
      std::lock_guard lock(mutex_);
      if (auto it = memo_.find(ref); it != memo_.end()) return {ref, it->second};
    }
    if (!agent_id.empty()) req.by(agent_id);
    req.at(step);
    auto vec = gateway_.embed(req);
    std::lock_guard lock(mutex_);
    memo_.emplace(ref, vec);
    return {ref, std::move(vec)};
  }

  Gateway& gateway() { return gateway_; }

 private:
  Gateway& gateway_;
  RoleTag role_;
  std::mutex mutex_;
  std::map<std::string, std::vector<double>> memo_;
};

inline double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace agentsafe

#pragma once

#include <cstddef>
#include <string>

#include "agentsafe/gateway/request.hpp"

namespace agentsafe {

class ModelBackend {
 public:
  virtual ~ModelBackend() = default;
  virtual ModelResponse invoke(const ModelRequest& req) = 0;
  virtual std::string id() const = 0;
  virtual std::size_t embedding_dim() const = 0;
  // Live backends count toward the live-call counter.
  virtual bool is_live() const { return false; }
};

}  // namespace agentsafe

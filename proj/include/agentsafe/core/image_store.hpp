#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "agentsafe/core/digest.hpp"
#include "agentsafe/core/json_io.hpp"

namespace agentsafe {

/// Content-addressed blob directory: <root>/<ref[0:2]>/<ref>. The ref is the
/// hex SHA-256 of the bytes.
class ImageStore {
 public:
  explicit ImageStore(std::filesystem::path root) : root_(std::move(root)) {}

  std::string put(std::string_view bytes) const {
    const std::string ref = sha256_hex(bytes);
    const auto path = path_for(ref);
    if (!std::filesystem::exists(path)) write_file(path, bytes);
    return ref;
  }

  std::optional<std::string> get(const std::string& ref) const {
    const auto path = path_for(ref);
    if (!std::filesystem::exists(path)) return std::nullopt;
    return read_file(path);
  }

  std::filesystem::path path_for(const std::string& ref) const {
    return root_ / ref.substr(0, 2) / ref;
  }

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
};

}  // namespace agentsafe

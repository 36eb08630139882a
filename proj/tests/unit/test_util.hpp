#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <thread>

#include <unistd.h>

#include <gtest/gtest.h>
#include <httplib.h>

#include "agentsafe/agentsafe.hpp"

namespace testutil {

namespace fs = std::filesystem;

inline fs::path data_dir() { return fs::path(AGENTSAFE_DATA_DIR); }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("agentsafe-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

/// httplib server on an ephemeral localhost port, running on its own thread.
class LocalServer {
 public:
  httplib::Server server;

  void start() {
    port_ = server.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~LocalServer() {
    server.stop();
    if (thread_.joinable()) thread_.join();
  }
  int port() const { return port_; }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  int port_ = 0;
  std::thread thread_;
};

inline agentsafe::SimConfig default_config() {
  return agentsafe::SimConfig::load(data_dir() / "configs" / "default.json");
}

template <typename F>
agentsafe::ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const agentsafe::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an agentsafe::Error";
  return agentsafe::ErrorCode::IoError;
}

}  // namespace testutil

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "agentsafe/sim/simulator.hpp"

namespace agentsafe {

struct LogDiff {
  bool identical = true;
  std::size_t index = 0;  // first differing line
  std::optional<std::string> expected;
  std::optional<std::string> actual;
};

inline LogDiff diff_logs(const std::vector<std::string>& expected, const std::vector<std::string>& actual) {
  LogDiff d;
  const std::size_t n = std::min(expected.size(), actual.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (expected[i] != actual[i]) {
      d.identical = false;
      d.index = i;
      d.expected = expected[i];
      d.actual = actual[i];
      return d;
    }
  }
  if (expected.size() != actual.size()) {
    d.identical = false;
    d.index = n;
    if (n < expected.size()) d.expected = expected[n];
    if (n < actual.size()) d.actual = actual[n];
  }
  return d;
}

struct ReplayVerdict {
  LogDiff diff;
  std::size_t recorded_events = 0;
  std::size_t replayed_events = 0;
  std::optional<std::string> first_gateway_error;

  bool identical() const { return diff.identical; }
};

/// Re-executes a recorded run against its gateway recording and compares the
/// resulting log with the original line by line.
inline ReplayVerdict replay_run(const std::vector<SimEvent>& recorded, const std::filesystem::path& record_dir) {
  if (recorded.empty()) throw Error(ErrorCode::EmptyLog, "nothing to replay");
  const auto& start = recorded.front();
  if (start.type != "run_start" || start.data.value("schema", "") != kRunLogSchema)
    throw Error(ErrorCode::SchemaMismatch, "run log does not start with a supported run_start event");
  const json& cfg = start.data.at("config");
  SimConfig config = SimConfig::from_json(cfg);
  config.backend = BackendConfig{};
  config.backend.kind = "replay";
  config.backend.replay_dir = record_dir;
  config.backend.embedding_dim = cfg.at("embedding_dim");

  Simulator sim(std::move(config));
  sim.run();

  std::vector<std::string> expected;
  for (const auto& e : recorded) expected.push_back(e.line());
  ReplayVerdict v;
  v.diff = diff_logs(expected, sim.log().lines());
  v.recorded_events = expected.size();
  v.replayed_events = sim.log().events().size();
  for (const auto& r : sim.gateway().log())
    if (!r.error.empty()) {
      v.first_gateway_error = r.error;
      break;
    }
  return v;
}

}  // namespace agentsafe

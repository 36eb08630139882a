#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "agentsafe/core/clock.hpp"
#include "agentsafe/gateway/gateway.hpp"
#include "agentsafe/planner/planner.hpp"
#include "agentsafe/social/social.hpp"

namespace agentsafe {

struct SimConfig {
  int total_steps = 600;
  int step_seconds = 60;
  int revision_cadence = 50;
  int snapshot_cadence = 10;
  int agent_count = 5;
  std::uint64_t seed = 0;
  TimeWindow window = TimeWindow::evening();
  std::filesystem::path world_file;
  std::string scenario_id;
  std::filesystem::path scenario_dir;
  std::vector<std::filesystem::path> persona_files;
  // Agents that play a different scenario than the shared one.
  std::map<std::string, std::string> scenario_overrides;
  BackendConfig backend;
  PlannerConfig planner;
  SocialConfig social;
  std::size_t max_in_flight = 5;
  std::size_t perceive_memory_k = 5;
  std::optional<std::filesystem::path> log_file;

  void validate() const {
    if (total_steps < 1) throw Error(ErrorCode::ConfigError, "total_steps must be >= 1");
    if (step_seconds < 1) throw Error(ErrorCode::ConfigError, "step_seconds must be >= 1");
    if (revision_cadence < 1 || snapshot_cadence < 1) throw Error(ErrorCode::ConfigError, "cadences must be >= 1");
    if (agent_count < 1) throw Error(ErrorCode::ConfigError, "agent_count must be >= 1");
    if (static_cast<std::size_t>(agent_count) > persona_files.size())
      throw Error(ErrorCode::ConfigError, "agent_count " + std::to_string(agent_count) + " exceeds the " +
                                              std::to_string(persona_files.size()) + " persona files");
    if (max_in_flight < 1) throw Error(ErrorCode::ConfigError, "max_in_flight must be >= 1");
    if (planner.override_threshold < 1) throw Error(ErrorCode::ConfigError, "override_threshold must be >= 1");
    if (social.max_turns < 1) throw Error(ErrorCode::ConfigError, "max_turns must be >= 1");
    if (social.chat_probability < 0.0 || social.chat_probability > 1.0)
      throw Error(ErrorCode::ConfigError, "chat_probability must lie in [0, 1]");
    window.validate();
    const long long span = static_cast<long long>(total_steps) * step_seconds;
    if (span > 60LL * window.length_minutes() + step_seconds)
      throw Error(ErrorCode::ConfigError, "run of " + std::to_string(span) + " s overruns window " + window.str());
    if (world_file.empty()) throw Error(ErrorCode::ConfigError, "world file missing");
    if (scenario_id.empty()) throw Error(ErrorCode::ConfigError, "scenario id missing");
  }

  /// Everything that determines a run except the backend selection; written
  /// into the run log so a replay can rebuild the run.
  json to_json() const {
    std::vector<std::string> personas;
    for (const auto& p : persona_files) personas.push_back(p.string());
    json j{{"total_steps", total_steps},
           {"step_seconds", step_seconds},
           {"revision_cadence", revision_cadence},
           {"snapshot_cadence", snapshot_cadence},
           {"agent_count", agent_count},
           {"seed", seed},
           {"window", window.str()},
           {"world", world_file.string()},
           {"scenario", scenario_id},
           {"scenario_dir", scenario_dir.string()},
           {"personas", personas},
           {"scenario_overrides", scenario_overrides},
           {"max_in_flight", max_in_flight},
           {"perceive_memory_k", perceive_memory_k},
           {"embedding_dim", backend.embedding_dim},
           {"planner",
            {{"override_threshold", planner.override_threshold},
             {"retrieve_k", planner.retrieve_k},
             {"weights", weights_json(planner.weights)}}},
           {"social",
            {{"max_turns", social.max_turns},
             {"energy_floor", social.energy_floor},
             {"chat_probability", social.chat_probability},
             {"recovery_per_step", social.recovery_per_step},
             {"retrieve_k", social.retrieve_k},
             {"embedding_fallback", social.embedding_fallback},
             {"embedding_threshold", social.embedding_threshold}}}};
    return j;
  }

  /// Relative paths resolve against `base_dir` (the config file's directory).
  static SimConfig from_json(const json& j, const std::filesystem::path& base_dir = {}) {
    SimConfig c;
    try {
      auto path = [&](const std::string& p) {
        const std::filesystem::path raw(p);
        return raw.is_absolute() || base_dir.empty() ? raw : (base_dir / raw).lexically_normal();
      };
      c.total_steps = j.value("total_steps", c.total_steps);
      c.step_seconds = j.value("step_seconds", c.step_seconds);
      c.revision_cadence = j.value("revision_cadence", c.revision_cadence);
      c.snapshot_cadence = j.value("snapshot_cadence", c.snapshot_cadence);
      c.agent_count = j.value("agent_count", c.agent_count);
      c.seed = j.value("seed", c.seed);
      if (j.contains("window")) c.window = TimeWindow::parse(j.at("window").get<std::string>());
      c.world_file = path(j.at("world").get<std::string>());
      c.scenario_id = j.at("scenario").get<std::string>();
      c.scenario_dir = path(j.value("scenario_dir", std::string(".")));
      for (const auto& p : j.at("personas")) c.persona_files.push_back(path(p.get<std::string>()));
      c.scenario_overrides = j.value("scenario_overrides", c.scenario_overrides);
      c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
      c.perceive_memory_k = j.value("perceive_memory_k", c.perceive_memory_k);
      if (j.contains("backend")) c.backend = BackendConfig::from_json(j.at("backend"), base_dir);
      c.backend.embedding_dim = j.value("embedding_dim", c.backend.embedding_dim);
      if (j.contains("planner")) {
        const auto& p = j.at("planner");
        c.planner.override_threshold = p.value("override_threshold", c.planner.override_threshold);
        c.planner.retrieve_k = p.value("retrieve_k", c.planner.retrieve_k);
        if (p.contains("weights")) c.planner.weights = weights_from_json(p.at("weights"));
      }
      if (j.contains("social")) {
        const auto& s = j.at("social");
        c.social.max_turns = s.value("max_turns", c.social.max_turns);
        c.social.energy_floor = s.value("energy_floor", c.social.energy_floor);
        c.social.chat_probability = s.value("chat_probability", c.social.chat_probability);
        c.social.recovery_per_step = s.value("recovery_per_step", c.social.recovery_per_step);
        c.social.retrieve_k = s.value("retrieve_k", c.social.retrieve_k);
        c.social.embedding_fallback = s.value("embedding_fallback", c.social.embedding_fallback);
        c.social.embedding_threshold = s.value("embedding_threshold", c.social.embedding_threshold);
      }
      if (j.contains("log_file")) c.log_file = path(j.at("log_file").get<std::string>());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ConfigError, std::string("bad config: ") + e.what());
    }
    c.validate();
    return c;
  }

  static SimConfig load(const std::filesystem::path& file) {
    const json j = load_json(file, ErrorCode::ConfigError);
    return from_json(j, file.parent_path());
  }

  static json weights_json(const RetrievalWeights& w) {
    return json{{"recency", w.recency}, {"importance", w.importance}, {"relevance", w.relevance}, {"decay", w.decay}};
  }

  static RetrievalWeights weights_from_json(const json& j) {
    RetrievalWeights w;
    w.recency = j.value("recency", w.recency);
    w.importance = j.value("importance", w.importance);
    w.relevance = j.value("relevance", w.relevance);
    w.decay = j.value("decay", w.decay);
    return w;
  }
};

/// Simulated clock: wall time = window start + step * step_seconds.
struct SimClock {
  TimeWindow window;
  int step_seconds = 60;

  long long offset_seconds(int step) const { return static_cast<long long>(step) * step_seconds; }

  ClockTime wall_time(int step) const {
    if (step < 0) throw Error(ErrorCode::InvalidRequest, "negative step");
    return window.start.plus_minutes(offset_seconds(step) / 60);
  }

  /// Step at which the wall clock first reads `t` (rounded up to a whole step).
  int step_at(ClockTime t) const {
    const int off = window.offset_of(t);
    if (off < 0) throw Error(ErrorCode::OutOfWindow, t.str() + " is outside " + window.str());
    return static_cast<int>((60LL * off + step_seconds - 1) / step_seconds);
  }

  /// Hour label of the slot active at `step`.
  ClockTime slot_label(int step) const {
    const long long max_off = 60LL * window.length_minutes();
    const long long off = std::min(offset_seconds(step), max_off);
    return window.start.plus_minutes(60 * (off / 3600));
  }
};

}  // namespace agentsafe

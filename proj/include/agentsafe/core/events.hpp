#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "agentsafe/core/json_io.hpp"

namespace agentsafe {

inline constexpr const char* kRunLogSchema = "agentsafe.runlog/1";

/// One entry of the append-only run log. `data` holds the type-specific fields;
/// serialization flattens them next to seq/step/type with sorted keys.
struct SimEvent {
  std::int64_t seq = 0;
  int step = 0;
  std::string type;
  json data = json::object();

  json to_json() const {
    json j = data;
    j["seq"] = seq;
    j["step"] = step;
    j["type"] = type;
    return j;
  }

  std::string line() const { return to_json().dump(); }

  static SimEvent from_json(const json& j) {
    SimEvent e;
    e.seq = j.at("seq").get<std::int64_t>();
    e.step = j.at("step").get<int>();
    e.type = j.at("type").get<std::string>();
    e.data = j;
    e.data.erase("seq");
    e.data.erase("step");
    e.data.erase("type");
    return e;
  }
};

/// Destination for events produced by library operations. Sequence numbers are
/// assigned by the sink so that buffered events get their numbers at commit time.
class EventSink {
 public:
  virtual ~EventSink() = default;
  virtual void emit(int step, std::string type, json data) = 0;
};

/// Collects events without numbering them; used for per-agent work that is
/// committed later in a fixed order.
class EventBuffer : public EventSink {
 public:
  void emit(int step, std::string type, json data) override {
    pending_.push_back(SimEvent{0, step, std::move(type), std::move(data)});
  }

  void drain_into(EventSink& sink) {
    for (auto& e : pending_) sink.emit(e.step, std::move(e.type), std::move(e.data));
    pending_.clear();
  }

  const std::vector<SimEvent>& pending() const { return pending_; }

 private:
  std::vector<SimEvent> pending_;
};

/// Append-only run log. Optionally mirrors each line to a file as it is written
/// and notifies a listener (the metrics aggregator) after each append.
class RunLog : public EventSink {
 public:
  RunLog() = default;

  explicit RunLog(std::int64_t next_seq) : next_seq_(next_seq) {}

  void open_file(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw Error(ErrorCode::IoError, "cannot write run log " + path.string());
  }

  void set_listener(std::function<void(const SimEvent&)> listener) { listener_ = std::move(listener); }

  void emit(int step, std::string type, json data) override {
    SimEvent e{next_seq_++, step, std::move(type), std::move(data)};
    if (file_.is_open()) {
      file_ << e.line() << '\n';
      file_.flush();
    }
    events_.push_back(std::move(e));
    if (listener_) listener_(events_.back());
  }

  /// Re-installs already numbered events (resume); the listener is not notified.
  void preload(std::vector<SimEvent> events) {
    for (auto& e : events) {
      if (file_.is_open()) file_ << e.line() << '\n';
      next_seq_ = e.seq + 1;
      events_.push_back(std::move(e));
    }
    if (file_.is_open()) file_.flush();
  }

  const std::vector<SimEvent>& events() const { return events_; }
  std::int64_t next_seq() const { return next_seq_; }

  std::vector<std::string> lines() const {
    std::vector<std::string> out;
    out.reserve(events_.size());
    for (const auto& e : events_) out.push_back(e.line());
    return out;
  }

  static std::vector<SimEvent> load(const std::filesystem::path& path) {
    std::vector<SimEvent> out;
    for (const auto& j : load_jsonl(path, ErrorCode::SchemaMismatch)) out.push_back(SimEvent::from_json(j));
    return out;
  }

 private:
  std::int64_t next_seq_ = 0;
  std::vector<SimEvent> events_;
  std::ofstream file_;
  std::function<void(const SimEvent&)> listener_;
};

/// Discards everything.
class NullSink : public EventSink {
 public:
  void emit(int, std::string, json) override {}
};

}  // namespace agentsafe

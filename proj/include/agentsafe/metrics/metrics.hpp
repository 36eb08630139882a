#pragma once

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "agentsafe/core/clock.hpp"
#include "agentsafe/core/events.hpp"

namespace agentsafe {

/// Directed N x N matrix over a fixed agent order. Masked cells are nullopt;
/// the diagonal is always masked.
template <typename T>
struct AgentMatrix {
  std::vector<std::string> agents;
  std::vector<std::vector<std::optional<T>>> cells;

  static AgentMatrix zeros(const std::vector<std::string>& ids) {
    AgentMatrix m;
    m.agents = ids;
    m.cells.assign(ids.size(), std::vector<std::optional<T>>(ids.size(), T{}));
    for (std::size_t i = 0; i < ids.size(); ++i) m.cells[i][i].reset();
    return m;
  }

  std::size_t index_of(const std::string& id) const {
    for (std::size_t i = 0; i < agents.size(); ++i)
      if (agents[i] == id) return i;
    throw Error(ErrorCode::UnknownAgent, "agent not in matrix: " + id);
  }

  const std::optional<T>& at(const std::string& from, const std::string& to) const {
    return cells[index_of(from)][index_of(to)];
  }

  json to_json() const {
    json rows = json::array();
    for (const auto& r : cells) {
      json row = json::array();
      for (const auto& c : r) row.push_back(c ? json(*c) : json(nullptr));
      rows.push_back(row);
    }
    return json{{"agents", agents}, {"cells", rows}};
  }

  bool operator==(const AgentMatrix&) const = default;
};

using CountMatrix = AgentMatrix<long>;
using RatioMatrix = AgentMatrix<double>;

struct ConversionScore {
  std::string agent_id;
  std::string scenario_id;
  int originally_unsafe = 0;
  int converted = 0;
  std::optional<double> score;

  json to_json() const {
    return json{{"agent", agent_id}, {"scenario", scenario_id}, {"originally_unsafe", originally_unsafe},
                {"converted", converted}, {"score", score ? json(*score) : json(nullptr)}};
  }

  bool operator==(const ConversionScore&) const = default;
};

inline std::optional<double> conversion_percentage(int converted, int originally_unsafe) {
  if (originally_unsafe == 0) return std::nullopt;
  return 100.0 * converted / originally_unsafe;
}

struct TrajectoryPoint {
  int step = 0;
  double mean_unsafe = 0.0;
  bool operator==(const TrajectoryPoint&) const = default;
};

struct MetricsSnapshot {
  int step = 0;
  std::map<std::string, int> unsafe_counts;
  std::map<std::string, std::optional<double>> conversion;
  CountMatrix interactions;
  RatioMatrix acceptance;

  json to_json() const {
    json conv = json::object();
    for (const auto& [a, s] : conversion) conv[a] = s ? json(*s) : json(nullptr);
    return json{{"unsafe", unsafe_counts}, {"conversion", conv}, {"interactions", interactions.to_json()},
                {"acceptance", acceptance.to_json()}};
  }
};

/// Incrementally maintained SocialMetrics. Fed one event at a time, in log order.
class MetricsAggregator {
 public:
  void record(const SimEvent& e) {
    const auto& d = e.data;
    if (e.type == "run_start") {
      agents_ = d.at("agents").get<std::vector<std::string>>();
      for (const auto& a : agents_) per_agent_[a];
      if (d.contains("scenarios"))
        for (const auto& [a, s] : d.at("scenarios").items()) per_agent_[a].scenario = s.get<std::string>();
      attempts_ = CountMatrix::zeros(agents_);
      accepted_ = CountMatrix::zeros(agents_);
    } else if (e.type == "classification") {
      auto& p = agent(d.at("agent"));
      const int hour = ClockTime::parse(d.at("hour").get<std::string>()).minutes;
      if (d.at("state") == "unsafe") {
        p.originally_unsafe.insert(hour);
        p.unsafe.insert(hour);
      }
    } else if (e.type == "revision") {
      if (!d.value("applied", false)) return;
      auto& p = agent(d.at("agent"));
      const int hour = ClockTime::parse(d.at("hour").get<std::string>()).minutes;
      p.unsafe.erase(hour);
      if (p.originally_unsafe.count(hour)) p.converted.insert(hour);
    } else if (e.type == "chat_attempt") {
      const auto i = attempts_.index_of(d.at("initiator"));
      const auto j = attempts_.index_of(d.at("target"));
      *attempts_.cells[i][j] += 1;
      if (d.at("outcome") == "accepted") *accepted_.cells[i][j] += 1;
    } else if (e.type == "snapshot") {
      ++snapshots_seen_;
    }
  }

  const std::vector<std::string>& agents() const { return agents_; }
  bool knows(const std::string& id) const { return per_agent_.count(id) > 0; }

  int unsafe_count(const std::string& id) const { return static_cast<int>(agent(id).unsafe.size()); }

  ConversionScore conversion(const std::string& id) const {
    const auto& p = agent(id);
    ConversionScore s{id, p.scenario, static_cast<int>(p.originally_unsafe.size()), static_cast<int>(p.converted.size()),
                      std::nullopt};
    s.score = conversion_percentage(s.converted, s.originally_unsafe);
    return s;
  }

  /// Accepted conversations initiated by row toward column.
  const CountMatrix& interactions() const { return accepted_; }
  const CountMatrix& attempts() const { return attempts_; }

  RatioMatrix acceptance() const {
    RatioMatrix m = RatioMatrix::zeros(agents_);
    for (std::size_t i = 0; i < agents_.size(); ++i)
      for (std::size_t j = 0; j < agents_.size(); ++j) {
        if (i == j || *attempts_.cells[i][j] == 0) {
          m.cells[i][j].reset();
        } else {
          m.cells[i][j] = static_cast<double>(*accepted_.cells[i][j]) / static_cast<double>(*attempts_.cells[i][j]);
        }
      }
    return m;
  }

  double mean_unsafe() const {
    if (agents_.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& a : agents_) sum += unsafe_count(a);
    return sum / static_cast<double>(agents_.size());
  }

  MetricsSnapshot snapshot(int step) const {
    MetricsSnapshot s;
    s.step = step;
    for (const auto& a : agents_) {
      s.unsafe_counts[a] = unsafe_count(a);
      s.conversion[a] = conversion(a).score;
    }
    s.interactions = accepted_;
    s.acceptance = acceptance();
    return s;
  }

  int snapshots_seen() const { return snapshots_seen_; }

  json to_json() const {
    json pa = json::object();
    for (const auto& [id, p] : per_agent_)
      pa[id] = json{{"scenario", p.scenario}, {"originally_unsafe", p.originally_unsafe}, {"unsafe", p.unsafe},
                    {"converted", p.converted}};
    return json{{"agents", agents_}, {"per_agent", pa}, {"attempts", attempts_.to_json()},
                {"accepted", accepted_.to_json()}, {"snapshots", snapshots_seen_}};
  }

  static MetricsAggregator from_json(const json& j) {
    MetricsAggregator m;
    m.agents_ = j.at("agents").get<std::vector<std::string>>();
    for (const auto& [id, p] : j.at("per_agent").items()) {
      auto& s = m.per_agent_[id];
      s.scenario = p.at("scenario");
      s.originally_unsafe = p.at("originally_unsafe").get<std::set<int>>();
      s.unsafe = p.at("unsafe").get<std::set<int>>();
      s.converted = p.at("converted").get<std::set<int>>();
    }
    m.attempts_ = matrix_from_json(j.at("attempts"));
    m.accepted_ = matrix_from_json(j.at("accepted"));
    m.snapshots_seen_ = j.at("snapshots");
    return m;
  }

 private:
  struct PerAgent {
    std::string scenario;
    std::set<int> originally_unsafe;
    std::set<int> unsafe;
    std::set<int> converted;
  };

  static CountMatrix matrix_from_json(const json& j) {
    CountMatrix m = CountMatrix::zeros(j.at("agents").get<std::vector<std::string>>());
    const auto& rows = j.at("cells");
    for (std::size_t i = 0; i < m.agents.size(); ++i)
      for (std::size_t k = 0; k < m.agents.size(); ++k)
        if (!rows[i][k].is_null()) m.cells[i][k] = rows[i][k].get<long>();
    return m;
  }

  PerAgent& agent(const std::string& id) {
    auto it = per_agent_.find(id);
    if (it == per_agent_.end()) throw Error(ErrorCode::UnknownAgent, "unknown agent " + id);
    return it->second;
  }
  const PerAgent& agent(const std::string& id) const {
    auto it = per_agent_.find(id);
    if (it == per_agent_.end()) throw Error(ErrorCode::UnknownAgent, "unknown agent " + id);
    return it->second;
  }

  std::vector<std::string> agents_;
  std::map<std::string, PerAgent> per_agent_;
  CountMatrix attempts_;
  CountMatrix accepted_;
  int snapshots_seen_ = 0;
};

inline MetricsAggregator aggregate(const std::vector<SimEvent>& events) {
  if (events.empty()) throw Error(ErrorCode::EmptyLog, "run log has no events");
  if (events.front().type != "run_start") throw Error(ErrorCode::SchemaMismatch, "run log does not start with run_start");
  const auto& start = events.front().data;
  if (start.value("schema", "") != kRunLogSchema)
    throw Error(ErrorCode::SchemaMismatch, "unsupported run log schema " + start.value("schema", std::string("<none>")));
  MetricsAggregator m;
  for (const auto& e : events) m.record(e);
  return m;
}

inline ConversionScore conversion_score(const std::vector<SimEvent>& events, const std::string& agent_id) {
  return aggregate(events).conversion(agent_id);
}

/// Mean unsafe count at step 0 (after classification) and at every snapshot.
inline std::vector<TrajectoryPoint> safety_trajectory(const std::vector<SimEvent>& events) {
  std::vector<TrajectoryPoint> out;
  if (events.empty()) throw Error(ErrorCode::EmptyLog, "run log has no events");
  aggregate(events);
  MetricsAggregator m;
  bool initial_done = false;
  for (const auto& e : events) {
    if (!initial_done && e.step > 0) {
      out.push_back({0, m.mean_unsafe()});
      initial_done = true;
    }
    m.record(e);
    if (e.type == "snapshot") out.push_back({e.step, m.mean_unsafe()});
  }
  if (!initial_done) out.insert(out.begin(), TrajectoryPoint{0, m.mean_unsafe()});
  return out;
}

inline RatioMatrix acceptance_matrix(const std::vector<SimEvent>& events) { return aggregate(events).acceptance(); }
inline CountMatrix interaction_matrix(const std::vector<SimEvent>& events) { return aggregate(events).interactions(); }

/// Element-wise mean over runs; a cell is masked only when it is masked in
/// every run, otherwise it is the mean of the unmasked values.
template <typename T>
RatioMatrix average_matrices(const std::vector<AgentMatrix<T>>& runs) {
  if (runs.empty()) throw Error(ErrorCode::EmptyLog, "no matrices to average");
  RatioMatrix out = RatioMatrix::zeros(runs.front().agents);
  const std::size_t n = out.agents.size();
  for (const auto& r : runs)
    if (r.agents != out.agents) throw Error(ErrorCode::SchemaMismatch, "runs use different agent sets");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double sum = 0.0;
      int count = 0;
      for (const auto& r : runs)
        if (r.cells[i][j]) {
          sum += static_cast<double>(*r.cells[i][j]);
          ++count;
        }
      if (i == j || count == 0) {
        out.cells[i][j].reset();
      } else {
        out.cells[i][j] = sum / count;
      }
    }
  return out;
}

/// Mean over agents with a defined score; nullopt when none is defined.
inline std::optional<double> mean_conversion(const std::vector<ConversionScore>& scores) {
  double sum = 0.0;
  int n = 0;
  for (const auto& s : scores)
    if (s.score) {
      sum += *s.score;
      ++n;
    }
  if (n == 0) return std::nullopt;
  return sum / n;
}

inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_number(long v) { return std::to_string(v); }

template <typename T>
std::string matrix_csv(const AgentMatrix<T>& m) {
  std::string out = "from\\to";
  for (const auto& a : m.agents) out += "," + a;
  out += "\n";
  for (std::size_t i = 0; i < m.agents.size(); ++i) {
    out += m.agents[i];
    for (const auto& c : m.cells[i]) out += "," + (c ? format_number(*c) : std::string());
    out += "\n";
  }
  return out;
}

inline std::string trajectory_csv(const std::vector<TrajectoryPoint>& points) {
  std::string out = "step,mean_unsafe\n";
  for (const auto& p : points) out += std::to_string(p.step) + "," + format_number(p.mean_unsafe) + "\n";
  return out;
}

inline std::string conversion_csv(const std::vector<ConversionScore>& scores) {
  std::string out = "agent,scenario,originally_unsafe,converted,score\n";
  for (const auto& s : scores)
    out += s.agent_id + "," + s.scenario_id + "," + std::to_string(s.originally_unsafe) + "," +
           std::to_string(s.converted) + "," + (s.score ? format_number(*s.score) : std::string()) + "\n";
  return out;
}

}  // namespace agentsafe

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "agentsafe/metrics/metrics.hpp"
#include "agentsafe/report/svg.hpp"

namespace agentsafe {

enum class ReportOutput { trajectory, conversion_heatmap, matrices, revisions_timeline, dialogues };

inline std::string to_string(ReportOutput o) {
  switch (o) {
    case ReportOutput::trajectory: return "trajectory";
    case ReportOutput::conversion_heatmap: return "conversion-heatmap";
    case ReportOutput::matrices: return "matrices";
    case ReportOutput::revisions_timeline: return "revisions-timeline";
    case ReportOutput::dialogues: return "dialogues";
  }
  return "?";
}

inline ReportOutput parse_report_output(const std::string& s) {
  for (auto o : {ReportOutput::trajectory, ReportOutput::conversion_heatmap, ReportOutput::matrices,
                 ReportOutput::revisions_timeline, ReportOutput::dialogues})
    if (to_string(o) == s) return o;
  throw Error(ErrorCode::ConfigError, "unknown report output '" + s + "'");
}

struct ReportSpec {
  std::vector<std::filesystem::path> logs;
  std::set<ReportOutput> outputs;
  std::filesystem::path out_dir;
};

/// Loads and checks a run log: it must be non-empty and open with a run_start
/// event of the supported schema.
inline std::vector<SimEvent> load_run_log(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::IoError, "no run log at " + path.string());
  auto events = RunLog::load(path);
  if (events.empty()) throw Error(ErrorCode::EmptyLog, "run log " + path.string() + " has no events");
  aggregate(events);
  return events;
}

struct TimelineRow {
  int step = 0;
  std::string agent;
  std::string hour;
  std::string phrase;
  std::string outcome;
  std::string rationale;
  std::string path;
};

/// Revision outcomes for slots that went through review, in log order.
inline std::vector<TimelineRow> revisions_timeline(const std::vector<SimEvent>& events,
                                                   const std::optional<std::string>& agent = std::nullopt) {
  std::vector<TimelineRow> rows;
  for (const auto& e : events) {
    if (e.type != "revision") continue;
    const auto& d = e.data;
    if (d.value("path", "") == "exempt") continue;
    if (agent && d.at("agent") != *agent) continue;
    const bool applied = d.value("applied", false);
    rows.push_back({e.step, d.at("agent"), d.at("hour"),
                    applied ? d.at("proposed").get<std::string>() : d.at("original").get<std::string>(),
                    applied ? "CHANGE" : "KEEP", d.value("rationale", ""), d.value("path", "")});
  }
  return rows;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline std::string timeline_csv(const std::vector<TimelineRow>& rows) {
  std::string out = "step,agent,hour,phrase,outcome,rationale,path\n";
  for (const auto& r : rows)
    out += std::to_string(r.step) + "," + r.agent + "," + r.hour + "," + csv_field(r.phrase) + "," + r.outcome + "," +
           csv_field(r.rationale) + "," + r.path + "\n";
  return out;
}

inline std::string timeline_markdown(const std::vector<TimelineRow>& rows) {
  std::string out = "| Step | Agent | Hour | Phrase | Outcome | Rationale |\n|---|---|---|---|---|---|\n";
  for (const auto& r : rows)
    out += "| " + std::to_string(r.step) + " | " + r.agent + " | " + r.hour + " | \"" + r.phrase + "\" | " + r.outcome +
           " | " + r.rationale + " |\n";
  return out;
}

/// Conversation transcripts, one section per conversation.
inline std::string dialogues_markdown(const std::vector<SimEvent>& events) {
  std::map<std::int64_t, std::vector<const SimEvent*>> by_conv;
  for (const auto& e : events)
    if (e.type == "utterance") by_conv[e.data.at("conversation").get<std::int64_t>()].push_back(&e);
  std::string out = "# Dialogues\n";
  for (const auto& [id, lines] : by_conv) {
    const auto& first = lines.front()->data;
    out += "\n## Conversation " + std::to_string(id) + ": " + first.at("speaker").get<std::string>() + " and " +
           first.at("listener").get<std::string>() + " (step " + std::to_string(lines.front()->step) + ")\n\n";
    for (const auto* u : lines) {
      out += "- **" + u->data.at("speaker").get<std::string>() + "** (step " + std::to_string(u->step) +
             "): " + u->data.at("text").get<std::string>();
      const auto& tags = u->data.at("tags");
      if (!tags.empty()) {
        std::vector<std::string> t;
        for (const auto& tag : tags)
          t.push_back(tag.at("activity").get<std::string>() + " [" + tag.at("state").get<std::string>() + "]");
        out += " _(mentions: " + text::join(t, "; ") + ")_";
      }
      out += "\n";
    }
  }
  return out;
}

/// Mean of per-run trajectories at each step present in every run.
inline std::vector<TrajectoryPoint> mean_trajectory(const std::vector<std::vector<TrajectoryPoint>>& runs) {
  if (runs.empty()) return {};
  std::map<int, std::pair<double, std::size_t>> acc;
  for (const auto& r : runs)
    for (const auto& p : r) {
      acc[p.step].first += p.mean_unsafe;
      ++acc[p.step].second;
    }
  std::vector<TrajectoryPoint> out;
  for (const auto& [step, sum] : acc)
    if (sum.second == runs.size()) out.push_back({step, sum.first / static_cast<double>(sum.second)});
  return out;
}

struct ConversionCell {
  std::string agent;
  std::string scenario;
  std::optional<double> mean_score;
  int runs = 0;
};

/// Per (agent, scenario) mean conversion over runs, skipping null scores.
inline std::vector<ConversionCell> conversion_table(const std::vector<std::vector<ConversionScore>>& runs) {
  std::map<std::pair<std::string, std::string>, std::vector<ConversionScore>> grouped;
  for (const auto& r : runs)
    for (const auto& s : r) grouped[{s.agent_id, s.scenario_id}].push_back(s);
  std::vector<ConversionCell> out;
  for (const auto& [key, scores] : grouped) {
    int n = 0;
    for (const auto& s : scores) n += s.score ? 1 : 0;
    out.push_back({key.first, key.second, mean_conversion(scores), n});
  }
  return out;
}

struct ReportResult {
  std::vector<std::filesystem::path> files;
};

namespace detail {

inline std::string run_label(const std::filesystem::path& p, std::size_t index) {
  const std::string dir = p.parent_path().filename().string();
  return (dir.empty() ? std::string("run") : dir) + "-" + std::to_string(index + 1);
}

inline std::vector<std::vector<std::optional<double>>> to_real(const CountMatrix& m) {
  std::vector<std::vector<std::optional<double>>> out;
  for (const auto& r : m.cells) {
    out.emplace_back();
    for (const auto& c : r) out.back().push_back(c ? std::optional<double>(static_cast<double>(*c)) : std::nullopt);
  }
  return out;
}

}  // namespace detail

inline ReportResult generate_report(const ReportSpec& spec) {
  if (spec.logs.empty()) throw Error(ErrorCode::ConfigError, "report needs at least one run log");
  if (spec.outputs.empty()) throw Error(ErrorCode::ConfigError, "report needs at least one output");
  std::vector<std::vector<SimEvent>> runs;
  for (const auto& p : spec.logs) runs.push_back(load_run_log(p));
  std::filesystem::create_directories(spec.out_dir);
  ReportResult result;
  auto emit = [&](const std::string& name, const std::string& content) {
    const auto path = spec.out_dir / name;
    write_file(path, content);
    result.files.push_back(path);
  };
  const bool multi = runs.size() > 1;

  if (spec.outputs.count(ReportOutput::trajectory)) {
    std::vector<std::vector<TrajectoryPoint>> per_run;
    std::vector<svg::Series> series;
    double y_max = 1.0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      per_run.push_back(safety_trajectory(runs[i]));
      svg::Series s{multi ? detail::run_label(spec.logs[i], i) : "mean unsafe", {}};
      for (const auto& p : per_run.back()) {
        s.points.push_back({static_cast<double>(p.step), p.mean_unsafe});
        y_max = std::max(y_max, p.mean_unsafe);
      }
      series.push_back(std::move(s));
    }
    const auto mean = multi ? mean_trajectory(per_run) : per_run.front();
    if (multi) {
      svg::Series s{"mean", {}};
      for (const auto& p : mean) s.points.push_back({static_cast<double>(p.step), p.mean_unsafe});
      series.push_back(std::move(s));
      std::string csv = "step";
      for (std::size_t i = 0; i < runs.size(); ++i) csv += "," + detail::run_label(spec.logs[i], i);
      csv += "\n";
      for (const auto& p : mean) {
        csv += std::to_string(p.step);
        for (const auto& r : per_run) {
          auto it = std::find_if(r.begin(), r.end(), [&](const TrajectoryPoint& q) { return q.step == p.step; });
          csv += "," + format_number(it->mean_unsafe);
        }
        csv += "\n";
      }
      emit("trajectory_runs.csv", csv);
    }
    emit("trajectory.csv", trajectory_csv(mean));
    emit("trajectory.svg", svg::step_chart("Mean unsafe activities over time", "simulation step",
                                           "mean unsafe slots per agent", series, std::ceil(y_max)));
  }

  if (spec.outputs.count(ReportOutput::conversion_heatmap)) {
    std::vector<std::vector<ConversionScore>> scores;
    for (const auto& r : runs) {
      const auto m = aggregate(r);
      scores.emplace_back();
      for (const auto& a : m.agents()) scores.back().push_back(m.conversion(a));
    }
    const auto table = conversion_table(scores);
    std::vector<std::string> agents, scenarios;
    for (const auto& c : table) {
      if (std::find(agents.begin(), agents.end(), c.agent) == agents.end()) agents.push_back(c.agent);
      if (std::find(scenarios.begin(), scenarios.end(), c.scenario) == scenarios.end()) scenarios.push_back(c.scenario);
    }
    std::vector<std::vector<std::optional<double>>> cells(agents.size(),
                                                          std::vector<std::optional<double>>(scenarios.size()));
    std::string csv = "agent,scenario,runs_with_score,mean_score\n";
    for (const auto& c : table) {
      const auto i = static_cast<std::size_t>(std::find(agents.begin(), agents.end(), c.agent) - agents.begin());
      const auto j = static_cast<std::size_t>(std::find(scenarios.begin(), scenarios.end(), c.scenario) - scenarios.begin());
      cells[i][j] = c.mean_score;
      csv += c.agent + "," + c.scenario + "," + std::to_string(c.runs) + "," +
             (c.mean_score ? format_number(*c.mean_score) : std::string()) + "\n";
    }
    emit("conversion.csv", csv);
    emit("conversion.svg", svg::heatmap("Unsafe-to-safe conversion (%)", agents, scenarios, cells, 1));
  }

  if (spec.outputs.count(ReportOutput::matrices)) {
    std::vector<CountMatrix> interactions;
    std::vector<RatioMatrix> acceptance;
    for (const auto& r : runs) {
      const auto m = aggregate(r);
      interactions.push_back(m.interactions());
      acceptance.push_back(m.acceptance());
    }
    if (multi) {
      const RatioMatrix inter = average_matrices(interactions);
      const RatioMatrix acc = average_matrices(acceptance);
      emit("interactions.csv", matrix_csv(inter));
      emit("interactions.svg", svg::heatmap("Directed conversation counts (mean over runs)", inter.agents, inter.agents,
                                            inter.cells, 1));
      emit("acceptance.csv", matrix_csv(acc));
      emit("acceptance.svg", svg::heatmap("Acceptance ratio (mean over runs)", acc.agents, acc.agents, acc.cells, 2));
    } else {
      emit("interactions.csv", matrix_csv(interactions.front()));
      emit("interactions.svg", svg::heatmap("Directed conversation counts", interactions.front().agents,
                                            interactions.front().agents, detail::to_real(interactions.front()), 0));
      emit("acceptance.csv", matrix_csv(acceptance.front()));
      emit("acceptance.svg", svg::heatmap("Acceptance ratio", acceptance.front().agents, acceptance.front().agents,
                                          acceptance.front().cells, 2));
    }
  }

  if (spec.outputs.count(ReportOutput::revisions_timeline)) {
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const std::string suffix = multi ? "_" + detail::run_label(spec.logs[i], i) : "";
      const auto rows = revisions_timeline(runs[i]);
      emit("revisions" + suffix + ".csv", timeline_csv(rows));
      emit("revisions" + suffix + ".md", timeline_markdown(rows));
    }
  }

  if (spec.outputs.count(ReportOutput::dialogues)) {
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const std::string suffix = multi ? "_" + detail::run_label(spec.logs[i], i) : "";
      emit("dialogues" + suffix + ".md", dialogues_markdown(runs[i]));
    }
  }
  return result;
}

}  // namespace agentsafe

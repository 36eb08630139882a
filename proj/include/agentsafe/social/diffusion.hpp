#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "agentsafe/core/events.hpp"
#include "agentsafe/core/text.hpp"

namespace agentsafe {

struct DiffusionNode {
  std::string agent_id;
  int step = 0;
  std::optional<std::string> parent;
};

struct DiffusionEdge {
  std::string from;
  std::string to;
  int step = 0;
};

/// Who first held an activity and how it spread through conversation.
struct DiffusionTree {
  std::string activity;
  std::string root;
  std::vector<DiffusionNode> nodes;
  std::vector<DiffusionEdge> edges;

  const DiffusionNode* node(const std::string& agent) const {
    for (const auto& n : nodes)
      if (n.agent_id == agent) return &n;
    return nullptr;
  }

  json to_json() const {
    json ns = json::array();
    for (const auto& n : nodes)
      ns.push_back(json{{"agent", n.agent_id}, {"step", n.step}, {"parent", n.parent ? json(*n.parent) : json(nullptr)}});
    json es = json::array();
    for (const auto& e : edges) es.push_back(json{{"from", e.from}, {"to", e.to}, {"step", e.step}});
    return json{{"activity", activity}, {"root", root}, {"nodes", ns}, {"edges", es}};
  }
};

inline bool mentions_activity(const std::string& haystack, const std::vector<std::string>& needle_words) {
  return !needle_words.empty() && text::contains_sequence(text::content_words(haystack), needle_words);
}

/// Reconstructs the spread of `activity` from a run log. An agent mentions the
/// activity when its plan holds it (step-0 classification or an applied
/// revision) or when it says it. The root is the earliest mention; utterances
/// carrying the activity add speaker -> listener edges the first time a
/// listener is exposed.
inline DiffusionTree diffusion_trace(const std::vector<SimEvent>& events, const std::string& activity) {
  const auto needle = text::content_words(activity);
  if (needle.empty()) throw Error(ErrorCode::InvalidRequest, "activity has no content words");

  struct Mention {
    std::string agent;
    int step;
    bool heard;  // exposure through conversation rather than own plan/speech
    std::string from;
  };
  std::vector<Mention> mentions;
  for (const auto& e : events) {
    const auto& d = e.data;
    if (e.type == "classification") {
      if (mentions_activity(d.value("activity", ""), needle)) mentions.push_back({d.at("agent"), e.step, false, ""});
    } else if (e.type == "revision") {
      const auto& proposed = d.at("proposed");
      if (d.value("applied", false) && proposed.is_string() && mentions_activity(proposed.get<std::string>(), needle))
        mentions.push_back({d.at("agent"), e.step, false, ""});
    } else if (e.type == "utterance") {
      bool hit = mentions_activity(d.value("text", ""), needle);
      if (!hit && d.contains("tags"))
        for (const auto& t : d.at("tags"))
          if (text::to_lower(t.value("activity", "")) == text::to_lower(activity)) hit = true;
      if (hit) {
        mentions.push_back({d.at("speaker"), e.step, false, ""});
        mentions.push_back({d.at("listener"), e.step, true, d.at("speaker")});
      }
    }
  }
  if (mentions.empty()) throw Error(ErrorCode::NotFound, "activity never appears in the log: " + activity);

  const int first_step = mentions.front().step;
  std::set<std::string> roots;
  std::set<std::string> exposed;
  for (const auto& m : mentions) {
    if (m.step != first_step) break;
    if (m.heard) {
      exposed.insert(m.agent);
    } else if (!exposed.count(m.agent)) {
      roots.insert(m.agent);
    }
  }
  if (roots.size() > 1) {
    std::string list;
    for (const auto& r : roots) list += (list.empty() ? "" : ", ") + r;
    throw Error(ErrorCode::AmbiguousRoot, "several agents held the activity first: " + list);
  }

  DiffusionTree tree;
  tree.activity = activity;
  tree.root = *roots.begin();
  tree.nodes.push_back({tree.root, first_step, std::nullopt});
  for (const auto& m : mentions) {
    if (tree.node(m.agent)) continue;
    if (m.heard) {
      tree.nodes.push_back({m.agent, m.step, m.from});
      tree.edges.push_back({m.from, m.agent, m.step});
    } else {
      // Later independent arrival: a second source outside the tree.
      tree.nodes.push_back({m.agent, m.step, std::nullopt});
    }
  }
  return tree;
}

}  // namespace agentsafe

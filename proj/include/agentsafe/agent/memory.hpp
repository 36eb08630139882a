#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "agentsafe/core/error.hpp"
#include "agentsafe/core/json_io.hpp"
#include "agentsafe/gateway/embedder.hpp"

namespace agentsafe {

enum class MemoryKind { observation, reflection, plan, chat };

inline std::string to_string(MemoryKind k) {
  switch (k) {
    case MemoryKind::observation: return "observation";
    case MemoryKind::reflection: return "reflection";
    case MemoryKind::plan: return "plan";
    case MemoryKind::chat: return "chat";
  }
  return "?";
}

inline MemoryKind parse_memory_kind(std::string_view s) {
  if (s == "observation") return MemoryKind::observation;
  if (s == "reflection") return MemoryKind::reflection;
  if (s == "plan") return MemoryKind::plan;
  if (s == "chat") return MemoryKind::chat;
  throw Error(ErrorCode::SpecParseError, "unknown memory kind '" + std::string(s) + "'");
}

struct MemoryEntry {
  std::int64_t id = 0;
  MemoryKind kind = MemoryKind::observation;
  std::string text;
  int created_step = 0;
  double importance = 0.0;
  std::string embedding_ref;
  std::string source;  // self | <agent id> | judge | planner
};

struct RetrievalWeights {
  double recency = 1.0;
  double importance = 1.0;
  double relevance = 1.0;
  double decay = 0.995;
};

struct ScoredMemory {
  const MemoryEntry* entry = nullptr;
  double score = 0.0;
};

/// Append-only stream. Entry ids are assigned in order starting at 0.
class MemoryStream {
 public:
  const MemoryEntry& append(MemoryKind kind, std::string text, int step, double importance, std::string source,
                            std::string embedding_ref, std::vector<double> embedding) {
    if (importance < 0.0 || importance > 10.0) throw Error(ErrorCode::InvalidRequest, "importance out of [0,10]");
    MemoryEntry e{static_cast<std::int64_t>(entries_.size()), kind, std::move(text), step, importance,
                  std::move(embedding_ref), std::move(source)};
    entries_.push_back(std::move(e));
    embeddings_.push_back(std::move(embedding));
    return entries_.back();
  }

  const std::vector<MemoryEntry>& entries() const { return entries_; }
  const std::vector<double>& embedding(std::int64_t id) const { return embeddings_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Weighted recency + importance + relevance, each in [0,1]. Ties go to the
  /// newer entry, then the lower id.
  std::vector<ScoredMemory> retrieve(const std::vector<double>& query, int now, std::size_t k,
                                     const RetrievalWeights& w) const {
    if (k < 1) throw Error(ErrorCode::InvalidRequest, "retrieve needs k >= 1");
    if (w.recency < 0 || w.importance < 0 || w.relevance < 0)
      throw Error(ErrorCode::InvalidRequest, "retrieval weights must be non-negative");
    std::vector<ScoredMemory> scored;
    scored.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      const double recency = std::pow(w.decay, std::max(0, now - e.created_step));
      const double importance = e.importance / 10.0;
      const double relevance = w.relevance > 0 ? (cosine_similarity(query, embeddings_[i]) + 1.0) / 2.0 : 0.0;
      scored.push_back({&e, w.recency * recency + w.importance * importance + w.relevance * relevance});
    }
    const std::size_t n = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(),
                      [](const ScoredMemory& a, const ScoredMemory& b) {
                        if (a.score != b.score) return a.score > b.score;
                        if (a.entry->created_step != b.entry->created_step)
                          return a.entry->created_step > b.entry->created_step;
                        return a.entry->id < b.entry->id;
                      });
    scored.resize(n);
    return scored;
  }

  json to_json() const {
    json arr = json::array();
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      json j = entry_json(entries_[i]);
      j["embedding"] = embeddings_[i];
      arr.push_back(std::move(j));
    }
    return arr;
  }

  static MemoryStream from_json(const json& arr) {
    MemoryStream s;
    for (const auto& j : arr) {
      s.append(parse_memory_kind(j.at("kind").get<std::string>()), j.at("text"), j.at("step"), j.at("importance"),
               j.at("source"), j.at("embedding_ref"), j.at("embedding").get<std::vector<double>>());
    }
    return s;
  }

  static json entry_json(const MemoryEntry& e) {
    return json{{"id", e.id},         {"kind", to_string(e.kind)},
                {"text", e.text},     {"step", e.created_step},
                {"importance", e.importance}, {"embedding_ref", e.embedding_ref},
                {"source", e.source}};
  }

 private:
  std::vector<MemoryEntry> entries_;
  std::vector<std::vector<double>> embeddings_;
};

}  // namespace agentsafe

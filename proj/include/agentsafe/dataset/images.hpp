#pragma once

#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <httplib.h>

#include "agentsafe/core/image_store.hpp"
#include "agentsafe/core/rng.hpp"
#include "agentsafe/core/text.hpp"
#include "agentsafe/dataset/generation.hpp"
#include "agentsafe/gateway/embedder.hpp"

namespace agentsafe {

struct ImageHit {
  std::string image_ref;
  std::string fetch_url;
};

/// query -> ranked hits. `seed` distinguishes retries of the same query.
class ImageSearch {
 public:
  virtual ~ImageSearch() = default;
  virtual std::vector<ImageHit> search(const std::string& query, std::uint64_t seed) = 0;
};

/// (activity text, image ref) -> cosine-style alignment score.
class Similarity {
 public:
  virtual ~Similarity() = default;
  virtual double score(const std::string& activity, const std::string& image_ref) = 0;
};

struct AlignmentPolicy {
  double soft_threshold = 0.30;
  double hard_threshold = 0.35;
  int max_retries = 3;

  void validate() const {
    if (!(soft_threshold > 0.0 && soft_threshold <= hard_threshold && hard_threshold < 1.0))
      throw Error(ErrorCode::ConfigError, "alignment thresholds must satisfy 0 < soft <= hard < 1");
    if (max_retries < 0) throw Error(ErrorCode::ConfigError, "max_retries must be >= 0");
  }
};

enum class AttemptBand { below_soft, soft_band, accepted, no_result };

struct AlignmentAttempt {
  std::uint64_t seed = 0;
  std::optional<std::string> image_ref;
  std::optional<double> score;
  AttemptBand band = AttemptBand::no_result;
};

struct AttachResult {
  PlanSlot slot;
  std::vector<AlignmentAttempt> attempts;
};

/// Retrieves an image for one slot. Each attempt takes the top-ranked hit for the
/// keyword query under a fresh seed; the first score at or above the hard
/// threshold is accepted. Otherwise retries continue while the budget lasts and
/// the slot is flagged for review with its best attempt recorded.
inline AttachResult attach_image(PlanSlot slot, const AlignmentPolicy& policy, ImageSearch& search,
                                 Similarity& similarity) {
  policy.validate();
  const std::string query = text::join(extract_keywords(slot.activity), " ");
  AttachResult result;
  std::optional<double> best;
  std::optional<std::string> best_ref;
  for (int attempt = 0; attempt <= policy.max_retries; ++attempt) {
    AlignmentAttempt a;
    a.seed = derive_seed(static_cast<std::uint64_t>(attempt), slot.activity);
    const auto hits = search.search(query.empty() ? slot.activity : query, a.seed);
    if (!hits.empty()) {
      a.image_ref = hits.front().image_ref;
      a.score = similarity.score(slot.activity, *a.image_ref);
      a.band = *a.score >= policy.hard_threshold   ? AttemptBand::accepted
               : *a.score >= policy.soft_threshold ? AttemptBand::soft_band
                                                   : AttemptBand::below_soft;
      if (!best || *a.score > *best) {
        best = a.score;
        best_ref = a.image_ref;
      }
    }
    result.attempts.push_back(a);
    if (a.band == AttemptBand::accepted) break;
  }
  if (best && *best >= policy.hard_threshold) {
    slot.image_ref = best_ref;
    slot.alignment_score = best;
    slot.review_flag = false;
  } else {
    slot.image_ref.reset();
    slot.alignment_score = best;
    slot.review_flag = true;
  }
  result.slot = std::move(slot);
  return result;
}

/// Mock search: one deterministic hit per (query, seed).
class MockImageSearch : public ImageSearch {
 public:
  std::vector<ImageHit> search(const std::string& query, std::uint64_t seed) override {
    ++calls_;
    const std::string ref = sha256_hex("mock-image:" + query + ":" + std::to_string(seed));
    return {ImageHit{ref, "mock://images/" + ref}};
  }
  int calls() const { return calls_; }

 private:
  int calls_ = 0;
};

/// Mock similarity reading a score schedule: per activity text, the n-th call
/// returns the n-th scheduled score. Activities without a schedule get a
/// deterministic pseudo-random score in [lo, hi).
class ScheduledSimilarity : public Similarity {
 public:
  explicit ScheduledSimilarity(std::map<std::string, std::vector<double>> schedule = {}, double lo = 0.25,
                               double hi = 0.45)
      : schedule_(std::move(schedule)), lo_(lo), hi_(hi) {}

  static ScheduledSimilarity from_json(const json& j) {
    std::map<std::string, std::vector<double>> schedule;
    const json table = j.value("schedule", json::object());
    for (const auto& [activity, scores] : table.items())
      schedule[activity] = scores.get<std::vector<double>>();
    return ScheduledSimilarity(std::move(schedule), j.value("default_low", 0.25), j.value("default_high", 0.45));
  }

  double score(const std::string& activity, const std::string& image_ref) override {
    const std::size_t n = served_[activity]++;
    if (auto it = schedule_.find(activity); it != schedule_.end()) {
      if (n < it->second.size()) return it->second[n];
      return it->second.empty() ? 0.0 : it->second.back();
    }
    Rng rng(derive_seed(0, activity + "|" + image_ref));
    return lo_ + (hi_ - lo_) * rng.uniform();
  }

 private:
  std::map<std::string, std::vector<double>> schedule_;
  std::map<std::string, std::size_t> served_;
  double lo_, hi_;
};

/// Stock-photo search over HTTP (Pexels-style JSON). Fetched bytes are stored in
/// the content-addressed image store; the hit's ref is their digest.
class HttpImageSearch : public ImageSearch {
 public:
  struct Config {
    std::string base_url = "https://api.pexels.com";
    std::string search_path = "/v1/search";
    std::string api_key_env = "PEXELS_API_KEY";
    int pages = 10;
    int timeout_seconds = 30;
  };

  HttpImageSearch(Config config, ImageStore store) : config_(std::move(config)), store_(std::move(store)) {
    if (const char* key = std::getenv(config_.api_key_env.c_str())) api_key_ = key;
  }

  std::vector<ImageHit> search(const std::string& query, std::uint64_t seed) override {
    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", api_key_);
    const int page = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(std::max(1, config_.pages)));
    httplib::Params params{{"query", query}, {"per_page", "1"}, {"page", std::to_string(page)}};
    auto res = client.Get(config_.search_path, params, headers);
    if (!res || res->status != 200)
      throw Error(ErrorCode::ImageSearchUnreachable,
                  config_.base_url + config_.search_path + (res ? " HTTP " + std::to_string(res->status)
                                                                 : ": " + httplib::to_string(res.error())));
    std::vector<ImageHit> hits;
    json body;
    try {
      body = json::parse(res->body);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ImageSearchUnreachable, std::string("search reply is not JSON: ") + e.what());
    }
    for (const auto& photo : body.value("photos", json::array())) {
      const std::string url = photo.at("src").value("medium", photo.at("src").value("original", std::string{}));
      if (url.empty()) continue;
      hits.push_back(ImageHit{store_.put(fetch(url)), url});
    }
    return hits;
  }

 private:
  std::string fetch(const std::string& url) const {
    const auto scheme_end = url.find("://");
    const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    const std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
    httplib::Client client(origin);
    client.set_follow_location(true);
    auto res = client.Get(path);
    if (!res || res->status != 200) throw Error(ErrorCode::ImageSearchUnreachable, "cannot fetch " + url);
    return res->body;
  }

  Config config_;
  ImageStore store_;
  std::string api_key_;
};

/// Image-text similarity through an embedding service: POST {"text", "image_b64"}
/// returning {"text_embedding": [...], "image_embedding": [...]}; the score is their cosine.
class HttpSimilarity : public Similarity {
 public:
  HttpSimilarity(std::string base_url, std::string path, ImageStore store, int timeout_seconds = 60)
      : base_url_(std::move(base_url)), path_(std::move(path)), store_(std::move(store)), timeout_(timeout_seconds) {}

  double score(const std::string& activity, const std::string& image_ref) override {
    const auto bytes = store_.get(image_ref);
    if (!bytes) throw Error(ErrorCode::ImageSearchUnreachable, "image " + image_ref + " missing from store");
    httplib::Client client(base_url_);
    client.set_read_timeout(timeout_, 0);
    json body = {{"text", activity}, {"image_b64", base64_encode(*bytes)}};
    auto res = client.Post(path_, body.dump(), "application/json");
    if (!res || res->status != 200) throw Error(ErrorCode::ImageSearchUnreachable, "similarity service unreachable");
    try {
      const json reply = json::parse(res->body);
      return cosine_similarity(reply.at("text_embedding").get<std::vector<double>>(),
                               reply.at("image_embedding").get<std::vector<double>>());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedResponse, std::string("similarity reply: ") + e.what());
    }
  }

 private:
  std::string base_url_;
  std::string path_;
  ImageStore store_;
  int timeout_;
};

}  // namespace agentsafe

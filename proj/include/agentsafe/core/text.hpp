#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace agentsafe::text {

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline bool starts_with_icase(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) != std::tolower(static_cast<unsigned char>(prefix[i])))
      return false;
  }
  return true;
}

/// Lower-cased alphanumeric words; apostrophes inside words are dropped.
inline std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (ch == '\'' && !cur.empty()) {
      continue;
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline const std::unordered_set<std::string>& stopwords() {
  static const std::unordered_set<std::string> kStop = {
      "a",     "an",    "the",   "and",   "or",    "but",   "of",    "to",    "in",    "on",
      "at",    "by",    "for",   "with",  "from",  "into",  "onto",  "up",    "down",  "out",
      "over",  "under", "is",    "are",   "was",   "were",  "be",    "been",  "being", "am",
      "it",    "its",   "this",  "that",  "these", "those", "their", "them",  "they",  "we",
      "us",    "our",   "you",   "your",  "yours", "i",     "me",    "my",    "he",    "she",
      "him",   "her",   "his",   "as",    "so",    "than",  "then",  "there", "here",  "while",
      "some",  "any",   "all",   "each",  "every", "other", "another", "such", "very", "just",
      "too",   "also",  "about", "after", "before", "again", "off",  "will",  "would", "can",
      "could", "should", "shall", "may",  "might", "must",  "do",    "does",  "did",   "have",
      "has",   "had",   "not",   "no",    "if",    "when",  "where", "who",   "what",  "which",
      "how",   "why",   "let",   "lets",  "let's", "yourself", "themselves", "ourselves",
      "around", "near", "through", "across", "toward", "towards", "along", "between", "below",
      "above", "together", "more", "most", "much", "many", "get", "gets", "go", "going", "s"};
  return kStop;
}

inline std::vector<std::string> content_words(std::string_view s) {
  std::vector<std::string> out;
  for (auto& w : words(s)) {
    if (!stopwords().contains(w)) out.push_back(std::move(w));
  }
  return out;
}

/// True when `needle` appears as a contiguous run inside `haystack`.
inline bool contains_sequence(const std::vector<std::string>& haystack, const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

inline std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto nl = s.find('\n', start);
    if (nl == std::string_view::npos) nl = s.size();
    std::string line(s.substr(start, nl - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(std::move(line));
    start = nl + 1;
  }
  return out;
}

}  // namespace agentsafe::text

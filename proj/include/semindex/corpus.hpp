// Copyright 2026 The semindex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <fstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "semindex/common.hpp"
#include "semindex/dates.hpp"

namespace semindex {

/// One timestamped news item, the ingestion atom.
struct NewsDocument {
  std::string id;
  UtcTime timestamp;
  std::string title;
  std::string body;
};

/// A record the reader refused, with the reason; callers decide whether a
/// rejection is fatal.
struct RecordError {
  size_t line = 0;
  std::string id;  // empty when the id itself was unreadable
  std::string message;
};

struct CorpusLoad {
  std::vector<NewsDocument> documents;
  std::vector<RecordError> errors;
};

/// Reads a line-delimited corpus file: one JSON object per line with keys
/// {id, timestamp, title, body}. Malformed records are collected, not fatal;
/// duplicate ids and timestamps outside the calendar range are rejected
/// per record as well.
inline CorpusLoad load_corpus(const std::string& path, const PeriodCalendar& calendar) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open corpus: " + path);

  CorpusLoad out;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;

    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      out.errors.push_back({line_no, "", "not a JSON object"});
      continue;
    }
    NewsDocument doc;
    if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty()) {
      out.errors.push_back({line_no, "", "missing or empty id"});
      continue;
    }
    doc.id = j["id"].get<std::string>();
    if (!seen_ids.insert(doc.id).second) {
      out.errors.push_back({line_no, doc.id, "duplicate id"});
      continue;
    }
    if (!j.contains("timestamp") || !j["timestamp"].is_string()) {
      out.errors.push_back({line_no, doc.id, "missing timestamp"});
      continue;
    }
    try {
      doc.timestamp = parse_iso8601(j["timestamp"].get<std::string>());
      calendar.period_of(doc.timestamp);  // range check
    } catch (const std::exception& e) {
      out.errors.push_back({line_no, doc.id, e.what()});
      continue;
    }
    doc.title = j.value("title", std::string());
    doc.body = j.value("body", std::string());
    if (trim(doc.title).empty() && trim(doc.body).empty()) {
      out.errors.push_back({line_no, doc.id, "empty title and body"});
      continue;
    }
    out.documents.push_back(std::move(doc));
  }
  return out;
}

namespace detail {

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline size_t count_codepoints(std::string_view s) {
  size_t n = 0;
  for (char c : s)
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  return n;
}

// Byte offset just past the k-th codepoint.
inline size_t byte_offset_of_codepoint(std::string_view s, size_t k) {
  size_t count = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
      if (count == k) return i;
      ++count;
    }
  }
  return s.size();
}

}  // namespace detail

/// Title plus the leading fraction of the body. The cut point is
/// ceil(fraction * body codepoint count), extended rightward to the next
/// whitespace so no word is split; title and lead are joined by a sentence
/// separator.
inline std::string extract_lead(const NewsDocument& doc, double fraction = 0.30) {
  if (fraction <= 0.0 || fraction > 1.0)
    throw ConfigError("lead fraction must be in (0, 1]: " + format_double(fraction));
  std::string title = trim(doc.title);
  std::string body = trim(doc.body);
  if (title.empty() && body.empty())
    throw DataError("document " + doc.id + " has empty title and body");

  std::string lead;
  if (!body.empty()) {
    const size_t total = detail::count_codepoints(body);
    const size_t want = static_cast<size_t>(std::ceil(fraction * static_cast<double>(total)));
    size_t cut = detail::byte_offset_of_codepoint(body, std::min(want, total));
    // extend to the end of the word only when the cut landed inside one
    if (cut > 0 && cut < body.size() && !detail::is_ascii_space(body[cut - 1]))
      while (cut < body.size() && !detail::is_ascii_space(body[cut])) ++cut;
    lead = trim(std::string_view(body).substr(0, cut));
  }

  if (title.empty()) return lead;
  if (lead.empty()) return title;
  char last = title.back();
  bool punctuated = last == '.' || last == '!' || last == '?' || last == ':' || last == ';';
  return title + (punctuated ? " " : ". ") + lead;
}

/// Stable partition of document indices by period. Order within a period
/// follows the input corpus order.
inline std::vector<std::vector<size_t>> group_by_period(const std::vector<NewsDocument>& docs,
                                                        const PeriodCalendar& calendar) {
  std::vector<std::vector<size_t>> buckets(calendar.size());
  for (size_t i = 0; i < docs.size(); ++i) buckets[calendar.period_of(docs[i].timestamp)].push_back(i);
  return buckets;
}

}  // namespace semindex

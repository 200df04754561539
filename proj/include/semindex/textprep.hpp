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

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "semindex/common.hpp"
#include "semindex/stemmer_it.hpp"

namespace semindex {

namespace detail {

// Letters recognized by the tokenizer: ASCII plus Latin-1 supplement and
// Latin Extended-A. Covers Italian and the other Western European alphabets
// that show up in the press corpus.
inline bool is_word_codepoint(char32_t c) {
  if ((c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z')) return true;
  if (c >= 0xC0 && c <= 0xFF) return c != 0xD7 && c != 0xF7;
  if (c >= 0x100 && c <= 0x17F) return true;
  return false;
}

inline char32_t lower_codepoint(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  // Latin Extended-A alternates upper/lower at even/odd code points.
  if (c >= 0x100 && c <= 0x177 && (c % 2 == 0)) return c + 1;
  if (c == 0x178) return 0xFF;
  if (c >= 0x179 && c <= 0x17E && (c % 2 == 1)) return c + 1;
  return c;
}

}  // namespace detail

/// Splits text into lowercase word tokens. Any non-letter (digits,
/// punctuation, symbols, malformed bytes) acts as a separator and is
/// dropped; accented letters are preserved.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  size_t i = 0;
  while (i < text.size()) {
    char32_t cp = utf8::decode(text, i);
    if (detail::is_word_codepoint(cp)) {
      utf8::encode(detail::lower_codepoint(cp), cur);
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

class StopwordSet {
 public:
  StopwordSet() = default;

  static StopwordSet load(const std::string& path) {
    StopwordSet s;
    for (const std::string& raw : read_lines(path)) {
      std::string line = trim(raw);
      if (line.empty() || line[0] == '#') continue;
      s.words_.insert(line);
    }
    return s;
  }

  static StopwordSet from_words(std::vector<std::string> words) {
    StopwordSet s;
    for (auto& w : words) s.words_.insert(std::move(w));
    return s;
  }

  bool contains(const std::string& token) const { return words_.count(token) != 0; }
  size_t size() const { return words_.size(); }

  std::vector<std::string> filter(const std::vector<std::string>& tokens) const {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens)
      if (!contains(t)) out.push_back(t);
    return out;
  }

 private:
  std::unordered_set<std::string> words_;
};

/// A keyword entry: canonical id plus its variant phrases. Variants are
/// stored preprocessed; each phrase unit matches either the stemmed or the
/// surface (case-folded, unstemmed) form of a stream token. Surface matching
/// is used for acronym variants ('=' prefix in the dictionary file) that a
/// stemmer would distort.
struct ErkVariant {
  bool exact = false;                // match surface forms instead of stems
  std::vector<std::string> units;    // preprocessed phrase tokens
};

struct ErkEntry {
  std::string id;
  std::vector<ErkVariant> variants;
};

class ErkDictionary {
 public:
  static ErkDictionary load(const std::string& path, const StopwordSet& stopwords,
                            const Stemmer& stemmer) {
    ErkDictionary dict;
    std::unordered_map<std::string, std::string> seen_variants;  // key -> entry id
    size_t line_no = 0;
    for (const std::string& raw : read_lines(path)) {
      ++line_no;
      std::string line = trim(raw);
      if (line.empty() || line[0] == '#') continue;
      size_t colon = line.find(':');
      if (colon == std::string::npos)
        throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'id: variants'");
      std::string id = trim(line.substr(0, colon));
      if (id.empty())
        throw ConfigError(path + ":" + std::to_string(line_no) + ": empty canonical id");
      if (dict.index_of_.count(id))
        throw ConfigError(path + ":" + std::to_string(line_no) + ": duplicate canonical id " + id);

      ErkEntry entry;
      entry.id = id;
      for (const std::string& vraw : split(line.substr(colon + 1), '|')) {
        std::string vtext = trim(vraw);
        if (vtext.empty()) continue;
        ErkVariant var;
        if (vtext[0] == '=') {
          var.exact = true;
          vtext = trim(vtext.substr(1));
        }
        var.units = stopwords.filter(tokenize(vtext));
        if (!var.exact)
          for (auto& u : var.units) u = stemmer.apply(u);
        if (var.units.empty())
          throw ConfigError(path + ":" + std::to_string(line_no) + ": variant '" + vtext +
                            "' reduces to nothing after preprocessing");
        std::string key = var.exact ? "=" : "~";
        for (const auto& u : var.units) key += u + "\x1f";
        auto [it, inserted] = seen_variants.emplace(key, id);
        if (!inserted) {
          if (it->second != id)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": variant '" + vtext +
                              "' already belongs to entry " + it->second);
          continue;  // duplicate within the same entry, e.g. plural with equal stem
        }
        entry.variants.push_back(std::move(var));
      }
      if (entry.variants.empty())
        throw ConfigError(path + ":" + std::to_string(line_no) + ": entry " + id +
                          " has no usable variant");
      dict.index_of_[entry.id] = dict.entries_.size();
      dict.entries_.push_back(std::move(entry));
    }
    if (dict.entries_.empty()) throw ConfigError(path + ": empty dictionary");
    return dict;
  }

  static ErkDictionary from_entries(std::vector<ErkEntry> entries) {
    ErkDictionary dict;
    for (auto& e : entries) {
      dict.index_of_[e.id] = dict.entries_.size();
      dict.entries_.push_back(std::move(e));
    }
    return dict;
  }

  const std::vector<ErkEntry>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.id);
    return out;
  }

  bool has(const std::string& id) const { return index_of_.count(id) != 0; }

 private:
  std::vector<ErkEntry> entries_;
  std::unordered_map<std::string, size_t> index_of_;
};

/// One token of a preprocessed stream: either a cleaned, stemmed word or a
/// canonical keyword occurrence.
struct StreamToken {
  enum class Kind { word, erk };
  Kind kind = Kind::word;
  std::string text;  // stemmed word, or canonical id for erk tokens

  bool is_erk() const { return kind == Kind::erk; }
  friend bool operator==(const StreamToken&, const StreamToken&) = default;
};

using TokenStream = std::vector<StreamToken>;

namespace detail {

// Word token before aliasing; keeps the surface form so exact variants can
// still see it after stemming.
struct PrepToken {
  std::string raw;
  std::string stem;
};

}  // namespace detail

/// Replaces keyword-variant occurrences with canonical tokens. Matching is
/// greedy left-to-right; at each position the longest variant wins, with
/// exact ties broken by dictionary order.
inline TokenStream alias_keywords(const std::vector<detail::PrepToken>& tokens,
                                  const ErkDictionary& dict) {
  // First-unit lookup tables for stem and surface matches.
  struct Candidate {
    size_t entry = 0;
    size_t variant = 0;
    const ErkVariant* var = nullptr;
  };
  std::unordered_map<std::string, std::vector<Candidate>> by_stem, by_raw;
  for (size_t e = 0; e < dict.entries().size(); ++e) {
    const auto& entry = dict.entries()[e];
    for (size_t v = 0; v < entry.variants.size(); ++v) {
      const ErkVariant& var = entry.variants[v];
      auto& table = var.exact ? by_raw : by_stem;
      table[var.units[0]].push_back(Candidate{e, v, &var});
    }
  }

  auto matches_at = [&](const ErkVariant& var, size_t pos) {
    if (pos + var.units.size() > tokens.size()) return false;
    for (size_t k = 0; k < var.units.size(); ++k) {
      const auto& tok = tokens[pos + k];
      const std::string& want = var.units[k];
      if (var.exact ? tok.raw != want : tok.stem != want) return false;
    }
    return true;
  };

  TokenStream out;
  out.reserve(tokens.size());
  size_t pos = 0;
  while (pos < tokens.size()) {
    const Candidate* best = nullptr;
    for (const auto* table : {&by_stem, &by_raw}) {
      const std::string& key = table == &by_stem ? tokens[pos].stem : tokens[pos].raw;
      auto it = table->find(key);
      if (it == table->end()) continue;
      for (const Candidate& c : it->second) {
        if (!matches_at(*c.var, pos)) continue;
        if (!best || c.var->units.size() > best->var->units.size() ||
            (c.var->units.size() == best->var->units.size() &&
             (c.entry < best->entry || (c.entry == best->entry && c.variant < best->variant))))
          best = &c;
      }
    }
    if (best) {
      out.push_back(StreamToken{StreamToken::Kind::erk, dict.entries()[best->entry].id});
      pos += best->var->units.size();
    } else {
      out.push_back(StreamToken{StreamToken::Kind::word, tokens[pos].stem});
      ++pos;
    }
  }
  return out;
}

/// Full preprocessing chain for one document text:
/// tokenize -> stopword filter -> stem -> keyword aliasing.
inline TokenStream preprocess_text(std::string_view text, const StopwordSet& stopwords,
                                   const Stemmer& stemmer, const ErkDictionary& dict) {
  std::vector<detail::PrepToken> prep;
  for (auto& t : stopwords.filter(tokenize(text))) {
    detail::PrepToken p;
    p.stem = stemmer.apply(t);
    p.raw = std::move(t);
    prep.push_back(std::move(p));
  }
  return alias_keywords(prep, dict);
}

/// Stems plain word tokens of an existing stream; erk tokens pass through.
inline TokenStream stem_stream(const TokenStream& stream, const Stemmer& stemmer) {
  TokenStream out;
  out.reserve(stream.size());
  for (const auto& t : stream) {
    if (t.is_erk()) {
      out.push_back(t);
    } else {
      out.push_back(StreamToken{StreamToken::Kind::word, stemmer.apply(t.text)});
    }
  }
  return out;
}

}  // namespace semindex

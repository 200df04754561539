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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "semindex/common.hpp"

namespace semindex {

namespace utf8 {

/// Decodes one UTF-8 sequence starting at s[i]; advances i. Returns 0xFFFD
/// for malformed input (advancing one byte).
inline char32_t decode(std::string_view s, size_t& i) {
  unsigned char c = static_cast<unsigned char>(s[i]);
  if (c < 0x80) {
    ++i;
    return c;
  }
  int len = 0;
  char32_t cp = 0;
  if ((c & 0xE0) == 0xC0) {
    len = 2;
    cp = c & 0x1F;
  } else if ((c & 0xF0) == 0xE0) {
    len = 3;
    cp = c & 0x0F;
  } else if ((c & 0xF8) == 0xF0) {
    len = 4;
    cp = c & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + static_cast<size_t>(len) > s.size()) {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k < len; ++k) {
    unsigned char cc = static_cast<unsigned char>(s[i + static_cast<size_t>(k)]);
    if ((cc & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (cc & 0x3F);
  }
  i += static_cast<size_t>(len);
  return cp;
}

inline void encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

inline std::u32string decode_all(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) out += decode(s, i);
  return out;
}

inline std::string encode_all(const std::u32string& s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) encode(cp, out);
  return out;
}

}  // namespace utf8

/// Snowball stemming algorithm for Italian.
///
/// Suffix stripping runs in four passes (attached pronouns, standard
/// suffixes, verb suffixes, residual vowels) over the regions R1/R2/RV of
/// the word. Region boundaries are computed once up front and tracked as
/// positions while the word shrinks.
class ItalianStemmer {
 public:
  std::string stem(std::string_view word_utf8) const {
    std::u32string w = utf8::decode_all(word_utf8);
    to_lower(w);
    prelude(w);

    const size_t r1 = region_after_vowel_nonvowel(w, 0);
    const size_t r2 = region_after_vowel_nonvowel(w, r1);
    const size_t rv = region_rv(w);

    step0_pronouns(w, rv);
    bool removed = step1_standard(w, r1, r2, rv);
    if (!removed) step2_verbs(w, rv);
    step3a_vowel(w, rv);
    step3b_chgh(w, rv);

    postlude(w);
    return utf8::encode_all(w);
  }

 private:
  static constexpr char32_t kAGrave = U'à', kEGrave = U'è', kIGrave = U'ì',
                            kOGrave = U'ò', kUGrave = U'ù';

  static bool is_vowel(char32_t c) {
    switch (c) {
      case U'a':
      case U'e':
      case U'i':
      case U'o':
      case U'u':
      case kAGrave:
      case kEGrave:
      case kIGrave:
      case kOGrave:
      case kUGrave:
        return true;
      default:
        return false;
    }
  }

  static void to_lower(std::u32string& w) {
    for (auto& c : w) {
      if (c >= U'A' && c <= U'Z') c += 32;
      else if (c >= 0xC0 && c <= 0xDE && c != 0xD7) c += 32;
    }
  }

  static void prelude(std::u32string& w) {
    for (auto& c : w) {
      switch (c) {
        case U'á': c = kAGrave; break;
        case U'é': c = kEGrave; break;
        case U'í': c = kIGrave; break;
        case U'ó': c = kOGrave; break;
        case U'ú': c = kUGrave; break;
        default: break;
      }
    }
    for (size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i] == U'q' && w[i + 1] == U'u') w[i + 1] = U'U';
    }
    for (size_t i = 0; i + 2 < w.size();) {
      if (is_vowel(w[i]) && (w[i + 1] == U'i' || w[i + 1] == U'u') && is_vowel(w[i + 2])) {
        w[i + 1] = (w[i + 1] == U'i') ? U'I' : U'U';
        i += 2;
      } else {
        ++i;
      }
    }
  }

  static void postlude(std::u32string& w) {
    for (auto& c : w) {
      if (c == U'I') c = U'i';
      else if (c == U'U') c = U'u';
    }
  }

  // Region starting after the first non-vowel that follows a vowel at or
  // after `from`; end of word when absent.
  static size_t region_after_vowel_nonvowel(const std::u32string& w, size_t from) {
    for (size_t k = from + 1; k < w.size(); ++k) {
      if (!is_vowel(w[k]) && is_vowel(w[k - 1])) return k + 1;
    }
    return w.size();
  }

  static size_t region_rv(const std::u32string& w) {
    const size_t n = w.size();
    if (n < 3) return n;
    if (!is_vowel(w[1])) {
      for (size_t k = 2; k < n; ++k)
        if (is_vowel(w[k])) return k + 1;
      return n;
    }
    if (is_vowel(w[0])) {
      for (size_t k = 2; k < n; ++k)
        if (!is_vowel(w[k])) return k + 1;
      return n;
    }
    return 3;
  }

  static bool ends_with(const std::u32string& w, std::u32string_view suf) {
    return w.size() >= suf.size() && w.compare(w.size() - suf.size(), suf.size(), suf) == 0;
  }

  // True when suffix `suf` terminates w with its first character at or past
  // `region`.
  static bool suffix_in(const std::u32string& w, std::u32string_view suf, size_t region) {
    return ends_with(w, suf) && w.size() - suf.size() >= region;
  }

  template <size_t N>
  static std::u32string_view longest_ending(const std::u32string& w,
                                            const std::array<std::u32string_view, N>& sufs) {
    std::u32string_view best{};
    for (auto s : sufs)
      if (s.size() > best.size() && ends_with(w, s)) best = s;
    return best;
  }

  static void step0_pronouns(std::u32string& w, size_t rv) {
    static const std::array<std::u32string_view, 37> kPronouns = {
        U"gliela", U"gliele", U"glieli", U"glielo", U"gliene", U"sene", U"mela", U"mele",
        U"meli",   U"melo",   U"mene",   U"tela",   U"tele",   U"teli", U"telo", U"tene",
        U"cela",   U"cele",   U"celi",   U"celo",   U"cene",   U"vela", U"vele", U"veli",
        U"velo",   U"vene",   U"gli",    U"ci",     U"la",     U"le",   U"li",   U"lo",
        U"mi",     U"ne",     U"si",     U"ti",     U"vi"};
    std::u32string_view pron = longest_ending(w, kPronouns);
    if (pron.empty()) return;
    const size_t cut = w.size() - pron.size();
    std::u32string head = w.substr(0, cut);
    for (std::u32string_view pre : {std::u32string_view(U"ando"), std::u32string_view(U"endo")}) {
      if (suffix_in(head, pre, rv)) {
        w.resize(cut);
        return;
      }
    }
    for (std::u32string_view pre :
         {std::u32string_view(U"ar"), std::u32string_view(U"er"), std::u32string_view(U"ir")}) {
      if (suffix_in(head, pre, rv)) {
        w.resize(cut);
        w += U'e';
        return;
      }
    }
  }

  enum class S1 { r2_delete, azione, logia, uzione, enza, amento, amente, ita, ivo };

  static bool step1_standard(std::u32string& w, size_t r1, size_t r2, size_t rv) {
    struct Rule {
      std::u32string_view suf;
      S1 kind;
    };
    static const Rule kRules[] = {
        {U"anza", S1::r2_delete},   {U"anze", S1::r2_delete},  {U"ico", S1::r2_delete},
        {U"ici", S1::r2_delete},    {U"ica", S1::r2_delete},   {U"ice", S1::r2_delete},
        {U"iche", S1::r2_delete},   {U"ichi", S1::r2_delete},  {U"ismo", S1::r2_delete},
        {U"ismi", S1::r2_delete},   {U"abile", S1::r2_delete}, {U"abili", S1::r2_delete},
        {U"ibile", S1::r2_delete},  {U"ibili", S1::r2_delete}, {U"ista", S1::r2_delete},
        {U"iste", S1::r2_delete},   {U"isti", S1::r2_delete},  {U"istà", S1::r2_delete},
        {U"istè", S1::r2_delete}, {U"istì", S1::r2_delete}, {U"oso", S1::r2_delete},
        {U"osi", S1::r2_delete},    {U"osa", S1::r2_delete},   {U"ose", S1::r2_delete},
        {U"mente", S1::r2_delete},  {U"atrice", S1::r2_delete}, {U"atrici", S1::r2_delete},
        {U"ante", S1::r2_delete},   {U"anti", S1::r2_delete},
        {U"azione", S1::azione},    {U"azioni", S1::azione},   {U"atore", S1::azione},
        {U"atori", S1::azione},
        {U"logia", S1::logia},      {U"logie", S1::logia},
        {U"uzione", S1::uzione},    {U"uzioni", S1::uzione},   {U"usione", S1::uzione},
        {U"usioni", S1::uzione},
        {U"enza", S1::enza},        {U"enze", S1::enza},
        {U"amento", S1::amento},    {U"amenti", S1::amento},   {U"imento", S1::amento},
        {U"imenti", S1::amento},
        {U"amente", S1::amente},
        {U"ità", S1::ita},
        {U"ivo", S1::ivo},          {U"ivi", S1::ivo},         {U"iva", S1::ivo},
        {U"ive", S1::ivo},
    };

    const Rule* best = nullptr;
    for (const Rule& r : kRules) {
      if (ends_with(w, r.suf) && (!best || r.suf.size() > best->suf.size())) best = &r;
    }
    if (!best) return false;
    const size_t start = w.size() - best->suf.size();

    switch (best->kind) {
      case S1::r2_delete:
        if (start < r2) return false;
        w.resize(start);
        return true;
      case S1::azione:
        if (start < r2) return false;
        w.resize(start);
        if (suffix_in(w, U"ic", r2)) w.resize(w.size() - 2);
        return true;
      case S1::logia:
        if (start < r2) return false;
        w.resize(start);
        w += U"log";
        return true;
      case S1::uzione:
        if (start < r2) return false;
        w.resize(start);
        w += U'u';
        return true;
      case S1::enza:
        if (start < r2) return false;
        w.resize(start);
        w += U"ente";
        return true;
      case S1::amento:
        if (start < rv) return false;
        w.resize(start);
        return true;
      case S1::amente:
        if (start < r1) return false;
        w.resize(start);
        if (suffix_in(w, U"iv", r2)) {
          w.resize(w.size() - 2);
          if (suffix_in(w, U"at", r2)) w.resize(w.size() - 2);
        } else if (suffix_in(w, U"os", r2) || suffix_in(w, U"ic", r2)) {
          w.resize(w.size() - 2);
        }
        return true;
      case S1::ita:
        if (start < r2) return false;
        w.resize(start);
        for (std::u32string_view pre :
             {std::u32string_view(U"abil"), std::u32string_view(U"ic"), std::u32string_view(U"iv")}) {
          if (suffix_in(w, pre, r2)) {
            w.resize(w.size() - pre.size());
            break;
          }
        }
        return true;
      case S1::ivo:
        if (start < r2) return false;
        w.resize(start);
        if (suffix_in(w, U"at", r2)) {
          w.resize(w.size() - 2);
          if (suffix_in(w, U"ic", r2)) w.resize(w.size() - 2);
        }
        return true;
    }
    return false;
  }

  static void step2_verbs(std::u32string& w, size_t rv) {
    static const std::array<std::u32string_view, 87> kVerbs = {
        U"erebbero", U"irebbero", U"assero",  U"assimo",  U"eranno", U"erebbe", U"eremmo",
        U"ereste",   U"eresti",   U"essero",  U"iranno",  U"irebbe", U"iremmo", U"ireste",
        U"iresti",   U"iscano",   U"iscono",  U"issero",  U"arono",  U"avamo",  U"avano",
        U"avate",    U"eremo",    U"erete",   U"erono",   U"evamo",  U"evano",  U"evate",
        U"iremo",    U"irete",    U"irono",   U"ivamo",   U"ivano",  U"ivate",  U"ammo",
        U"ando",     U"asse",     U"assi",    U"emmo",    U"enda",   U"ende",   U"endi",
        U"endo",     U"erai",     U"erei",    U"Iamo",    U"iamo",   U"immo",   U"irai",
        U"irei",     U"isca",     U"isce",    U"isci",    U"isco",   U"ano",    U"are",
        U"ata",      U"ate",      U"ati",     U"ato",     U"ava",    U"avi",    U"avo",
        U"erà", U"ere",      U"erò", U"ete",    U"eva",    U"evi",    U"evo",
        U"irà", U"ire",      U"irò", U"ita",    U"ite",    U"iti",    U"ito",
        U"iva",      U"ivi",      U"ivo",     U"ono",     U"uta",    U"ute",    U"uti",
        U"uto",      U"ar",       U"ir"};
    std::u32string_view suf = longest_ending(w, kVerbs);
    if (!suf.empty() && w.size() - suf.size() >= rv) w.resize(w.size() - suf.size());
  }

  static void step3a_vowel(std::u32string& w, size_t rv) {
    if (w.empty()) return;
    char32_t last = w.back();
    bool final_vowel = last == U'a' || last == U'e' || last == U'i' || last == U'o' ||
                       last == kAGrave || last == kEGrave || last == kIGrave || last == kOGrave;
    if (final_vowel && w.size() - 1 >= rv) {
      w.pop_back();
      if (!w.empty() && w.back() == U'i' && w.size() - 1 >= rv) w.pop_back();
    }
  }

  static void step3b_chgh(std::u32string& w, size_t rv) {
    if (w.size() < 2 || w.size() - 2 < rv) return;
    char32_t a = w[w.size() - 2], b = w.back();
    if ((a == U'c' || a == U'g') && b == U'h') w.pop_back();
  }
};

/// Token-level stemmer front end selected by language code ("it" for the
/// Italian algorithm, "none" to pass tokens through unchanged).
class Stemmer {
 public:
  static Stemmer make(std::string_view lang) {
    if (lang == "it" || lang == "italian") return Stemmer(Mode::italian);
    if (lang == "none" || lang.empty()) return Stemmer(Mode::none);
    throw ConfigError("unsupported stemmer language: " + std::string(lang));
  }

  std::string apply(std::string_view token) const {
    if (mode_ == Mode::none) return std::string(token);
    return it_.stem(token);
  }

  bool is_identity() const { return mode_ == Mode::none; }

 private:
  enum class Mode { none, italian };
  explicit Stemmer(Mode m) : mode_(m) {}
  Mode mode_;
  ItalianStemmer it_;
};

}  // namespace semindex

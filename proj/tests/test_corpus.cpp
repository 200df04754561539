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

#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "semindex/corpus.hpp"

using namespace semindex;

namespace {

NewsDocument make_doc(std::string title, std::string body) {
  NewsDocument d;
  d.id = "t";
  d.timestamp = parse_iso8601("2020-03-09T00:00:00Z");
  d.title = std::move(title);
  d.body = std::move(body);
  return d;
}

std::string write_temp(const std::string& name, const std::string& contents) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << contents;
  return path.string();
}

}  // namespace

TEST_CASE("extract_lead takes the title plus the leading body fraction") {
  // body "c d e f g h i j k l": 19 characters, ceil(0.3 * 19) = 6, which ends
  // on a space; the lead is the first three words.
  CHECK(extract_lead(make_doc("A B", "c d e f g h i j k l"), 0.30) == "A B. c d e");
  CHECK(extract_lead(make_doc("T", ""), 0.30) == "T");
  CHECK(extract_lead(make_doc("T", "word"), 1.0) == "T. word");
  CHECK(extract_lead(make_doc("", "solo body"), 1.0) == "solo body");
}

TEST_CASE("extract_lead never splits a word") {
  // cut lands mid-"considerevole": extends to the whole word
  auto doc = make_doc("T", "crollo considerevole oggi");
  // 25 chars, ceil(0.3*25)=8 -> inside "considerevole"
  CHECK(extract_lead(doc, 0.30) == "T. crollo considerevole");
}

TEST_CASE("extract_lead counts codepoints, not bytes") {
  // 10 letters, two of them accented (2 bytes each): ceil(0.3*10)=3
  auto doc = make_doc("", "àèì ab cde");
  CHECK(extract_lead(doc, 0.30) == "àèì");
}

TEST_CASE("extract_lead is monotone in the fraction") {
  auto doc = make_doc("", "uno due tre quattro cinque sei sette otto nove dieci");
  std::string prev;
  for (double f : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}) {
    std::string lead = extract_lead(doc, f);
    CHECK(lead.substr(0, prev.size()) == prev);
    prev = lead;
  }
  CHECK(prev == doc.body);  // fraction 1.0 returns the whole body
}

TEST_CASE("extract_lead rejects empty documents and bad fractions") {
  CHECK_THROWS_AS(extract_lead(make_doc("", ""), 0.3), DataError);
  CHECK_THROWS_AS(extract_lead(make_doc("T", "b"), 0.0), ConfigError);
  CHECK_THROWS_AS(extract_lead(make_doc("T", "b"), 1.5), ConfigError);
}

TEST_CASE("corpus loader validates records and reports rejects") {
  PeriodCalendar cal(Frequency::weekly, Weekday::friday, {2020, 3, 1}, {2020, 3, 31});
  std::string corpus =
      R"({"id":"a","timestamp":"2020-03-09T08:00:00Z","title":"T1","body":"B1"})" "\n"
      R"({"id":"b","timestamp":"2020-03-10T08:00:00Z","title":"T2","body":"B2"})" "\n"
      "not json\n"
      R"({"id":"a","timestamp":"2020-03-11T08:00:00Z","title":"dup","body":"x"})" "\n"
      R"({"id":"c","timestamp":"not-a-date","title":"T","body":"B"})" "\n"
      R"({"id":"d","timestamp":"2021-01-01T00:00:00Z","title":"T","body":"B"})" "\n"
      R"({"id":"e","timestamp":"2020-03-12T08:00:00Z","title":"","body":""})" "\n"
      R"({"id":"f","timestamp":"2020-03-12T08:00:00Z","title":"","body":"only body"})" "\n";
  auto path = write_temp("semindex_corpus_test.jsonl", corpus);
  CorpusLoad load = load_corpus(path, cal);
  REQUIRE(load.documents.size() == 3);  // a, b, f
  CHECK(load.documents[0].id == "a");
  CHECK(load.documents[1].id == "b");
  CHECK(load.documents[2].id == "f");
  REQUIRE(load.errors.size() == 5);
  CHECK(load.errors[0].message == "not a JSON object");
  CHECK(load.errors[1].message == "duplicate id");
  CHECK(load.errors[1].id == "a");
  CHECK(load.errors[3].id == "d");  // out of calendar range
  CHECK(load.errors[4].message == "empty title and body");
  std::remove(path.c_str());
}

TEST_CASE("grouping by period partitions the corpus exactly") {
  PeriodCalendar cal(Frequency::weekly, Weekday::friday, {2020, 3, 1}, {2020, 3, 31});
  std::vector<NewsDocument> docs;
  for (int day = 2; day <= 30; ++day) {
    NewsDocument d;
    d.id = "d" + std::to_string(day);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "2020-03-%02dT10:00:00Z", day);
    d.timestamp = parse_iso8601(buf);
    d.title = "t";
    d.body = "b";
    docs.push_back(d);
  }
  auto buckets = group_by_period(docs, cal);
  size_t total = 0;
  std::unordered_set<std::string> seen;
  for (size_t p = 0; p < buckets.size(); ++p) {
    for (size_t i : buckets[p]) {
      total++;
      CHECK(seen.insert(docs[i].id).second);      // no duplicates
      CHECK(cal.period_of(docs[i].timestamp) == p);  // in the right bucket
    }
  }
  CHECK(total == docs.size());
}

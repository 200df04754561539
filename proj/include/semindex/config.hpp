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

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "semindex/common.hpp"
#include "semindex/dates.hpp"
#include "semindex/forecast.hpp"

namespace semindex {

/// Everything a pipeline run needs. Loaded from one JSON config file; every
/// key can be overridden by a CLI flag.
struct PipelineConfig {
  std::string corpus_path;
  std::string dictionary_path;
  std::string stoplist_path;
  std::string lexicon_path;
  std::string prices_dir;
  std::string output_dir = "out";

  std::string frequency = "weekly";
  std::string week_end = "friday";
  std::string calendar_start;
  std::string calendar_end;

  double lead_fraction = 0.30;
  size_t window = 3;
  uint32_t min_edge_weight = 1;
  std::string stem_lang = "it";

  int pls_components = 1;
  double rv_scale = 1e4;
  int dm_lags = -1;

  std::vector<std::string> instruments;  // empty: every *.csv under prices_dir
  std::vector<std::string> target_kinds{"return", "volatility"};
  std::vector<std::string> models{"RW", "AR", "ERK", "EW", "SI"};
  std::string oos_start;  // first forecasted period end date
  std::string oos_end;    // last forecasted period end date
  size_t min_window = 10;
  bool rw_recursive_mean = false;
  bool strict_ingest = false;

  int threads = 1;
  std::string dump_networks_dir;
  std::string dump_pls_dir;

  static PipelineConfig from_json_file(const std::string& path) {
    nlohmann::json j = nlohmann::json::parse(read_file(path), nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw ConfigError("config file is not a JSON object: " + path);
    return from_json(j, path);
  }

  static PipelineConfig from_json(const nlohmann::json& j, const std::string& origin) {
    PipelineConfig c;
    auto get_str = [&](const char* key, std::string& into) {
      if (j.contains(key)) {
        if (!j[key].is_string()) throw ConfigError(origin + ": key '" + key + "' must be a string");
        into = j[key].get<std::string>();
      }
    };
    auto get_num = [&](const char* key, auto& into) {
      if (j.contains(key)) {
        if (!j[key].is_number()) throw ConfigError(origin + ": key '" + key + "' must be a number");
        into = j[key].get<std::decay_t<decltype(into)>>();
      }
    };
    auto get_bool = [&](const char* key, bool& into) {
      if (j.contains(key)) {
        if (!j[key].is_boolean()) throw ConfigError(origin + ": key '" + key + "' must be a bool");
        into = j[key].get<bool>();
      }
    };
    auto get_list = [&](const char* key, std::vector<std::string>& into) {
      if (j.contains(key)) {
        if (!j[key].is_array()) throw ConfigError(origin + ": key '" + key + "' must be an array");
        into.clear();
        for (const auto& e : j[key]) {
          if (!e.is_string()) throw ConfigError(origin + ": key '" + key + "' must hold strings");
          into.push_back(e.get<std::string>());
        }
      }
    };

    get_str("corpus", c.corpus_path);
    get_str("erk_dict", c.dictionary_path);
    get_str("stoplist", c.stoplist_path);
    get_str("lexicon", c.lexicon_path);
    get_str("prices", c.prices_dir);
    get_str("output", c.output_dir);
    get_str("frequency", c.frequency);
    get_str("week_end", c.week_end);
    get_str("calendar_start", c.calendar_start);
    get_str("calendar_end", c.calendar_end);
    get_num("lead_fraction", c.lead_fraction);
    get_num("window", c.window);
    get_num("min_edge_weight", c.min_edge_weight);
    get_str("stem_lang", c.stem_lang);
    get_num("pls_components", c.pls_components);
    get_num("rv_scale", c.rv_scale);
    get_num("dm_lags", c.dm_lags);
    get_list("instruments", c.instruments);
    get_list("target_kinds", c.target_kinds);
    get_list("models", c.models);
    get_str("oos_start", c.oos_start);
    get_str("oos_end", c.oos_end);
    get_num("min_window", c.min_window);
    get_bool("rw_recursive_mean", c.rw_recursive_mean);
    get_bool("strict_ingest", c.strict_ingest);
    get_num("threads", c.threads);
    get_str("dump_networks", c.dump_networks_dir);
    get_str("dump_pls", c.dump_pls_dir);
    return c;
  }

  PeriodCalendar make_calendar() const {
    if (calendar_start.empty() || calendar_end.empty())
      throw ConfigError("config: calendar_start and calendar_end are required");
    return PeriodCalendar(parse_frequency(frequency), parse_weekday(week_end),
                          parse_date(calendar_start), parse_date(calendar_end));
  }

  std::vector<ModelId> model_ids() const {
    std::vector<ModelId> out;
    for (const auto& m : models) out.push_back(parse_model(m));
    if (out.empty()) throw ConfigError("config: empty model list");
    return out;
  }

  void require_file(const std::string& path, const std::string& what) const {
    if (path.empty()) throw ConfigError("config: missing " + what);
    if (!std::filesystem::exists(path)) throw ConfigError("config: " + what + " not found: " + path);
  }
};

}  // namespace semindex

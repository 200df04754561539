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

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "semindex/pipeline.hpp"

namespace {

using semindex::PipelineConfig;

struct Overrides {
  std::string config_path;
  // Optional values; only applied when the flag was passed.
  std::string corpus, erk_dict, stoplist, lexicon, prices, output;
  std::string frequency, week_end, calendar_start, calendar_end;
  std::string stem_lang, oos_start, oos_end, models, instruments, target_kinds;
  std::string dump_networks, dump_pls;
  double lead_fraction = -1.0, rv_scale = -1.0;
  long long window = -1, min_edge_weight = -1, pls_components = -1, min_window = -1, threads = 0;
  long long dm_lags = -2;
  bool rw_recursive_mean = false, strict_ingest = false;
};

void add_common_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--corpus", o.corpus, "line-delimited corpus file");
  cmd->add_option("--erk-dict", o.erk_dict, "keyword dictionary file");
  cmd->add_option("--stoplist", o.stoplist, "stopword list file");
  cmd->add_option("--lexicon", o.lexicon, "polarity lexicon file");
  cmd->add_option("--prices", o.prices, "directory of <instrument>.csv price files");
  cmd->add_option("--output", o.output, "output directory");
  cmd->add_option("--frequency", o.frequency, "period frequency: weekly|daily");
  cmd->add_option("--week-end", o.week_end, "weekday ending weekly periods (default friday)");
  cmd->add_option("--start", o.calendar_start, "calendar range start date");
  cmd->add_option("--end", o.calendar_end, "calendar range end date");
  cmd->add_option("--lead-fraction", o.lead_fraction, "leading fraction of the body (default 0.30)");
  cmd->add_option("--window", o.window, "co-occurrence window in tokens (default 3)");
  cmd->add_option("--min-edge-weight", o.min_edge_weight, "prune edges below this weight");
  cmd->add_option("--stem-lang", o.stem_lang, "stemmer language code (it|none)");
  cmd->add_option("--pls-components", o.pls_components, "PLS component count (default 1)");
  cmd->add_option("--rv-scale", o.rv_scale, "realized-volatility percent scale (default 1e4)");
  cmd->add_option("--dm-lags", o.dm_lags, "HAC lag override for the DM test");
  cmd->add_option("--models", o.models, "comma-separated model subset, e.g. RW,AR,ERK");
  cmd->add_option("--instruments", o.instruments, "comma-separated instrument subset");
  cmd->add_option("--target-kinds", o.target_kinds, "comma-separated kinds: return,volatility");
  cmd->add_option("--oos-start", o.oos_start, "first forecasted period end date");
  cmd->add_option("--oos-end", o.oos_end, "last forecasted period end date");
  cmd->add_option("--min-window", o.min_window, "minimum estimation pairs (default 10)");
  cmd->add_flag("--rw-recursive-mean", o.rw_recursive_mean,
                "RW returns benchmark forecasts the recursive mean instead of zero");
  cmd->add_flag("--strict-ingest", o.strict_ingest, "fail on any rejected corpus record");
  cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
  cmd->add_option("--dump-networks", o.dump_networks, "directory for per-period edge lists");
  cmd->add_option("--dump-pls", o.dump_pls, "directory for per-vintage PLS weights");
}

PipelineConfig resolve_config(const Overrides& o) {
  PipelineConfig c;
  if (!o.config_path.empty()) c = PipelineConfig::from_json_file(o.config_path);
  auto s = [](const std::string& v, std::string& into) {
    if (!v.empty()) into = v;
  };
  s(o.corpus, c.corpus_path);
  s(o.erk_dict, c.dictionary_path);
  s(o.stoplist, c.stoplist_path);
  s(o.lexicon, c.lexicon_path);
  s(o.prices, c.prices_dir);
  s(o.output, c.output_dir);
  s(o.frequency, c.frequency);
  s(o.week_end, c.week_end);
  s(o.calendar_start, c.calendar_start);
  s(o.calendar_end, c.calendar_end);
  s(o.stem_lang, c.stem_lang);
  s(o.oos_start, c.oos_start);
  s(o.oos_end, c.oos_end);
  s(o.dump_networks, c.dump_networks_dir);
  s(o.dump_pls, c.dump_pls_dir);
  if (o.lead_fraction >= 0.0) c.lead_fraction = o.lead_fraction;
  if (o.rv_scale >= 0.0) c.rv_scale = o.rv_scale;
  if (o.window >= 0) c.window = static_cast<size_t>(o.window);
  if (o.min_edge_weight >= 0) c.min_edge_weight = static_cast<uint32_t>(o.min_edge_weight);
  if (o.pls_components >= 0) c.pls_components = static_cast<int>(o.pls_components);
  if (o.min_window >= 0) c.min_window = static_cast<size_t>(o.min_window);
  if (o.threads > 0) c.threads = static_cast<int>(o.threads);
  if (o.dm_lags >= -1) c.dm_lags = static_cast<int>(o.dm_lags);
  if (o.rw_recursive_mean) c.rw_recursive_mean = true;
  if (o.strict_ingest) c.strict_ingest = true;
  if (!o.models.empty()) c.models = semindex::split(o.models, ',');
  if (!o.instruments.empty()) c.instruments = semindex::split(o.instruments, ',');
  if (!o.target_kinds.empty()) c.target_kinds = semindex::split(o.target_kinds, ',');
  return c;
}

void print_log(const semindex::StageLog& log) {
  for (const auto& w : log.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& i : log.info) std::cout << i << "\n";
}

int run_ingest_validate(const PipelineConfig& config) {
  config.require_file(config.corpus_path, "corpus");
  semindex::PeriodCalendar calendar = config.make_calendar();
  semindex::CorpusLoad corpus = semindex::load_corpus(config.corpus_path, calendar);
  for (const auto& err : corpus.errors)
    std::cerr << "rejected line " << err.line << (err.id.empty() ? "" : " id=" + err.id) << ": "
              << err.message << "\n";

  std::vector<size_t> per_period(calendar.size(), 0);
  for (const auto& doc : corpus.documents) ++per_period[calendar.period_of(doc.timestamp)];
  std::cout << "documents=" << corpus.documents.size() << " rejected=" << corpus.errors.size()
            << " periods=" << calendar.size() << "\n";
  for (size_t p = 0; p < per_period.size(); ++p)
    if (per_period[p] > 0) std::cout << calendar.label(p) << "\t" << per_period[p] << "\n";
  if (config.strict_ingest && !corpus.errors.empty()) return 2;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semantic importance index over a news corpus, with forecasting backtests"};
  app.require_subcommand(1);

  Overrides o;
  auto* ingest = app.add_subcommand("ingest-validate", "validate a corpus file and print period counts");
  auto* build = app.add_subcommand("build-index", "build per-keyword importance score series");
  auto* senti = app.add_subcommand("sentiment", "build per-keyword sentiment and the aggregate series");
  auto* market = app.add_subcommand("market-prep", "build weekly return and volatility targets");
  auto* backtest = app.add_subcommand("backtest", "recursive out-of-sample forecasts from stored artifacts");
  auto* report = app.add_subcommand("report", "accuracy report from stored forecast tables");
  for (auto* cmd : {ingest, build, senti, market, backtest, report}) add_common_flags(cmd, o);

  CLI11_PARSE(app, argc, argv);

  try {
    PipelineConfig config = resolve_config(o);
    if (ingest->parsed()) return run_ingest_validate(config);
    semindex::StageLog log;
    if (build->parsed()) log = semindex::run_build_index(config);
    else if (senti->parsed()) log = semindex::run_sentiment(config);
    else if (market->parsed()) log = semindex::run_market_prep(config);
    else if (backtest->parsed()) log = semindex::run_backtest(config);
    else if (report->parsed()) log = semindex::run_report(config);
    print_log(log);
    return 0;
  } catch (const semindex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

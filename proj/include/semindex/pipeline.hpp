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

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "semindex/centrality.hpp"
#include "semindex/config.hpp"
#include "semindex/corpus.hpp"
#include "semindex/eval.hpp"
#include "semindex/forecast.hpp"
#include "semindex/index.hpp"
#include "semindex/marketdata.hpp"
#include "semindex/parallel.hpp"
#include "semindex/pls.hpp"
#include "semindex/sentiment.hpp"
#include "semindex/textprep.hpp"

namespace semindex {

namespace fs = std::filesystem;

inline std::string sanitize_filename(std::string s) {
  for (char& c : s)
    if (c == '/' || c == '\\' || c == ':') c = '_';
  return s;
}

/// Corpus -> per-period token streams grouped by calendar period. Documents
/// are preprocessed in parallel; outputs land in per-document slots, so the
/// grouping is independent of thread count and corpus file order within a
/// period is preserved.
struct PreparedCorpus {
  std::vector<std::vector<TokenStream>> streams_by_period;
  std::vector<RecordError> rejected;
  size_t document_count = 0;
};

inline PreparedCorpus prepare_corpus(const std::vector<NewsDocument>& docs,
                                     const PeriodCalendar& calendar, double lead_fraction,
                                     const StopwordSet& stopwords, const Stemmer& stemmer,
                                     const ErkDictionary& dict, int threads) {
  PreparedCorpus out;
  out.document_count = docs.size();
  std::vector<TokenStream> streams(docs.size());
  parallel_for(docs.size(), threads, [&](size_t i) {
    streams[i] = preprocess_text(extract_lead(docs[i], lead_fraction), stopwords, stemmer, dict);
  });
  out.streams_by_period.resize(calendar.size());
  for (size_t i = 0; i < docs.size(); ++i)
    out.streams_by_period[calendar.period_of(docs[i].timestamp)].push_back(std::move(streams[i]));
  return out;
}

struct IndexBuildOutput {
  ScoreMatrix scores;
  std::vector<NodeMeasures> measures;          // one per period
  std::vector<CooccurrenceNetwork> networks;   // one per period
};

/// The index construction chain for an already loaded and bucketed corpus.
/// Periods are processed in parallel when there are many, otherwise the
/// betweenness pass parallelizes over sources; either way results are
/// identical.
inline IndexBuildOutput build_index_from_streams(
    const std::vector<std::vector<TokenStream>>& streams_by_period, const ErkDictionary& dict,
    const PeriodCalendar& calendar, size_t window, uint32_t min_edge_weight, int threads) {
  IndexBuildOutput out;
  const size_t n_periods = streams_by_period.size();
  out.measures.resize(n_periods);
  out.networks.resize(n_periods);

  const int t = resolve_threads(threads);
  const bool parallel_periods = n_periods >= static_cast<size_t>(2 * t);
  parallel_for(n_periods, parallel_periods ? t : 1, [&](size_t p) {
    out.networks[p] = build_network(streams_by_period[p], window, min_edge_weight);
    out.measures[p] =
        compute_measures(streams_by_period[p], out.networks[p], parallel_periods ? 1 : t);
  });

  out.scores = build_score_matrix(out.measures, dict, calendar.labels());
  return out;
}

inline std::string measures_to_tsv(const NodeMeasures& m, const std::string& period_label) {
  std::string out = "period\ttoken\tprevalence\tdiversity\tconnectivity\tz_prev\tz_div\tz_conn\n";
  for (size_t i = 0; i < m.size(); ++i) {
    out += period_label;
    out += '\t';
    out += m.labels[i];
    out += '\t';
    out += format_double(m.prevalence[i]);
    out += '\t';
    out += format_double(m.diversity[i]);
    out += '\t';
    out += format_double(m.connectivity[i]);
    out += '\t';
    out += format_double(m.z_prev[i]);
    out += '\t';
    out += format_double(m.z_div[i]);
    out += '\t';
    out += format_double(m.z_conn[i]);
    out += '\n';
  }
  return out;
}

struct StageLog {
  std::vector<std::string> warnings;
  std::vector<std::string> info;
};

/// build-index: corpus -> score matrix + per-period measures (+ optional
/// network dumps). Writes scores.tsv and measures/<period>.tsv under the
/// output directory.
inline StageLog run_build_index(const PipelineConfig& config) {
  StageLog log;
  config.require_file(config.corpus_path, "corpus");
  config.require_file(config.dictionary_path, "dictionary");
  config.require_file(config.stoplist_path, "stoplist");

  PeriodCalendar calendar = config.make_calendar();
  Stemmer stemmer = Stemmer::make(config.stem_lang);
  StopwordSet stopwords = StopwordSet::load(config.stoplist_path);
  ErkDictionary dict = ErkDictionary::load(config.dictionary_path, stopwords, stemmer);

  CorpusLoad corpus = load_corpus(config.corpus_path, calendar);
  for (const auto& err : corpus.errors)
    log.warnings.push_back("rejected record line " + std::to_string(err.line) +
                           (err.id.empty() ? "" : " id=" + err.id) + ": " + err.message);
  if (config.strict_ingest && !corpus.errors.empty())
    throw DataError("corpus has " + std::to_string(corpus.errors.size()) +
                    " rejected records (strict mode)");
  if (corpus.documents.empty())
    log.warnings.push_back("corpus contains no valid documents; emitting an all-masked matrix");

  PreparedCorpus prepared =
      prepare_corpus(corpus.documents, calendar, config.lead_fraction, stopwords, stemmer, dict,
                     config.threads);
  IndexBuildOutput built =
      build_index_from_streams(prepared.streams_by_period, dict, calendar, config.window,
                               config.min_edge_weight, config.threads);

  fs::create_directories(config.output_dir);
  write_file((fs::path(config.output_dir) / "scores.tsv").string(), built.scores.to_tsv());

  fs::path measures_dir = fs::path(config.output_dir) / "measures";
  fs::create_directories(measures_dir);
  for (size_t p = 0; p < built.measures.size(); ++p) {
    std::string label = calendar.label(p);
    write_file((measures_dir / (sanitize_filename(label) + ".tsv")).string(),
               measures_to_tsv(built.measures[p], label));
  }

  if (!config.dump_networks_dir.empty()) {
    fs::create_directories(config.dump_networks_dir);
    for (size_t p = 0; p < built.networks.size(); ++p) {
      std::string label = calendar.label(p);
      write_file((fs::path(config.dump_networks_dir) / (sanitize_filename(label) + ".tsv")).string(),
                 built.networks[p].to_edge_list());
    }
  }

  log.info.push_back("documents=" + std::to_string(prepared.document_count));
  log.info.push_back("periods=" + std::to_string(calendar.size()));
  log.info.push_back("keywords=" + std::to_string(dict.size()));
  return log;
}

/// sentiment: corpus -> per-keyword sentiment matrix and the aggregate
/// sentiment series (mean over present keywords). Writes sentiment.tsv and
/// si.tsv.
inline StageLog run_sentiment(const PipelineConfig& config) {
  StageLog log;
  config.require_file(config.corpus_path, "corpus");
  config.require_file(config.dictionary_path, "dictionary");
  config.require_file(config.stoplist_path, "stoplist");
  config.require_file(config.lexicon_path, "lexicon");

  PeriodCalendar calendar = config.make_calendar();
  Stemmer stemmer = Stemmer::make(config.stem_lang);
  StopwordSet stopwords = StopwordSet::load(config.stoplist_path);
  ErkDictionary dict = ErkDictionary::load(config.dictionary_path, stopwords, stemmer);
  PolarityLexicon lexicon = PolarityLexicon::load(config.lexicon_path, stemmer);

  CorpusLoad corpus = load_corpus(config.corpus_path, calendar);
  for (const auto& err : corpus.errors)
    log.warnings.push_back("rejected record line " + std::to_string(err.line) +
                           (err.id.empty() ? "" : " id=" + err.id) + ": " + err.message);

  PreparedCorpus prepared =
      prepare_corpus(corpus.documents, calendar, config.lead_fraction, stopwords, stemmer, dict,
                     config.threads);

  std::vector<CooccurrenceNetwork> networks(calendar.size());
  parallel_for(calendar.size(), config.threads, [&](size_t p) {
    networks[p] = build_network(prepared.streams_by_period[p], config.window, config.min_edge_weight);
  });

  ScoreMatrix matrix = build_sentiment_matrix(networks, dict, calendar.labels(), lexicon);
  SentimentSeries si = aggregate_sentiment(matrix);

  fs::create_directories(config.output_dir);
  write_file((fs::path(config.output_dir) / "sentiment.tsv").string(), matrix.to_tsv());

  std::string si_tsv = "period\tvalue\n";
  for (size_t p = 0; p < si.values.size(); ++p) {
    si_tsv += si.period_labels[p];
    si_tsv += '\t';
    si_tsv += si.present[p] ? format_double(si.values[p]) : "NA";
    si_tsv += '\n';
  }
  write_file((fs::path(config.output_dir) / "si.tsv").string(), si_tsv);
  return log;
}

inline std::vector<std::string> discover_instruments(const PipelineConfig& config) {
  std::vector<std::string> out = config.instruments;
  if (out.empty()) {
    if (config.prices_dir.empty() || !fs::is_directory(config.prices_dir))
      throw ConfigError("config: prices directory not found: " + config.prices_dir);
    for (const auto& entry : fs::directory_iterator(config.prices_dir))
      if (entry.path().extension() == ".csv") out.push_back(entry.path().stem().string());
    std::sort(out.begin(), out.end());
  }
  if (out.empty()) throw ConfigError("config: no instrument price files found");
  return out;
}

/// market-prep: daily price files -> weekly return and realized-volatility
/// target files under <output>/targets/.
inline StageLog run_market_prep(const PipelineConfig& config) {
  StageLog log;
  PeriodCalendar calendar = config.make_calendar();
  auto instruments = discover_instruments(config);

  fs::path targets_dir = fs::path(config.output_dir) / "targets";
  fs::create_directories(targets_dir);
  for (const auto& instrument : instruments) {
    fs::path csv = fs::path(config.prices_dir) / (instrument + ".csv");
    config.require_file(csv.string(), "price file for " + instrument);
    PriceSeries prices = load_price_csv(csv.string(), instrument);
    TargetSeries ret = weekly_log_return(prices, calendar);
    TargetSeries rv = parkinson_rv(prices, calendar, config.rv_scale);
    write_file((targets_dir / (instrument + "_return.tsv")).string(), ret.to_tsv());
    write_file((targets_dir / (instrument + "_volatility.tsv")).string(), rv.to_tsv());
    log.info.push_back("prepared " + instrument);
  }
  return log;
}

/// backtest: consumes only the serialized score matrix, sentiment series and
/// target files; never raw text. Emits one forecasts table and one AIC path
/// per (instrument, kind).
inline StageLog run_backtest(const PipelineConfig& config) {
  StageLog log;
  fs::path out_dir(config.output_dir);
  fs::path scores_path = out_dir / "scores.tsv";
  config.require_file(scores_path.string(), "score matrix (run build-index first)");
  ScoreMatrix scores = ScoreMatrix::load_tsv(scores_path.string());

  PeriodCalendar calendar = config.make_calendar();
  {
    auto labels = calendar.labels();
    if (scores.period_labels() != labels)
      throw DataError("backtest: score matrix periods do not match the configured calendar");
  }

  auto model_ids = config.model_ids();
  bool want_si = false;
  for (auto m : model_ids) want_si |= m == ModelId::SI;

  SentimentSeries si;
  if (want_si) {
    fs::path si_path = out_dir / "si.tsv";
    config.require_file(si_path.string(), "sentiment series (run sentiment first)");
    TargetSeries parsed = TargetSeries::from_tsv(read_file(si_path.string()), "si",
                                                 TargetKind::ret, si_path.string());
    si.period_labels = parsed.period_labels;
    si.values = parsed.values;
    si.present = parsed.present;
    if (si.period_labels != scores.period_labels())
      throw DataError("backtest: sentiment series periods do not match the score matrix");
  }

  if (config.oos_start.empty() || config.oos_end.empty())
    throw ConfigError("config: oos_start and oos_end are required for backtests");
  size_t first_fc = calendar.index_of_period_ending(parse_date(config.oos_start));
  size_t last_fc = calendar.index_of_period_ending(parse_date(config.oos_end));
  if (first_fc > last_fc) throw ConfigError("config: oos_start after oos_end");

  BacktestSpec spec;
  spec.models = model_ids;
  spec.first_forecast = first_fc;
  spec.last_forecast = last_fc;
  spec.min_window = config.min_window;
  spec.pls_components = config.pls_components;
  spec.rw_recursive_mean = config.rw_recursive_mean;

  auto instruments = discover_instruments(config);
  fs::path targets_dir = out_dir / "targets";
  fs::path forecasts_dir = out_dir / "forecasts";
  fs::create_directories(forecasts_dir);

  for (const auto& instrument : instruments) {
    for (const auto& kind_name : config.target_kinds) {
      TargetKind kind = parse_target_kind(kind_name);
      fs::path target_path = targets_dir / (instrument + "_" + target_kind_name(kind) + ".tsv");
      config.require_file(target_path.string(), "target file (run market-prep first)");
      TargetSeries target = TargetSeries::from_tsv(read_file(target_path.string()), instrument,
                                                   kind, target_path.string());
      if (target.period_labels != scores.period_labels())
        throw DataError("backtest: target periods do not match the score matrix: " +
                        target_path.string());

      BacktestResult result = recursive_backtest(target, &scores, want_si ? &si : nullptr, spec);
      for (const auto& w : result.warnings) log.warnings.push_back(w);

      std::string stem = instrument + "_" + target_kind_name(kind);
      write_file((forecasts_dir / (stem + "_forecasts.tsv")).string(),
                 forecasts_to_tsv(result, target));
      if (result.has_aic_path) {
        std::string csv = "origin,diff\n";
        for (size_t i = 0; i < result.aic_diff.size(); ++i) {
          csv += target.period_labels[result.origins[i]];
          csv += ',';
          csv += format_double(result.aic_diff[i]);
          csv += '\n';
        }
        write_file((forecasts_dir / (stem + "_aic.csv")).string(), csv);
      }
      if (!config.dump_pls_dir.empty() && !result.pls_fits.empty()) {
        fs::path pls_dir = fs::path(config.dump_pls_dir) / stem;
        fs::create_directories(pls_dir);
        for (size_t i = 0; i < result.pls_fits.size(); ++i) {
          std::string label = sanitize_filename(target.period_labels[result.origins[i]]);
          write_file((pls_dir / (label + ".tsv")).string(), result.pls_fits[i].to_tsv());
        }
      }
      log.info.push_back("backtested " + stem + " over " + std::to_string(result.origins.size()) +
                         " origins");
    }
  }
  return log;
}

/// report: forecasts tables -> accuracy report per instrument (text panels +
/// JSON) and plot-ready AIC difference CSVs.
inline StageLog run_report(const PipelineConfig& config) {
  StageLog log;
  fs::path out_dir(config.output_dir);
  fs::path forecasts_dir = out_dir / "forecasts";
  fs::path reports_dir = out_dir / "reports";
  fs::create_directories(reports_dir);

  auto instruments = discover_instruments(config);

  for (const auto& instrument : instruments) {
    std::string text;
    nlohmann::json j;
    j["instrument"] = instrument;
    j["panels"] = nlohmann::json::array();
    for (const auto& kind_name : config.target_kinds) {
      TargetKind kind = parse_target_kind(kind_name);
      std::string stem = instrument + "_" + target_kind_name(kind);
      fs::path fc_path = forecasts_dir / (stem + "_forecasts.tsv");
      config.require_file(fc_path.string(), "forecasts table (run backtest first)");

      // Reassemble runs from the forecasts table.
      TargetSeries target;
      target.instrument = instrument;
      target.kind = kind;
      BacktestResult result;
      {
        auto lines = split(read_file(fc_path.string()), '\n');
        std::unordered_map<std::string, size_t> run_of;
        std::unordered_map<std::string, size_t> origin_of;
        for (size_t i = 1; i < lines.size(); ++i) {
          if (trim(lines[i]).empty()) continue;
          auto f = split(lines[i], '\t');
          if (f.size() != 4) throw DataError(fc_path.string() + ": bad row " + std::to_string(i + 1));
          const std::string& origin = f[0];
          const std::string& model = f[1];
          double fc, rz;
          if (!parse_double(f[2], fc) || !parse_double(f[3], rz))
            throw DataError(fc_path.string() + ": bad number in row " + std::to_string(i + 1));
          if (!run_of.count(model)) {
            run_of[model] = result.runs.size();
            result.runs.push_back(ForecastRun{parse_model(model), {}});
          }
          size_t oidx;
          auto it = origin_of.find(origin);
          if (it == origin_of.end()) {
            oidx = target.period_labels.size();
            origin_of[origin] = oidx;
            target.period_labels.push_back(origin);
            result.origins.push_back(oidx);
          } else {
            oidx = it->second;
          }
          OriginRecord rec;
          rec.origin = oidx;
          rec.forecast = fc;
          rec.realized = rz;
          result.runs[run_of[model]].records.push_back(rec);
        }
      }

      fs::path aic_path = forecasts_dir / (stem + "_aic.csv");
      if (fs::exists(aic_path)) {
        auto lines = split(read_file(aic_path.string()), '\n');
        for (size_t i = 1; i < lines.size(); ++i) {
          if (trim(lines[i]).empty()) continue;
          auto f = split(lines[i], ',');
          double v;
          if (f.size() != 2 || !parse_double(f[1], v))
            throw DataError(aic_path.string() + ": bad row " + std::to_string(i + 1));
          result.aic_diff.push_back(v);
        }
        result.has_aic_path = true;
      }

      BacktestReport report = evaluate_backtest(target, result, config.dm_lags);
      text += render_report_panel(report);
      text += '\n';
      j["panels"].push_back(report_to_json(report));
      if (!report.aic_diff.empty())
        write_file((reports_dir / (stem + "_aic.csv")).string(), aic_path_to_csv(report));
    }
    write_file((reports_dir / ("report_" + instrument + ".txt")).string(), text);
    write_file((reports_dir / ("report_" + instrument + ".json")).string(), j.dump(2) + "\n");
    log.info.push_back("reported " + instrument);
  }
  return log;
}

}  // namespace semindex

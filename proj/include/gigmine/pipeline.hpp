#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gigmine/birank.hpp"
#include "gigmine/ingest.hpp"
#include "gigmine/labeling.hpp"
#include "gigmine/link_prediction.hpp"
#include "gigmine/success_forecast.hpp"
#include "gigmine/synth.hpp"
#include "json.hpp"

namespace gigmine {

struct DataPaths {
  std::string events, releases, labels;
};

struct PreprocessConfig {
  int min_first_year = 2007;
  MinActivityOptions activity{};
};

struct RoutesConfig {
  std::vector<std::size_t> n{4, 5};
  std::size_t top_k = 20;
};

/// Everything a run needs. Defaults are the published settings where one
/// exists.
struct RunConfig {
  DataPaths data;
  std::string out = "gigmine-out";
  std::size_t threads = 0;  // 0: all logical cores
  std::uint64_t seed = 42;
  PreprocessConfig preprocess;
  Task1Config task1;
  Task2Config task2;
  Task3Config task3;
  RoutesConfig routes;
  GenSpec synth;

  /// Pushes the top-level seed and thread count into the task configs.
  void propagate();
};

/// Strict reader: an unknown key or a wrongly typed value throws
/// ConfigError naming the key path.
RunConfig parse_run_config(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& cfg);

/// Standard preprocessing: post-2007 filter, change points, then the
/// minimum-activity filter, with the corpus relabeled afterwards.
struct Prepared {
  Corpus corpus;
  Labeling labels;
  LoadReport report;
  std::size_t raw_events = 0, raw_artists = 0, raw_venues = 0;
};
Prepared prepare(const Corpus& raw, LoadReport report, const PreprocessConfig& cfg);
Prepared load_and_prepare(const RunConfig& cfg);

/// Report wrapper: tool version, git describe, command, resolved config and
/// a generated_at timestamp kept apart from the payload.
nlohmann::json report_envelope(const RunConfig& cfg, const std::string& command, nlohmann::json payload);

/// Summary counts for a corpus, including distinct event ids and the size
/// of the major-label closure.
nlohmann::json corpus_stats(const Corpus& corpus);

}  // namespace gigmine

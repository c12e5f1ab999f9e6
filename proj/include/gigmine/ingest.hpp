#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gigmine/event.hpp"
#include "gigmine/graph.hpp"
#include "gigmine/labeling.hpp"
#include "json.hpp"

namespace gigmine {

inline constexpr std::string_view kEventsHeader =
    "event_id,artist_id,venue_id,date,city,state,country,lat,lon,popularity";
inline constexpr std::string_view kReleasesHeader = "artist_id,label_id,release_date";
inline constexpr std::string_view kLabelsHeader = "label_id,name,parent_label_id,is_major_root";

/// Events, releases and the label hierarchy, with cross-reference maps from
/// artists and venues to row indices. Call reindex() after mutating rows.
struct Corpus {
  std::vector<Event> events;
  std::vector<Release> releases;
  LabelTree labels;

  std::map<ArtistId, std::vector<std::size_t>> artist_events;
  std::map<VenueId, std::vector<std::size_t>> venue_events;
  std::map<ArtistId, std::vector<std::size_t>> artist_releases;

  void reindex();

  std::size_t artist_count() const noexcept { return artist_events.size(); }
  std::size_t venue_count() const noexcept { return venue_events.size(); }
  std::size_t event_count() const noexcept { return events.size(); }
};

struct FileReport {
  std::string path;
  std::size_t rows = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::vector<std::string> diagnostics;  // capped; `rejected` has the full count

  nlohmann::json to_json() const;
};

struct FilterStep {
  std::string name;
  std::size_t events_before = 0, events_after = 0;
  std::size_t artists_before = 0, artists_after = 0;
  std::size_t venues_before = 0, venues_after = 0;
  std::size_t rounds = 0;

  nlohmann::json to_json() const;
};

struct LoadReport {
  FileReport events, releases, labels;
  std::size_t releases_without_date = 0;
  std::vector<FilterStep> filters;

  nlohmann::json to_json() const;
};

struct ParseOptions {
  double max_malformed_fraction = 0.10;
  std::size_t max_diagnostics = 50;
};

// Parsers over in-memory CSV text. Malformed rows are skipped and reported;
// a wrong header or too many malformed rows throws ParseError.
std::vector<Event> parse_events(std::string_view text, FileReport& report, const ParseOptions& opts = {});
std::vector<Release> parse_releases(std::string_view text, FileReport& report, std::size_t& undated,
                                    const ParseOptions& opts = {});
LabelTree parse_labels(std::string_view text, FileReport& report, const ParseOptions& opts = {});

struct LoadedCorpus {
  Corpus corpus;
  LoadReport report;
};

LoadedCorpus parse_corpus_text(std::string_view events, std::string_view releases, std::string_view labels,
                              const ParseOptions& opts = {});
LoadedCorpus parse_corpus(const std::filesystem::path& event_file, const std::filesystem::path& release_file,
                          const std::filesystem::path& label_file, const ParseOptions& opts = {});

/// Keeps artists whose earliest event falls in `min_year` or later, with all
/// of their events and releases.
Corpus filter_post_2007(const Corpus& corpus, int min_year = 2007, FilterStep* step = nullptr);

struct MinActivityOptions {
  std::size_t threshold = 10;
  bool iterative = true;  // false: one artist pass then one venue pass
};

/// Drops artists with fewer than `threshold` events strictly before their
/// change point (whole history when they have none) and venues with fewer
/// than `threshold` events, repeating until nothing changes.
Corpus filter_min_activity(const Corpus& corpus, const std::unordered_map<ArtistId, Date>& change_points,
                           const MinActivityOptions& opts = {}, FilterStep* step = nullptr);

/// Largest subgraph in which every artist and venue carries at least `k`
/// events (summed edge counts). Nodes left without edges are dropped.
BipartiteGraph recursive_core_filter(const BipartiteGraph& graph, std::uint64_t k = 5);

std::string read_file(const std::filesystem::path& path);

}  // namespace gigmine

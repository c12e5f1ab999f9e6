#include "gigmine/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gigmine/csv.hpp"
#include "gigmine/error.hpp"

namespace gigmine {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

void check_header(const std::vector<csv::Record>& rows, std::string_view expected, const std::string& what) {
  if (rows.empty()) throw ParseError(what + ": missing header, expected '" + std::string(expected) + "'");
  std::vector<std::string> fields;
  for (const auto& f : rows.front().fields) fields.push_back(trim(f));
  if (csv::join_row(fields) != expected) {
    throw ParseError(what + ": header mismatch, expected '" + std::string(expected) + "' got '" +
                     csv::join_row(rows.front().fields) + "'");
  }
}

class RowSink {
 public:
  RowSink(FileReport& report, const ParseOptions& opts) : report_(report), opts_(opts) {}

  void reject(std::size_t line, const std::string& why) {
    ++report_.rejected;
    if (report_.diagnostics.size() < opts_.max_diagnostics) {
      report_.diagnostics.push_back(report_.path + ":" + std::to_string(line) + ": " + why);
    }
  }
  void accept() { ++report_.accepted; }

  void finish(const std::string& what) const {
    if (report_.rows == 0) return;
    const double frac = static_cast<double>(report_.rejected) / static_cast<double>(report_.rows);
    if (frac > opts_.max_malformed_fraction) {
      std::ostringstream msg;
      msg << what << ": " << report_.rejected << " of " << report_.rows << " rows malformed";
      if (!report_.diagnostics.empty()) msg << " (first: " << report_.diagnostics.front() << ")";
      throw ParseError(msg.str());
    }
  }

 private:
  FileReport& report_;
  const ParseOptions& opts_;
};

bool check_shape(const csv::Record& rec, std::size_t width, RowSink& sink) {
  if (!rec.well_formed) {
    sink.reject(rec.line, "unterminated quoted field");
    return false;
  }
  if (rec.fields.size() != width) {
    sink.reject(rec.line, "expected " + std::to_string(width) + " fields, found " + std::to_string(rec.fields.size()));
    return false;
  }
  return true;
}

}  // namespace

void Corpus::reindex() {
  artist_events.clear();
  venue_events.clear();
  artist_releases.clear();
  for (std::size_t i = 0; i < events.size(); ++i) {
    artist_events[events[i].artist].push_back(i);
    venue_events[events[i].venue].push_back(i);
  }
  for (std::size_t i = 0; i < releases.size(); ++i) artist_releases[releases[i].artist].push_back(i);
}

std::vector<Event> parse_events(std::string_view text, FileReport& report, const ParseOptions& opts) {
  auto rows = csv::read_all(text);
  check_header(rows, kEventsHeader, "events file " + report.path);
  RowSink sink(report, opts);
  std::vector<Event> out;
  out.reserve(rows.size());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& rec = rows[r];
    ++report.rows;
    if (!check_shape(rec, 10, sink)) continue;
    const auto& f = rec.fields;
    Event ev;
    ev.event_id = trim(f[0]);
    ev.artist = ArtistId{trim(f[1])};
    ev.venue = VenueId{trim(f[2])};
    if (ev.event_id.empty()) {
      sink.reject(rec.line, "missing event_id");
      continue;
    }
    if (ev.artist.empty() || ev.venue.empty()) {
      sink.reject(rec.line, "event " + ev.event_id + " missing " + (ev.artist.empty() ? "artist_id" : "venue_id"));
      continue;
    }
    auto date = parse_iso_date(trim(f[3]));
    if (!date) {
      sink.reject(rec.line, "event " + ev.event_id + " has unparseable date '" + f[3] + "'");
      continue;
    }
    ev.date = *date;
    ev.city = trim(f[4]);
    if (auto st = trim(f[5]); !st.empty()) ev.state = st;
    ev.country = trim(f[6]);
    auto lat = parse_double(trim(f[7]));
    auto lon = parse_double(trim(f[8]));
    if (!lat || !lon) {
      sink.reject(rec.line, "event " + ev.event_id + " has unparseable coordinates");
      continue;
    }
    if (*lat < -90.0 || *lat > 90.0) {
      sink.reject(rec.line, "event " + ev.event_id + " latitude " + trim(f[7]) + " outside [-90, 90]");
      continue;
    }
    if (*lon < -180.0 || *lon > 180.0) {
      sink.reject(rec.line, "event " + ev.event_id + " longitude " + trim(f[8]) + " outside [-180, 180]");
      continue;
    }
    ev.latitude = *lat;
    ev.longitude = *lon;
    if (auto pop = trim(f[9]); !pop.empty()) {
      auto p = parse_double(pop);
      if (!p) {
        sink.reject(rec.line, "event " + ev.event_id + " has unparseable popularity '" + pop + "'");
        continue;
      }
      ev.popularity = *p;
    }
    sink.accept();
    out.push_back(std::move(ev));
  }
  sink.finish("events file " + report.path);
  return out;
}

std::vector<Release> parse_releases(std::string_view text, FileReport& report, std::size_t& undated,
                                    const ParseOptions& opts) {
  auto rows = csv::read_all(text);
  check_header(rows, kReleasesHeader, "releases file " + report.path);
  RowSink sink(report, opts);
  std::vector<Release> out;
  undated = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& rec = rows[r];
    ++report.rows;
    if (!check_shape(rec, 3, sink)) continue;
    Release rel;
    rel.artist = ArtistId{trim(rec.fields[0])};
    rel.label = LabelId{trim(rec.fields[1])};
    if (rel.artist.empty() || rel.label.empty()) {
      sink.reject(rec.line, "release missing artist_id or label_id");
      continue;
    }
    auto date_text = trim(rec.fields[2]);
    if (date_text.empty()) {
      // Undated releases are legal input but unusable downstream.
      ++undated;
      sink.accept();
      continue;
    }
    auto date = parse_partial_date(date_text);
    if (!date) {
      sink.reject(rec.line, "unparseable release_date '" + date_text + "'");
      continue;
    }
    rel.release_date = *date;
    sink.accept();
    out.push_back(std::move(rel));
  }
  sink.finish("releases file " + report.path);
  return out;
}

LabelTree parse_labels(std::string_view text, FileReport& report, const ParseOptions& opts) {
  auto rows = csv::read_all(text);
  check_header(rows, kLabelsHeader, "labels file " + report.path);
  RowSink sink(report, opts);
  LabelTree tree;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& rec = rows[r];
    ++report.rows;
    if (!check_shape(rec, 4, sink)) continue;
    LabelId id{trim(rec.fields[0])};
    if (id.empty()) {
      sink.reject(rec.line, "missing label_id");
      continue;
    }
    auto major = trim(rec.fields[3]);
    if (major != "0" && major != "1") {
      sink.reject(rec.line, "label " + id.value + " has is_major_root '" + major + "', expected 0 or 1");
      continue;
    }
    if (tree.nodes.contains(id)) {
      sink.reject(rec.line, "duplicate label_id " + id.value);
      continue;
    }
    LabelInfo info;
    info.name = trim(rec.fields[1]);
    if (auto parent = trim(rec.fields[2]); !parent.empty()) info.parent = LabelId{parent};
    tree.nodes.emplace(id, std::move(info));
    if (major == "1") tree.major_roots.insert(id);
    sink.accept();
  }
  sink.finish("labels file " + report.path);
  return tree;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

LoadedCorpus parse_named(std::string_view events, std::string_view releases, std::string_view labels,
                         const ParseOptions& opts, std::string event_name, std::string release_name,
                         std::string label_name) {
  LoadedCorpus out;
  auto& rep = out.report;
  rep.events.path = std::move(event_name);
  rep.releases.path = std::move(release_name);
  rep.labels.path = std::move(label_name);
  out.corpus.events = parse_events(events, rep.events, opts);
  out.corpus.releases = parse_releases(releases, rep.releases, rep.releases_without_date, opts);
  out.corpus.labels = parse_labels(labels, rep.labels, opts);
  out.corpus.reindex();
  return out;
}

}  // namespace

LoadedCorpus parse_corpus_text(std::string_view events, std::string_view releases, std::string_view labels,
                              const ParseOptions& opts) {
  return parse_named(events, releases, labels, opts, "events.csv", "releases.csv", "labels.csv");
}

LoadedCorpus parse_corpus(const std::filesystem::path& event_file, const std::filesystem::path& release_file,
                          const std::filesystem::path& label_file, const ParseOptions& opts) {
  // Read in argument order so a missing file is reported deterministically.
  const auto events = read_file(event_file);
  const auto releases = read_file(release_file);
  const auto labels = read_file(label_file);
  return parse_named(events, releases, labels, opts, event_file.string(), release_file.string(),
                     label_file.string());
}

namespace {

Corpus subset(const Corpus& corpus, const std::vector<bool>& keep_event) {
  Corpus out;
  out.labels = corpus.labels;
  for (std::size_t i = 0; i < corpus.events.size(); ++i)
    if (keep_event[i]) out.events.push_back(corpus.events[i]);
  std::set<ArtistId> artists;
  for (const auto& ev : out.events) artists.insert(ev.artist);
  for (const auto& rel : corpus.releases)
    if (artists.contains(rel.artist)) out.releases.push_back(rel);
  out.reindex();
  return out;
}

void record(FilterStep* step, const Corpus& before, const Corpus& after, std::string name, std::size_t rounds) {
  if (!step) return;
  step->name = std::move(name);
  step->events_before = before.event_count();
  step->events_after = after.event_count();
  step->artists_before = before.artist_count();
  step->artists_after = after.artist_count();
  step->venues_before = before.venue_count();
  step->venues_after = after.venue_count();
  step->rounds = rounds;
}

}  // namespace

Corpus filter_post_2007(const Corpus& corpus, int min_year, FilterStep* step) {
  const Date cutoff = make_date(min_year, 1, 1);
  std::vector<bool> keep(corpus.events.size(), false);
  for (const auto& [artist, idx] : corpus.artist_events) {
    Date first = corpus.events[idx.front()].date;
    for (std::size_t i : idx) first = std::min(first, corpus.events[i].date);
    if (first < cutoff) continue;
    for (std::size_t i : idx) keep[i] = true;
  }
  Corpus out = subset(corpus, keep);
  record(step, corpus, out, "first_event_year>=" + std::to_string(min_year), 1);
  return out;
}

Corpus filter_min_activity(const Corpus& corpus, const std::unordered_map<ArtistId, Date>& change_points,
                           const MinActivityOptions& opts, FilterStep* step) {
  std::vector<bool> keep(corpus.events.size(), true);
  std::size_t rounds = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    ++rounds;
    // Artist pass: count surviving events before the change point.
    for (const auto& [artist, idx] : corpus.artist_events) {
      auto cp = change_points.find(artist);
      std::size_t n = 0;
      bool alive = false;
      for (std::size_t i : idx) {
        if (!keep[i]) continue;
        alive = true;
        if (cp == change_points.end() || corpus.events[i].date < cp->second) ++n;
      }
      if (alive && n < opts.threshold) {
        for (std::size_t i : idx) keep[i] = false;
        changed = true;
      }
    }
    for (const auto& [venue, idx] : corpus.venue_events) {
      std::size_t n = 0;
      for (std::size_t i : idx) n += keep[i] ? 1 : 0;
      if (n > 0 && n < opts.threshold) {
        for (std::size_t i : idx) keep[i] = false;
        changed = true;
      }
    }
    if (!opts.iterative) break;
  }
  Corpus out = subset(corpus, keep);
  record(step, corpus, out, "min_activity>=" + std::to_string(opts.threshold), rounds);
  return out;
}

BipartiteGraph recursive_core_filter(const BipartiteGraph& graph, std::uint64_t k) {
  std::vector<std::uint64_t> a_count(graph.artist_count()), v_count(graph.venue_count());
  for (const auto& e : graph.edges()) {
    a_count[e.artist] += e.info.count;
    v_count[e.venue] += e.info.count;
  }
  std::vector<bool> a_alive(graph.artist_count()), v_alive(graph.venue_count());
  std::vector<NodeRef> queue;
  for (std::uint32_t a = 0; a < a_count.size(); ++a) {
    a_alive[a] = a_count[a] >= k && a_count[a] > 0;
    if (!a_alive[a]) queue.push_back(artist_node(a));
  }
  for (std::uint32_t v = 0; v < v_count.size(); ++v) {
    v_alive[v] = v_count[v] >= k && v_count[v] > 0;
    if (!v_alive[v]) queue.push_back(venue_node(v));
  }
  // Peel: removing a node subtracts its edge counts from the other side.
  while (!queue.empty()) {
    NodeRef n = queue.back();
    queue.pop_back();
    auto nb = graph.neighbors(n);
    auto inc = graph.incident_edges(n);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const auto c = graph.edge(inc[i]).info.count;
      if (n.side == Side::artist) {
        if (!v_alive[nb[i]]) continue;
        v_count[nb[i]] -= c;
        if (v_count[nb[i]] < k || v_count[nb[i]] == 0) {
          v_alive[nb[i]] = false;
          queue.push_back(venue_node(nb[i]));
        }
      } else {
        if (!a_alive[nb[i]]) continue;
        a_count[nb[i]] -= c;
        if (a_count[nb[i]] < k || a_count[nb[i]] == 0) {
          a_alive[nb[i]] = false;
          queue.push_back(artist_node(nb[i]));
        }
      }
    }
  }
  return graph.induced(a_alive, v_alive);
}

nlohmann::json FileReport::to_json() const {
  return {{"path", path}, {"rows", rows}, {"accepted", accepted}, {"rejected", rejected}, {"diagnostics", diagnostics}};
}

nlohmann::json FilterStep::to_json() const {
  return {{"name", name},
          {"events", {{"before", events_before}, {"after", events_after}}},
          {"artists", {{"before", artists_before}, {"after", artists_after}}},
          {"venues", {{"before", venues_before}, {"after", venues_after}}},
          {"rounds", rounds}};
}

nlohmann::json LoadReport::to_json() const {
  nlohmann::json filters_json = nlohmann::json::array();
  for (const auto& f : filters) filters_json.push_back(f.to_json());
  return {{"events", events.to_json()},
          {"releases", releases.to_json()},
          {"labels", labels.to_json()},
          {"releases_without_date", releases_without_date},
          {"filters", filters_json}};
}

}  // namespace gigmine

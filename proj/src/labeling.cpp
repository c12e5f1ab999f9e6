#include "gigmine/labeling.hpp"

#include <algorithm>
#include <vector>

#include "gigmine/error.hpp"
#include "gigmine/ingest.hpp"

namespace gigmine {

std::set<LabelId> major_closure(const LabelTree& tree) {
  enum class Mark : unsigned char { unvisited, in_progress, major, minor };
  std::unordered_map<LabelId, Mark> mark;
  mark.reserve(tree.nodes.size());

  // Iterative walk up the parent chain; labels on the current path are
  // in_progress, so meeting one again is a cycle.
  std::vector<LabelId> path;
  for (const auto& [start, unused] : tree.nodes) {
    if (mark[start] == Mark::major || mark[start] == Mark::minor) continue;
    path.clear();
    LabelId cur = start;
    Mark verdict = Mark::minor;
    while (true) {
      auto& m = mark[cur];
      if (m == Mark::major || m == Mark::minor) {
        verdict = m;
        break;
      }
      if (m == Mark::in_progress) {
        auto from = std::find(path.begin(), path.end(), cur);
        std::string cycle;
        for (auto it = from; it != path.end(); ++it) cycle += it->value + " -> ";
        cycle += cur.value;
        throw Error("label hierarchy has a cycle: " + cycle);
      }
      m = Mark::in_progress;
      path.push_back(cur);
      if (tree.major_roots.contains(cur)) {
        verdict = Mark::major;
        break;
      }
      auto node = tree.nodes.find(cur);
      if (node == tree.nodes.end() || !node->second.parent) {
        verdict = Mark::minor;
        break;
      }
      cur = *node->second.parent;
    }
    for (const auto& id : path) mark[id] = verdict;
  }

  std::set<LabelId> out;
  for (const auto& [id, m] : mark)
    if (m == Mark::major && tree.nodes.contains(id)) out.insert(id);
  // Roots listed as major but missing from the node table still count.
  for (const auto& id : tree.major_roots) out.insert(id);
  return out;
}

std::optional<Date> change_point(std::span<const Release> releases, const std::set<LabelId>& closure) {
  std::optional<Date> best;
  for (const auto& r : releases) {
    if (!closure.contains(r.label)) continue;
    if (!best || r.release_date < *best) best = r.release_date;
  }
  return best;
}

std::unordered_map<ArtistId, Date> change_points(const Corpus& corpus, const std::set<LabelId>& closure) {
  std::unordered_map<ArtistId, Date> out;
  std::vector<Release> own;
  for (const auto& [artist, idx] : corpus.artist_releases) {
    own.clear();
    for (std::size_t i : idx) own.push_back(corpus.releases[i]);
    if (auto cp = change_point(own, closure)) out.emplace(artist, *cp);
  }
  return out;
}

Labeling label_corpus(const Corpus& corpus, const std::set<LabelId>& closure) {
  Labeling out;
  auto cps = change_points(corpus, closure);
  for (const auto& [artist, unused] : corpus.artist_events) {
    SuccessLabel lab{artist, false, std::nullopt};
    if (auto it = cps.find(artist); it != cps.end()) {
      lab.successful = true;
      lab.change_point = it->second;
      ++out.report.positives;
    }
    out.labels.emplace(artist, std::move(lab));
  }
  out.report.artists = out.labels.size();
  out.report.positive_fraction =
      out.report.artists ? static_cast<double>(out.report.positives) / static_cast<double>(out.report.artists) : 0.0;
  out.report.closure_size = closure.size();
  return out;
}

Labeling label_corpus(const Corpus& corpus) { return label_corpus(corpus, major_closure(corpus.labels)); }

bool Labeling::is_positive(const ArtistId& a) const {
  auto it = labels.find(a);
  return it != labels.end() && it->second.successful;
}

std::optional<Date> Labeling::change_point_of(const ArtistId& a) const {
  auto it = labels.find(a);
  if (it == labels.end()) return std::nullopt;
  return it->second.change_point;
}

nlohmann::json LabelReport::to_json() const {
  return {{"artists", artists},
          {"positives", positives},
          {"positive_fraction", positive_fraction},
          {"closure_size", closure_size}};
}

}  // namespace gigmine

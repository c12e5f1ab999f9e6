#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "gigmine/event.hpp"
#include "gigmine/ids.hpp"
#include "json.hpp"

namespace gigmine {

struct LabelInfo {
  std::string name;
  std::optional<LabelId> parent;
};

/// Record labels with parent links, plus the set of labels listed as majors.
struct LabelTree {
  std::unordered_map<LabelId, LabelInfo> nodes;
  std::unordered_set<LabelId> major_roots;
};

/// Every label whose ancestor chain (the label itself included) reaches a
/// major root. A parent id absent from the tree ends the chain. Throws
/// Error listing the cycle if parent links loop.
std::set<LabelId> major_closure(const LabelTree& tree);

/// Earliest release on a label in `closure`; nullopt when there is none.
std::optional<Date> change_point(std::span<const Release> releases, const std::set<LabelId>& closure);

struct SuccessLabel {
  ArtistId artist;
  bool successful = false;
  std::optional<Date> change_point;  // present iff successful
};

struct LabelReport {
  std::size_t artists = 0;
  std::size_t positives = 0;
  double positive_fraction = 0.0;
  std::size_t closure_size = 0;

  nlohmann::json to_json() const;
};

struct Labeling {
  std::map<ArtistId, SuccessLabel> labels;
  LabelReport report;

  bool is_positive(const ArtistId& a) const;
  std::optional<Date> change_point_of(const ArtistId& a) const;
};

struct Corpus;

/// Change point of every artist in the corpus that has one.
std::unordered_map<ArtistId, Date> change_points(const Corpus& corpus, const std::set<LabelId>& closure);

/// One label per artist appearing in the corpus events.
Labeling label_corpus(const Corpus& corpus, const std::set<LabelId>& closure);
Labeling label_corpus(const Corpus& corpus);

}  // namespace gigmine

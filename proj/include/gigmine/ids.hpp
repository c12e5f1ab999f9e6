#pragma once

#include <compare>
#include <functional>
#include <ostream>
#include <string>
#include <utility>

namespace gigmine {

/// Opaque string identifier tagged by the kind of entity it names, so an
/// artist id can never be passed where a venue id is expected.
template <class Tag>
struct Id {
  std::string value;

  Id() = default;
  explicit Id(std::string v) : value(std::move(v)) {}

  bool empty() const noexcept { return value.empty(); }
  const std::string& str() const noexcept { return value; }

  friend auto operator<=>(const Id&, const Id&) = default;
  friend bool operator==(const Id&, const Id&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Id& id) { return os << id.value; }
};

struct ArtistTag {};
struct VenueTag {};
struct LabelTag {};

using ArtistId = Id<ArtistTag>;
using VenueId = Id<VenueTag>;
using LabelId = Id<LabelTag>;

}  // namespace gigmine

template <class Tag>
struct std::hash<gigmine::Id<Tag>> {
  std::size_t operator()(const gigmine::Id<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.value);
  }
};

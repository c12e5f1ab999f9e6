#pragma once

#include <optional>
#include <string>

#include "gigmine/date.hpp"
#include "gigmine/ids.hpp"

namespace gigmine {

/// One artist's appearance at one concert. A concert with several billed
/// artists appears as several events sharing `event_id`.
struct Event {
  std::string event_id;
  ArtistId artist;
  VenueId venue;
  Date date;
  std::string city;
  std::optional<std::string> state;
  std::string country;
  double latitude = 0.0;
  double longitude = 0.0;
  std::optional<double> popularity;
};

struct Release {
  ArtistId artist;
  LabelId label;
  Date release_date;
};

}  // namespace gigmine

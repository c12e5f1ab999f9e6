#include "gigmine/routes.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "gigmine/csv.hpp"
#include "gigmine/error.hpp"
#include "gigmine/parallel.hpp"

namespace gigmine {

std::string CityKey::display() const {
  std::string s = city;
  if (state && !state->empty()) s += ", " + *state;
  if (!country.empty()) s += ", " + country;
  return s;
}

std::vector<CityKey> collapse_repeats(std::vector<CityKey> cities) {
  cities.erase(std::unique(cities.begin(), cities.end()), cities.end());
  return cities;
}

std::vector<CitySequence> city_sequences(const Corpus& corpus, std::size_t threads) {
  std::vector<const std::pair<const ArtistId, std::vector<std::size_t>>*> artists;
  artists.reserve(corpus.artist_events.size());
  for (const auto& entry : corpus.artist_events) artists.push_back(&entry);

  std::vector<CitySequence> out(artists.size());
  parallel_for(artists.size(), threads, [&](std::size_t k) {
    std::vector<std::size_t> rows = artists[k]->second;
    std::sort(rows.begin(), rows.end(), [&](std::size_t x, std::size_t y) {
      const auto& a = corpus.events[x];
      const auto& b = corpus.events[y];
      if (a.date != b.date) return a.date < b.date;
      return a.event_id < b.event_id;
    });
    std::vector<CityKey> cities;
    cities.reserve(rows.size());
    for (auto r : rows) {
      const auto& ev = corpus.events[r];
      cities.push_back(CityKey{ev.city, ev.state, ev.country});
    }
    out[k] = CitySequence{artists[k]->first, collapse_repeats(std::move(cities))};
  });
  return out;
}

std::vector<RouteCount> mine_routes(std::span<const CitySequence> sequences, const std::vector<std::size_t>& n_values,
                                    std::size_t top_k) {
  // Intern cities in sorted order so id order matches CityKey order.
  std::map<CityKey, std::uint32_t> ids;
  for (const auto& s : sequences)
    for (const auto& c : s.cities) ids.emplace(c, 0);
  std::vector<const CityKey*> names;
  names.reserve(ids.size());
  for (auto& [key, id] : ids) {
    id = static_cast<std::uint32_t>(names.size());
    names.push_back(&key);
  }
  std::vector<std::vector<std::uint32_t>> seqs;
  seqs.reserve(sequences.size());
  for (const auto& s : sequences) {
    std::vector<std::uint32_t> v;
    v.reserve(s.cities.size());
    for (const auto& c : s.cities) v.push_back(ids.at(c));
    seqs.push_back(std::move(v));
  }

  std::vector<RouteCount> out;
  for (std::size_t n : n_values) {
    if (n == 0) throw InvalidArgument("mine_routes: n must be positive");
    std::map<std::vector<std::uint32_t>, std::pair<std::size_t, std::size_t>> counts;
    for (const auto& s : seqs) {
      for (std::size_t i = 0; i + n <= s.size(); ++i) {
        std::vector<std::uint32_t> gram(s.begin() + static_cast<std::ptrdiff_t>(i),
                                        s.begin() + static_cast<std::ptrdiff_t>(i + n));
        std::vector<std::uint32_t> rev(gram.rbegin(), gram.rend());
        if (rev < gram) {
          ++counts[rev].second;
        } else {
          ++counts[gram].first;
        }
      }
    }
    std::vector<RouteCount> ranked;
    ranked.reserve(counts.size());
    for (const auto& [gram, fr] : counts) {
      RouteCount rc;
      rc.n = n;
      for (auto id : gram) rc.route.push_back(*names[id]);
      rc.forward = fr.first;
      rc.reverse = fr.second;
      rc.count = fr.first + fr.second;
      const bool palindrome = std::equal(gram.begin(), gram.end(), gram.rbegin());
      rc.bidirectional = palindrome || (fr.first > 0 && fr.second > 0);
      ranked.push_back(std::move(rc));
    }
    // counts is already in route order, so a stable sort on count gives the tie-break.
    std::stable_sort(ranked.begin(), ranked.end(), [](const RouteCount& a, const RouteCount& b) { return a.count > b.count; });
    if (ranked.size() > top_k) ranked.resize(top_k);
    for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = i + 1;
    out.insert(out.end(), std::make_move_iterator(ranked.begin()), std::make_move_iterator(ranked.end()));
  }
  return out;
}

std::string routes_csv(std::span<const RouteCount> routes) {
  std::ostringstream os;
  os << "n,rank,route,count,bidirectional\n";
  for (const auto& r : routes) {
    std::string path;
    for (std::size_t i = 0; i < r.route.size(); ++i) {
      if (i) path += '|';
      path += r.route[i].display();
    }
    os << r.n << ',' << r.rank << ',' << csv::escape(path) << ',' << r.count << ',' << (r.bidirectional ? "true" : "false")
       << '\n';
  }
  return os.str();
}

}  // namespace gigmine

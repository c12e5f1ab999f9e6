#include "gigmine/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "gigmine/csv.hpp"
#include "gigmine/error.hpp"
#include "gigmine/routes.hpp"

namespace gigmine {

using std::chrono::days;
using std::chrono::sys_days;

namespace {

enum class Role { plain, positive, trajectory, pre2007, tour };

struct Draft {
  std::uint32_t artist;
  std::uint32_t venue;
  sys_days day;
};

struct City {
  CityKey key;
  double lat, lon;
};

sys_days first_day(int y) { return to_days(make_date(y, 1, 1)); }
sys_days last_day(int y) { return to_days(make_date(y, 12, 31)); }

sys_days uniform_day(std::mt19937_64& rng, sys_days lo, sys_days hi) {
  std::uniform_int_distribution<long> d(0, (hi - lo).count());
  return lo + days{d(rng)};
}

std::string padded(char prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, i);
  return buf;
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

void validate(const GenSpec& s) {
  auto fail = [](const std::string& m) { throw InvalidArgument("synth: " + m); };
  if (s.n_artists == 0 || s.n_venues == 0) fail("n_artists and n_venues must be positive");
  if (!(s.heavy_tail_exponent > 1.0)) fail("heavy_tail_exponent must exceed 1");
  if (s.min_concerts < 10 || s.max_concerts < s.min_concerts) fail("need 10 <= min_concerts <= max_concerts");
  if (!(s.planted.positive_fraction > 0.0 && s.planted.positive_fraction < 1.0)) fail("positive_fraction must lie in (0, 1)");
  if (!(s.planted.success_venue_bias > 0.0)) fail("success_venue_bias must be positive");
  if (!(s.hub_fraction > 0.0 && s.hub_fraction < 1.0)) fail("hub_fraction must lie in (0, 1)");
  if (!(s.venue_novelty > 0.0)) fail("venue_novelty must be positive");
  if (!(s.test_share >= 0.0 && s.test_share < 1.0)) fail("test_share must lie in [0, 1)");
  if (s.last_year - s.first_year < 3) fail("year range must cover at least four years");
  if (s.pre2007_artists > 0 && s.pre2007_first_year >= s.first_year) fail("pre2007_first_year must precede first_year");
  if (s.planted.trajectory_artists > 0 &&
      (s.trajectory_start_year < s.first_year || s.trajectory_start_year + 5 > s.train_end_year())) {
    fail("the six-year trajectory ramp must fit inside the training years");
  }
  if (s.route_count > 0 && (s.route_length < 2 || s.route_length > 10 || s.tours_per_route == 0)) {
    fail("routes need 2 to 10 stops and at least one tour");
  }
  if (s.route_count * s.route_length > s.n_venues) fail("every route city needs a venue");
  if (s.planted.future_edge_count > s.n_artists * s.n_venues) fail("future_edge_count exceeds the number of possible pairs");
  const auto positives = static_cast<std::size_t>(std::llround(s.planted.positive_fraction * static_cast<double>(s.n_artists)));
  if (positives == 0 || positives >= s.n_artists) fail("positive_fraction leaves a class empty");
  if (positives + s.planted.trajectory_artists + s.pre2007_artists + s.route_count * s.tours_per_route > s.n_artists) {
    fail("too few artists for the planted roles");
  }
}

}  // namespace

std::uint32_t sample_concert_count(std::mt19937_64& rng, double exponent, std::uint32_t k_min, std::uint32_t k_max) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double x = (static_cast<double>(k_min) - 0.5) * std::pow(1.0 - u(rng), -1.0 / (exponent - 1.0)) + 0.5;
  if (!(x < static_cast<double>(k_max))) return k_max;
  return std::max(k_min, static_cast<std::uint32_t>(std::floor(x)));
}

GeneratedCorpus generate(const GenSpec& spec) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);
  const int train_end = spec.train_end_year();
  const std::size_t A = spec.n_artists, V = spec.n_venues;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Cities; the first route_count * route_length are the planted route stops.
  const std::size_t route_cities = spec.route_count * spec.route_length;
  const std::size_t n_cities = spec.n_cities ? spec.n_cities : std::max<std::size_t>(route_cities + 5, V / 5);
  if (n_cities < route_cities) throw InvalidArgument("synth: n_cities is smaller than the planted route stops");
  static const char* kCountries[] = {"US", "GB", "DE", "CA"};
  std::vector<City> cities(n_cities);
  for (std::size_t i = 0; i < n_cities; ++i) {
    const std::string country = kCountries[i % 4];
    std::optional<std::string> state;
    if (country == "US" || country == "CA") state = padded('S', i % 50, 2);
    cities[i] = City{CityKey{"City " + std::to_string(1000 + i), state, country}, -60.0 + 130.0 * unit(rng),
                     -180.0 + 360.0 * unit(rng)};
  }
  std::vector<std::size_t> venue_city(V);
  for (std::size_t v = 0; v < V; ++v)
    venue_city[v] = v < n_cities ? v : std::uniform_int_distribution<std::size_t>(0, n_cities - 1)(rng);

  // Venue popularity: Zipf-like weights over a random order, plus the hub set.
  std::vector<std::size_t> perm(V);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<double> base(V), biased(V);
  for (std::size_t v = 0; v < V; ++v) base[v] = std::pow(static_cast<double>(perm[v] + 1), -0.7);
  std::vector<std::uint32_t> order_v(V);
  std::iota(order_v.begin(), order_v.end(), 0U);
  std::shuffle(order_v.begin(), order_v.end(), rng);
  const auto n_hubs = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(spec.hub_fraction * static_cast<double>(V))));
  std::vector<bool> hub(V, false);
  for (std::size_t i = 0; i < n_hubs; ++i) hub[order_v[i]] = true;
  double hub_w = 0.0, total_w = 0.0;
  for (std::size_t v = 0; v < V; ++v) {
    biased[v] = hub[v] ? base[v] * spec.planted.success_venue_bias : base[v];
    total_w += base[v];
    if (hub[v]) hub_w += base[v];
  }
  std::discrete_distribution<std::uint32_t> base_dist(base.begin(), base.end());
  std::discrete_distribution<std::uint32_t> biased_dist(biased.begin(), biased.end());

  // Roles.
  const auto n_pos = static_cast<std::size_t>(std::llround(spec.planted.positive_fraction * static_cast<double>(A)));
  std::vector<std::size_t> order_a(A);
  std::iota(order_a.begin(), order_a.end(), 0);
  std::shuffle(order_a.begin(), order_a.end(), rng);
  std::vector<Role> role(A, Role::plain);
  std::vector<std::size_t> tour_of(A, 0);
  {
    std::size_t i = 0;
    for (std::size_t k = 0; k < n_pos; ++k) role[order_a[i++]] = Role::positive;
    for (std::size_t k = 0; k < spec.planted.trajectory_artists; ++k) role[order_a[i++]] = Role::trajectory;
    for (std::size_t k = 0; k < spec.pre2007_artists; ++k) role[order_a[i++]] = Role::pre2007;
    for (std::size_t k = 0; k < spec.route_count * spec.tours_per_route; ++k) {
      tour_of[order_a[i]] = k;
      role[order_a[i++]] = Role::tour;
    }
  }
  auto artist_name = [](std::size_t a) { return padded('a', a + 1, 5); };
  auto venue_name = [](std::size_t v) { return padded('v', v + 1, 5); };

  std::vector<Draft> drafts;
  std::vector<std::optional<sys_days>> change(A);
  std::vector<std::pair<sys_days, sys_days>> active(A);
  nlohmann::json positives_json = nlohmann::json::array(), tours_json = nlohmann::json::array(),
                 trajectories_json = nlohmann::json::array(), pre_json = nlohmann::json::array();
  const sys_days test_lo = first_day(train_end + 1), test_hi = last_day(spec.last_year);

  for (std::size_t a = 0; a < A; ++a) {
    const auto ai = static_cast<std::uint32_t>(a);
    if (role[a] == Role::trajectory) {
      nlohmann::json per_year = nlohmann::json::array(), years = nlohmann::json::array();
      for (int t = 0; t < 6; ++t) {
        const int y = spec.trajectory_start_year + t;
        const int count = static_cast<int>(std::lround(3.0 * std::pow(1.7, t)));
        for (int c = 0; c < count; ++c) drafts.push_back({ai, base_dist(rng), uniform_day(rng, first_day(y), last_day(y))});
        years.push_back(y);
        per_year.push_back(count);
      }
      active[a] = {first_day(spec.trajectory_start_year), last_day(spec.trajectory_start_year + 5)};
      trajectories_json.push_back({{"artist", artist_name(a)}, {"years", years}, {"events_per_year", per_year}});
      continue;
    }

    const std::uint32_t k = sample_concert_count(rng, spec.heavy_tail_exponent, spec.min_concerts, spec.max_concerts);
    std::binomial_distribution<std::uint32_t> test_draw(k - 10, spec.test_share);
    const std::uint32_t k_test = test_draw(rng);
    std::uint32_t k_hist = role[a] == Role::positive ? k : k - k_test;
    const int start_year = role[a] == Role::pre2007
                               ? std::uniform_int_distribution<int>(spec.pre2007_first_year, spec.first_year - 1)(rng)
                               : std::uniform_int_distribution<int>(spec.first_year, train_end - 1)(rng);
    const sys_days lo = first_day(start_year), hi = last_day(train_end);
    active[a] = {lo, hi};
    if (role[a] == Role::pre2007) pre_json.push_back(artist_name(a));

    const std::size_t first_draft = drafts.size();
    std::optional<std::pair<sys_days, sys_days>> blocked;
    if (role[a] == Role::tour) {
      const std::size_t r = tour_of[a] / spec.tours_per_route;
      const auto L = static_cast<long>(spec.route_length);
      const sys_days d = uniform_day(rng, lo, hi - days{L - 1});
      const bool reversed = unit(rng) < 0.5;
      nlohmann::json stops = nlohmann::json::array();
      for (long i = 0; i < L; ++i) {
        const std::size_t c = r * spec.route_length + static_cast<std::size_t>(reversed ? L - 1 - i : i);
        // Venue c anchors route city c and collects every tour stop there.
        drafts.push_back({ai, static_cast<std::uint32_t>(c), d + days{i}});
        stops.push_back(cities[c].key.display());
      }
      blocked = {d, d + days{L - 1}};
      k_hist -= static_cast<std::uint32_t>(L);
      tours_json.push_back({{"artist", artist_name(a)}, {"route", r}, {"start", format_date(from_days(d))}, {"cities", stops}});
    }

    std::vector<std::uint32_t> played;
    auto pick = [&](std::discrete_distribution<std::uint32_t>& fresh) {
      const double n = static_cast<double>(played.size());
      const std::uint32_t v = unit(rng) * (spec.venue_novelty + n) < spec.venue_novelty
                                  ? fresh(rng)
                                  : played[std::uniform_int_distribution<std::size_t>(0, played.size() - 1)(rng)];
      played.push_back(v);
      return v;
    };

    // A positive's sampled count is its pre-change history; signing adds up
    // to as many events again after the change point.
    const std::uint32_t k_post =
        role[a] == Role::positive ? std::uniform_int_distribution<std::uint32_t>(1, k_hist)(rng) : 0;
    std::vector<sys_days> dates(k_hist + k_post);
    for (auto& d : dates) {
      do {
        d = uniform_day(rng, lo, hi);
      } while (blocked && d >= blocked->first && d <= blocked->second);
    }
    if (role[a] == Role::pre2007) dates[0] = uniform_day(rng, lo, last_day(spec.first_year - 1));
    std::sort(dates.begin(), dates.end());
    if (role[a] == Role::positive) {
      const sys_days cp = dates[k_hist - 1] + days{1};
      change[a] = cp;
      std::size_t pre = 0, hub_hits = 0;
      for (auto d : dates) {
        const std::uint32_t v = pick(d < cp ? biased_dist : base_dist);
        if (d < cp) {
          ++pre;
          hub_hits += hub[v];
        }
        drafts.push_back({ai, v, d});
      }
      positives_json.push_back({{"artist", artist_name(a)},
                                {"change_point", format_date(from_days(cp))},
                                {"pre_change_events", pre},
                                {"hub_events", hub_hits}});
    } else {
      for (auto d : dates) drafts.push_back({ai, pick(base_dist), d});
    }

    // Test-year events only revisit venues this artist already played.
    const std::size_t history = drafts.size() - first_draft;
    for (std::uint32_t t = 0; t < k_test; ++t) {
      const auto& src = drafts[first_draft + std::uniform_int_distribution<std::size_t>(0, history - 1)(rng)];
      drafts.push_back({ai, src.venue, uniform_day(rng, test_lo, test_hi)});
    }
  }

  // Future links: new pairs among nodes that survive the 5-core of the
  // training years, so they are exactly the temporal split's test set.
  std::set<std::pair<std::uint32_t, std::uint32_t>> history_pairs;
  GraphBuilder hb;
  for (const auto& d : drafts) {
    const int y = year_of(from_days(d.day));
    if (y > train_end) continue;
    history_pairs.emplace(d.artist, d.venue);
    hb.add_event(ArtistId{artist_name(d.artist)}, VenueId{venue_name(d.venue)}, y);
  }
  const auto core = recursive_core_filter(std::move(hb).build(), 5);
  std::vector<std::uint32_t> core_a, core_v;
  for (const auto& id : core.artist_ids()) core_a.push_back(static_cast<std::uint32_t>(std::stoul(id.value.substr(1)) - 1));
  for (const auto& id : core.venue_ids()) core_v.push_back(static_cast<std::uint32_t>(std::stoul(id.value.substr(1)) - 1));
  const std::size_t future = spec.planted.future_edge_count;
  if (future > core_a.size() * core_v.size() - core.edge_count()) {
    throw InvalidArgument("synth: future_edge_count " + std::to_string(future) +
                          " exceeds the unlinked pairs among core nodes");
  }
  std::set<std::pair<std::uint32_t, std::uint32_t>> planted;
  while (planted.size() < future) {
    const auto a = core_a[std::uniform_int_distribution<std::size_t>(0, core_a.size() - 1)(rng)];
    const auto v = core_v[std::uniform_int_distribution<std::size_t>(0, core_v.size() - 1)(rng)];
    if (history_pairs.contains({a, v}) || !planted.emplace(a, v).second) continue;
    drafts.push_back({a, v, uniform_day(rng, test_lo, test_hi)});
  }

  // Labels: three majors with subsidiaries, then independents.
  struct LabelRow {
    std::string id, name, parent;
    bool major;
  };
  std::vector<LabelRow> labels;
  auto add_label = [&](std::string name, std::string parent, bool major) {
    labels.push_back({padded('L', labels.size() + 1, 4), std::move(name), std::move(parent), major});
    return labels.back().id;
  };
  const auto sony = add_label("Sony Music Entertainment", "", true);
  const auto umg = add_label("Universal Music Group", "", true);
  const auto wmg = add_label("Warner Music Group", "", true);
  add_label("Columbia Records", sony, false);
  add_label("Epic Records", sony, false);
  add_label("Interscope Records", umg, false);
  add_label("Island Records", umg, false);
  const auto atlantic = add_label("Atlantic Records", wmg, false);
  add_label("Elektra Records", wmg, false);
  add_label("Roadrunner Records", atlantic, false);
  const std::size_t n_major = labels.size();
  for (std::size_t i = 0; i < spec.indie_labels; ++i) {
    const std::string parent = (i % 5 == 4) ? labels[n_major + i - 1].id : "";
    add_label("Independent Label " + std::to_string(i + 1), parent, false);
  }
  auto pick_major = [&] { return labels[std::uniform_int_distribution<std::size_t>(0, n_major - 1)(rng)].id; };
  auto pick_indie = [&] {
    if (spec.indie_labels == 0) return std::string();
    return labels[n_major + std::uniform_int_distribution<std::size_t>(0, spec.indie_labels - 1)(rng)].id;
  };

  std::vector<std::tuple<std::uint32_t, std::string, sys_days>> releases;
  for (std::size_t a = 0; a < A; ++a) {
    const auto ai = static_cast<std::uint32_t>(a);
    const auto [lo, hi] = active[a];
    if (change[a]) {
      const sys_days cp = *change[a];
      releases.emplace_back(ai, pick_major(), cp);
      if (unit(rng) < 0.5 && cp > lo + days{1}) {
        if (auto l = pick_indie(); !l.empty()) releases.emplace_back(ai, l, uniform_day(rng, lo, cp - days{1}));
      }
      if (unit(rng) < 0.5) releases.emplace_back(ai, pick_major(), uniform_day(rng, cp, test_hi));
    } else if (unit(rng) < 0.4) {
      const int n = 1 + (unit(rng) < 0.5);
      for (int i = 0; i < n; ++i)
        if (auto l = pick_indie(); !l.empty()) releases.emplace_back(ai, l, uniform_day(rng, lo, hi));
    }
  }

  // Serialize.
  std::stable_sort(drafts.begin(), drafts.end(), [](const Draft& x, const Draft& y) {
    if (x.day != y.day) return x.day < y.day;
    if (x.artist != y.artist) return x.artist < y.artist;
    return x.venue < y.venue;
  });
  std::vector<double> popularity(A);
  for (auto& p : popularity) p = unit(rng);

  GeneratedCorpus out;
  std::ostringstream ev;
  ev << kEventsHeader << '\n';
  std::vector<std::size_t> per_artist(A, 0);
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    const auto& d = drafts[i];
    const auto& c = cities[venue_city[d.venue]];
    ++per_artist[d.artist];
    ev << csv::join_row({padded('e', i + 1, 7), artist_name(d.artist), venue_name(d.venue), format_date(from_days(d.day)),
                         c.key.city, c.key.state.value_or(""), c.key.country, fixed(c.lat, 4), fixed(c.lon, 4),
                         fixed(popularity[d.artist], 3)})
       << '\n';
  }
  out.events_csv = ev.str();

  std::ostringstream rel;
  rel << kReleasesHeader << '\n';
  std::stable_sort(releases.begin(), releases.end(), [](const auto& x, const auto& y) {
    return std::tie(std::get<0>(x), std::get<2>(x)) < std::tie(std::get<0>(y), std::get<2>(y));
  });
  for (const auto& [a, l, d] : releases) rel << csv::join_row({artist_name(a), l, format_date(from_days(d))}) << '\n';
  out.releases_csv = rel.str();

  std::ostringstream lab;
  lab << kLabelsHeader << '\n';
  for (const auto& l : labels) lab << csv::join_row({l.id, l.name, l.parent, l.major ? "1" : "0"}) << '\n';
  out.labels_csv = lab.str();

  nlohmann::json hubs = nlohmann::json::array(), future_json = nlohmann::json::array(), routes_json = nlohmann::json::array();
  for (std::size_t v = 0; v < V; ++v)
    if (hub[v]) hubs.push_back(venue_name(v));
  for (auto [a, v] : planted) future_json.push_back({artist_name(a), venue_name(v)});
  for (std::size_t r = 0; r < spec.route_count; ++r) {
    nlohmann::json stops = nlohmann::json::array();
    for (std::size_t i = 0; i < spec.route_length; ++i) stops.push_back(cities[r * spec.route_length + i].key.display());
    routes_json.push_back({{"cities", stops}, {"tours", spec.tours_per_route}});
  }
  const double b = spec.planted.success_venue_bias;
  out.manifest = {{"spec", spec.to_json()},
                  {"counts",
                   {{"artists", A}, {"venues", V}, {"events", drafts.size()}, {"releases", releases.size()},
                    {"labels", labels.size()}, {"positives", n_pos}}},
                  {"positives", positives_json},
                  {"hub_venues", hubs},
                  {"hub_rate",
                   {{"positive_expected", b * hub_w / (b * hub_w + total_w - hub_w)},
                    {"negative_expected", hub_w / total_w}}},
                  {"future_edges", future_json},
                  {"trajectories", trajectories_json},
                  {"routes", routes_json},
                  {"tours", tours_json},
                  {"pre2007_artists", pre_json},
                  {"major_labels", {sony, umg, wmg}},
                  {"test_years", {train_end + 1, spec.last_year}}};
  return out;
}

void GeneratedCorpus::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  auto put = [&](const char* name, const std::string& text) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error("cannot write '" + (dir / name).string() + "'");
    f << text;
  };
  put("events.csv", events_csv);
  put("releases.csv", releases_csv);
  put("labels.csv", labels_csv);
  put("manifest.json", manifest.dump(2) + "\n");
}

LoadedCorpus GeneratedCorpus::load() const { return parse_corpus_text(events_csv, releases_csv, labels_csv); }

nlohmann::json GenSpec::to_json() const {
  return {{"n_artists", n_artists},
          {"n_venues", n_venues},
          {"first_year", first_year},
          {"last_year", last_year},
          {"seed", seed},
          {"heavy_tail_exponent", heavy_tail_exponent},
          {"min_concerts", min_concerts},
          {"max_concerts", max_concerts},
          {"planted",
           {{"success_venue_bias", planted.success_venue_bias},
            {"positive_fraction", planted.positive_fraction},
            {"future_edge_count", planted.future_edge_count},
            {"trajectory_artists", planted.trajectory_artists}}},
          {"hub_fraction", hub_fraction},
          {"test_share", test_share},
          {"pre2007_artists", pre2007_artists},
          {"pre2007_first_year", pre2007_first_year},
          {"trajectory_start_year", trajectory_start_year},
          {"route_count", route_count},
          {"route_length", route_length},
          {"tours_per_route", tours_per_route},
          {"n_cities", n_cities},
          {"indie_labels", indie_labels},
          {"venue_novelty", venue_novelty}};
}

namespace {

template <class T>
void take(const nlohmann::json& j, const char* key, T& into, std::set<std::string>& seen) {
  if (!j.contains(key)) return;
  seen.insert(key);
  try {
    into = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("synth spec key '") + key + "' has the wrong type");
  }
}

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& seen, const std::string& where) {
  for (const auto& [k, _] : j.items())
    if (!seen.contains(k)) throw ConfigError("unknown key '" + where + k + "'");
}

}  // namespace

GenSpec GenSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("synth spec must be a JSON object");
  GenSpec s;
  std::set<std::string> seen;
  take(j, "n_artists", s.n_artists, seen);
  take(j, "n_venues", s.n_venues, seen);
  take(j, "first_year", s.first_year, seen);
  take(j, "last_year", s.last_year, seen);
  take(j, "seed", s.seed, seen);
  take(j, "heavy_tail_exponent", s.heavy_tail_exponent, seen);
  take(j, "min_concerts", s.min_concerts, seen);
  take(j, "max_concerts", s.max_concerts, seen);
  take(j, "hub_fraction", s.hub_fraction, seen);
  take(j, "test_share", s.test_share, seen);
  take(j, "pre2007_artists", s.pre2007_artists, seen);
  take(j, "pre2007_first_year", s.pre2007_first_year, seen);
  take(j, "trajectory_start_year", s.trajectory_start_year, seen);
  take(j, "route_count", s.route_count, seen);
  take(j, "route_length", s.route_length, seen);
  take(j, "tours_per_route", s.tours_per_route, seen);
  take(j, "n_cities", s.n_cities, seen);
  take(j, "indie_labels", s.indie_labels, seen);
  take(j, "venue_novelty", s.venue_novelty, seen);
  if (j.contains("planted")) {
    seen.insert("planted");
    const auto& p = j.at("planted");
    if (!p.is_object()) throw ConfigError("synth spec key 'planted' must be an object");
    std::set<std::string> pseen;
    take(p, "success_venue_bias", s.planted.success_venue_bias, pseen);
    take(p, "positive_fraction", s.planted.positive_fraction, pseen);
    take(p, "future_edge_count", s.planted.future_edge_count, pseen);
    take(p, "trajectory_artists", s.planted.trajectory_artists, pseen);
    reject_unknown(p, pseen, "planted.");
  }
  reject_unknown(j, seen, "");
  return s;
}

BipartiteGraph community_bipartite_graph(const CommunitySpec& spec) {
  if (spec.communities == 0 || spec.n_artists == 0 || spec.n_venues < spec.communities) {
    throw InvalidArgument("community_bipartite_graph: need at least one venue per community");
  }
  if (spec.min_degree == 0 || spec.max_degree < spec.min_degree) throw InvalidArgument("community_bipartite_graph: bad degree range");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<std::uint32_t>> members(spec.communities);
  for (std::uint32_t v = 0; v < spec.n_venues; ++v) members[v % spec.communities].push_back(v);
  std::uniform_int_distribution<std::size_t> degree(spec.min_degree, spec.max_degree);
  std::uniform_int_distribution<std::uint32_t> any_venue(0, static_cast<std::uint32_t>(spec.n_venues - 1));

  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t a = 0; a < spec.n_artists; ++a) {
    const auto& own = members[a % spec.communities];
    const std::size_t d = std::min(degree(rng), own.size());
    std::set<std::uint32_t> chosen;
    while (chosen.size() < d) {
      const std::uint32_t v = unit(rng) < spec.p_in ? own[std::uniform_int_distribution<std::size_t>(0, own.size() - 1)(rng)]
                                                    : any_venue(rng);
      chosen.insert(v);
    }
    for (auto v : chosen) pairs.emplace_back(a, v);
  }
  return graph_from_pairs(spec.n_artists, spec.n_venues, pairs);
}

}  // namespace gigmine

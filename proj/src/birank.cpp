#include "gigmine/birank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gigmine/csv.hpp"
#include "gigmine/error.hpp"
#include "gigmine/parallel.hpp"

namespace gigmine {

namespace {

std::vector<double> log_seeds(const BipartiteGraph& g, Side side) {
  const std::size_t n = g.node_count(side);
  std::vector<double> s(n);
  double total = 0.0;
  for (std::uint32_t i = 0; i < n; ++i) {
    s[i] = std::log(static_cast<double>(g.degree(NodeRef{side, i})) + 1.0);
    total += s[i];
  }
  if (total <= 0.0) {
    throw InvalidArgument(std::string("seed_scores: no ") + (side == Side::artist ? "artist" : "venue") +
                          " has an edge");
  }
  for (auto& x : s) x /= total;
  return s;
}

double l1(const std::vector<double>& x, const std::vector<double>& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d += std::abs(x[i] - y[i]);
  return d;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

SeedScores seed_scores(const BipartiteGraph& g) {
  if (g.artist_count() == 0 || g.venue_count() == 0) throw InvalidArgument("seed_scores: graph has an empty side");
  return SeedScores{log_seeds(g, Side::artist), log_seeds(g, Side::venue)};
}

TemporalWeights temporal_weights(const BipartiteGraph& g, double delta, int ref_year, bool count_scaled) {
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("temporal_weights: delta must lie in (0, 1]");
  TemporalWeights w;
  w.delta = delta;
  w.ref_year = ref_year;
  w.edge_weight.reserve(g.edge_count());
  for (const auto& e : g.edges()) {
    if (e.info.first_year > ref_year) {
      throw InvalidArgument("temporal_weights: edge " + g.artist_id(e.artist).value + " - " +
                            g.venue_id(e.venue).value + " first seen in " + std::to_string(e.info.first_year) +
                            ", after reference year " + std::to_string(ref_year));
    }
    double x = std::pow(delta, ref_year - e.info.first_year);
    if (count_scaled) x *= static_cast<double>(e.info.count);
    w.edge_weight.push_back(x);
  }
  return w;
}

BiRankResult birank(const BipartiteGraph& g, const TemporalWeights& weights, const SeedScores& seeds,
                    const BiRankOptions& opts) {
  const std::size_t A = g.artist_count(), V = g.venue_count();
  if (weights.edge_weight.size() != g.edge_count()) throw InvalidArgument("birank: weights do not cover every edge");
  if (seeds.artist.size() != A || seeds.venue.size() != V) throw InvalidArgument("birank: seed size mismatch");
  if (opts.alpha < 0.0 || opts.alpha > 1.0 || opts.beta < 0.0 || opts.beta > 1.0) {
    throw InvalidArgument("birank: alpha and beta must lie in [0, 1]");
  }
  const auto edges = g.edges();
  std::vector<double> du(A, 0.0), dp(V, 0.0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double w = weights.edge_weight[e];
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("birank: edge weights must be finite and >= 0");
    du[edges[e].artist] += w;
    dp[edges[e].venue] += w;
  }
  std::vector<double> s(edges.size(), 0.0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double d = du[edges[e].artist] * dp[edges[e].venue];
    if (d > 0.0) s[e] = weights.edge_weight[e] / std::sqrt(d);
  }

  BiRankResult r;
  std::vector<double> u = opts.start_uniform ? std::vector<double>(A, A ? 1.0 / static_cast<double>(A) : 0.0) : seeds.artist;
  std::vector<double> p = opts.start_uniform ? std::vector<double>(V, V ? 1.0 / static_cast<double>(V) : 0.0) : seeds.venue;
  std::vector<double> u_next(A), p_next(V);
  while (r.iterations < opts.max_iter) {
    for (std::size_t j = 0; j < V; ++j) p_next[j] = (1.0 - opts.beta) * seeds.venue[j];
    for (std::size_t e = 0; e < edges.size(); ++e) p_next[edges[e].venue] += opts.beta * s[e] * u[edges[e].artist];
    for (std::size_t i = 0; i < A; ++i) u_next[i] = (1.0 - opts.alpha) * seeds.artist[i];
    for (std::size_t e = 0; e < edges.size(); ++e) u_next[edges[e].artist] += opts.alpha * s[e] * p_next[edges[e].venue];
    const double change = std::max(l1(u, u_next), l1(p, p_next));
    u.swap(u_next);
    p.swap(p_next);
    ++r.iterations;
    r.deltas.push_back(change);
    if (change < opts.tol) {
      r.converged = true;
      break;
    }
  }
  r.artist_scores = std::move(u);
  r.venue_scores = std::move(p);
  return r;
}

std::vector<std::size_t> dense_rank(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<std::size_t> rank(scores.size());
  std::size_t current = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || scores[order[i]] != scores[order[i - 1]]) ++current;
    rank[order[i]] = current;
  }
  return rank;
}

Trajectories yearly_trajectories(const Corpus& corpus, const TrajectoryOptions& opts) {
  if (opts.window_years < 1) throw InvalidArgument("yearly_trajectories: window_years must be positive");
  if (corpus.events.empty()) throw InvalidArgument("yearly_trajectories: corpus has no events");
  int lo = year_of(corpus.events.front().date), hi = lo;
  for (const auto& ev : corpus.events) {
    lo = std::min(lo, year_of(ev.date));
    hi = std::max(hi, year_of(ev.date));
  }
  if (hi - lo + 1 < opts.window_years) {
    throw InvalidArgument("yearly_trajectories: corpus spans " + std::to_string(hi - lo + 1) +
                          " years, fewer than the window of " + std::to_string(opts.window_years));
  }
  std::vector<int> years;
  for (int y = lo + opts.window_years - 1; y <= hi; ++y) years.push_back(y);

  std::vector<std::optional<YearRanking>> out(years.size());
  parallel_for(years.size(), opts.threads, [&](std::size_t k) {
    const int y = years[k];
    GraphBuilder b;
    for (const auto& ev : corpus.events) {
      const int ey = year_of(ev.date);
      if (ey > y - opts.window_years && ey <= y) b.add_event(ev.artist, ev.venue, ey);
    }
    const auto g = std::move(b).build();
    if (g.edge_count() == 0) return;
    const auto res = birank(g, temporal_weights(g, opts.delta, y, opts.count_scaled), seed_scores(g), opts.birank);
    const auto ranks = dense_rank(res.artist_scores);
    YearRanking yr;
    yr.year = y;
    for (std::uint32_t a = 0; a < g.artist_count(); ++a) yr.ranks.push_back({g.artist_id(a), ranks[a], res.artist_scores[a]});
    std::sort(yr.ranks.begin(), yr.ranks.end(), [](const ArtistRank& x, const ArtistRank& z) {
      return x.rank != z.rank ? x.rank < z.rank : x.artist < z.artist;
    });
    out[k] = std::move(yr);
  });

  Trajectories t;
  for (std::size_t k = 0; k < years.size(); ++k) {
    if (out[k]) {
      t.years.push_back(std::move(*out[k]));
    } else {
      t.skipped_years.push_back(years[k]);
    }
  }
  return t;
}

std::vector<std::pair<int, std::size_t>> trajectory_of(const Trajectories& t, const ArtistId& artist) {
  std::vector<std::pair<int, std::size_t>> out;
  for (const auto& y : t.years)
    for (const auto& r : y.ranks)
      if (r.artist == artist) out.emplace_back(y.year, r.rank);
  return out;
}

ScoreHistogram score_histogram(std::span<const double> scores, const std::vector<bool>& positive, std::size_t bins) {
  if (scores.size() != positive.size()) throw InvalidArgument("score_histogram: length mismatch");
  if (bins == 0) throw InvalidArgument("score_histogram: bins must be positive");
  std::vector<double> pos, neg;
  for (std::size_t i = 0; i < scores.size(); ++i) (positive[i] ? pos : neg).push_back(scores[i]);
  if (pos.empty() || neg.empty()) throw InvalidArgument("score_histogram: a class is empty");

  auto [mn, mx] = std::minmax_element(scores.begin(), scores.end());
  double lo = *mn, hi = *mx;
  if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  ScoreHistogram h;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  auto fill = [&](const std::vector<double>& xs, std::vector<double>& freq) {
    freq.assign(bins, 0.0);
    for (double x : xs) {
      auto b = static_cast<std::size_t>((x - lo) / (hi - lo) * static_cast<double>(bins));
      freq[std::min(b, bins - 1)] += 1.0;
    }
    for (auto& f : freq) f /= static_cast<double>(xs.size());
  };
  fill(pos, h.positive);
  fill(neg, h.negative);
  h.positive_count = pos.size();
  h.negative_count = neg.size();
  h.positive_mean = mean(pos);
  h.negative_mean = mean(neg);
  h.positive_median = median(pos);
  h.negative_median = median(neg);
  return h;
}

ScoreHistogram score_histogram(const BiRankResult& result, const BipartiteGraph& g, const Labeling& labels,
                               std::size_t bins) {
  if (result.artist_scores.size() != g.artist_count()) throw InvalidArgument("score_histogram: result does not match graph");
  std::vector<bool> positive(g.artist_count());
  for (std::uint32_t a = 0; a < g.artist_count(); ++a) {
    const auto& id = g.artist_id(a);
    if (!labels.labels.contains(id)) throw InvalidArgument("score_histogram: artist " + id.value + " has no label");
    positive[a] = labels.is_positive(id);
  }
  return score_histogram(result.artist_scores, positive, bins);
}

nlohmann::json ScoreHistogram::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < positive.size(); ++i) {
    rows.push_back({{"lo", edges[i]}, {"hi", edges[i + 1]}, {"signed", positive[i]}, {"unsigned", negative[i]}});
  }
  return {{"bins", rows},
          {"signed", {{"count", positive_count}, {"mean", positive_mean}, {"median", positive_median}}},
          {"unsigned", {{"count", negative_count}, {"mean", negative_mean}, {"median", negative_median}}}};
}

nlohmann::json Task3Config::to_json() const {
  return {{"delta", delta},
          {"ref_year", ref_year ? nlohmann::json(*ref_year) : nlohmann::json(nullptr)},
          {"count_scaled", count_scaled},
          {"alpha", birank.alpha},
          {"beta", birank.beta},
          {"tol", birank.tol},
          {"max_iter", birank.max_iter},
          {"window_years", window_years},
          {"top_k", top_k},
          {"bins", bins}};
}

Task3Output run_task3(const Corpus& corpus, const Labeling& labels, const Task3Config& cfg) {
  const auto g = build_graph(corpus.events);
  int ref = 0;
  for (const auto& ev : corpus.events) ref = std::max(ref, year_of(ev.date));
  if (cfg.ref_year) ref = *cfg.ref_year;
  const auto res = birank(g, temporal_weights(g, cfg.delta, ref, cfg.count_scaled), seed_scores(g), cfg.birank);

  auto top = [&](const std::vector<double>& s, Side side) {
    std::vector<std::uint32_t> idx(s.size());
    std::iota(idx.begin(), idx.end(), 0U);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return s[a] > s[b]; });
    idx.resize(std::min(idx.size(), cfg.top_k));
    nlohmann::json rows = nlohmann::json::array();
    for (auto i : idx) rows.push_back({{"id", g.node_name(NodeRef{side, i})}, {"score", s[i]}});
    return rows;
  };

  Task3Output out;
  out.report = {{"ref_year", ref},
                {"graph", {{"artists", g.artist_count()}, {"venues", g.venue_count()}, {"edges", g.edge_count()}}},
                {"iterations", res.iterations},
                {"converged", res.converged},
                {"top_artists", top(res.artist_scores, Side::artist)},
                {"top_venues", top(res.venue_scores, Side::venue)}};
  try {
    out.report["histogram"] = score_histogram(res, g, labels, cfg.bins).to_json();
  } catch (const InvalidArgument& e) {
    out.report["histogram"] = nullptr;
    out.report["histogram_error"] = e.what();
  }
  TrajectoryOptions topts;
  topts.window_years = cfg.window_years;
  topts.delta = cfg.delta;
  topts.count_scaled = cfg.count_scaled;
  topts.birank = cfg.birank;
  topts.threads = cfg.threads;
  out.trajectories = yearly_trajectories(corpus, topts);
  nlohmann::json years = nlohmann::json::array();
  for (const auto& y : out.trajectories.years) years.push_back({{"year", y.year}, {"artists", y.ranks.size()}});
  out.report["trajectory_years"] = years;
  out.report["skipped_years"] = out.trajectories.skipped_years;
  return out;
}

std::string trajectories_csv(const Trajectories& t) {
  std::ostringstream os;
  os << "artist_id,year,rank,score\n";
  os.precision(17);
  for (const auto& y : t.years)
    for (const auto& r : y.ranks)
      os << csv::escape(r.artist.value) << ',' << y.year << ',' << r.rank << ',' << r.score << '\n';
  return os.str();
}

}  // namespace gigmine

#include "gigmine/link_prediction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <unordered_set>

#include "gigmine/error.hpp"
#include "gigmine/metrics.hpp"
#include "gigmine/svd.hpp"

namespace gigmine {

namespace {

std::uint64_t pair_key(std::uint32_t a, std::uint32_t v) { return (static_cast<std::uint64_t>(a) << 32) | v; }

std::uint64_t node_key(Side s, std::uint32_t i) {
  return (static_cast<std::uint64_t>(s == Side::venue ? 1 : 0) << 32) | i;
}

// Side-tagged sorted key set, so sets from both sides can be combined.
std::vector<std::uint64_t> keys(const NeighborSet& s) {
  std::vector<std::uint64_t> out;
  out.reserve(s.size());
  for (auto i : s.members) out.push_back(node_key(s.side, i));
  return out;
}

std::vector<std::uint64_t> set_intersection(const std::vector<std::uint64_t>& x, const std::vector<std::uint64_t>& y) {
  std::vector<std::uint64_t> out;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

std::vector<std::uint64_t> set_union(const std::vector<std::uint64_t>& x, const std::vector<std::uint64_t>& y) {
  std::vector<std::uint64_t> out;
  std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

std::vector<std::uint64_t> common_set(const BipartiteGraph& g, NodeRef u, NodeRef w) {
  const auto nu = keys(g.neighbor_set(u)), nw = keys(g.neighbor_set(w));
  const auto hu = keys(g.two_hop_neighbors(u)), hw = keys(g.two_hop_neighbors(w));
  return set_union(set_intersection(hu, nw), set_intersection(hw, nu));
}

EdgeSet normalized(EdgeSet e) {
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

}  // namespace

std::size_t score_common_neighbors(const BipartiteGraph& g, NodeRef u, NodeRef w) {
  return common_set(g, u, w).size();
}

double score_jaccard(const BipartiteGraph& g, NodeRef u, NodeRef w) {
  const auto nu = keys(g.neighbor_set(u)), nw = keys(g.neighbor_set(w));
  const auto hu = keys(g.two_hop_neighbors(u)), hw = keys(g.two_hop_neighbors(w));
  const auto common = set_union(set_intersection(hu, nw), set_intersection(hw, nu));
  const auto all = set_union(set_union(hu, nw), set_union(hw, nu));
  if (all.empty()) return 0.0;
  return static_cast<double>(common.size()) / static_cast<double>(all.size());
}

std::size_t score_preferential_attachment(const BipartiteGraph& g, NodeRef u, NodeRef w) {
  return g.degree(u) * g.degree(w);
}

double LinkScoreTable::at(std::uint32_t artist, std::uint32_t venue) const {
  if (index_.size() != pairs.size()) {
    index_.clear();
    index_.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) index_.emplace(pair_key(pairs[i].first, pairs[i].second), i);
  }
  auto it = index_.find(pair_key(artist, venue));
  if (it == index_.end()) {
    throw InvalidArgument(predictor + ": pair (" + std::to_string(artist) + ", " + std::to_string(venue) +
                          ") was not scored");
  }
  return scores[it->second];
}

HeuristicScores score_heuristics(const BipartiteGraph& g, const EdgeSet& candidates) {
  HeuristicScores out;
  out.cn.predictor = "common_neighbors";
  out.jaccard.predictor = "jaccard";
  out.pa.predictor = "preferential_attachment";
  for (auto* t : {&out.cn, &out.jaccard, &out.pa}) t->pairs = candidates;
  const std::size_t n = candidates.size();
  std::vector<std::size_t> hat_a_cap_nv(n), hat_v_cap_na(n), hat_a_size(n), hat_v_size(n);

  // For an artist a and venue v the formula splits by side:
  //   CN = |N^(a) & N(v)| + |N^(v) & N(a)|
  //   union = |N^(a) | N(v)| + |N^(v) | N(a)|
  // Each term needs a membership mask of one endpoint's two-hop set.
  auto pass = [&](Side side, std::vector<std::size_t>& cap, std::vector<std::size_t>& size) {
    const std::size_t count = g.node_count(side);
    std::vector<std::vector<std::size_t>> by_node(count);
    for (std::size_t i = 0; i < n; ++i) {
      const auto idx = side == Side::artist ? candidates[i].first : candidates[i].second;
      if (idx >= count) throw UnknownNodeError("candidate endpoint index " + std::to_string(idx) + " not in graph");
      by_node[idx].push_back(i);
    }
    std::vector<char> mark(count, 0);
    for (std::uint32_t x = 0; x < count; ++x) {
      if (by_node[x].empty()) continue;
      const auto hat = g.two_hop_neighbors(NodeRef{side, x});
      for (auto m : hat.members) mark[m] = 1;
      for (std::size_t i : by_node[x]) {
        const auto other = side == Side::artist ? venue_node(candidates[i].second) : artist_node(candidates[i].first);
        std::size_t c = 0;
        for (auto y : g.neighbors(other)) c += mark[y];
        cap[i] = c;
        size[i] = hat.size();
      }
      for (auto m : hat.members) mark[m] = 0;
    }
  };
  pass(Side::artist, hat_a_cap_nv, hat_a_size);
  pass(Side::venue, hat_v_cap_na, hat_v_size);

  for (auto* t : {&out.cn, &out.jaccard, &out.pa}) t->scores.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = artist_node(candidates[i].first);
    const auto v = venue_node(candidates[i].second);
    const double da = static_cast<double>(g.degree(a)), dv = static_cast<double>(g.degree(v));
    const double cn = static_cast<double>(hat_a_cap_nv[i] + hat_v_cap_na[i]);
    const double uni = (static_cast<double>(hat_a_size[i]) + dv - static_cast<double>(hat_a_cap_nv[i])) +
                       (static_cast<double>(hat_v_size[i]) + da - static_cast<double>(hat_v_cap_na[i]));
    out.cn.scores[i] = cn;
    out.jaccard.scores[i] = uni > 0.0 ? cn / uni : 0.0;
    out.pa.scores[i] = da * dv;
  }
  return out;
}

LinkScoreTable score_svd(const BipartiteGraph& train, const EdgeSet& candidates, std::size_t k, std::uint64_t seed) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(train.edge_count());
  for (const auto& e : train.edges())
    t.emplace_back(static_cast<Eigen::Index>(e.artist), static_cast<Eigen::Index>(e.venue), 1.0);
  SparseMatrix m(static_cast<Eigen::Index>(train.artist_count()), static_cast<Eigen::Index>(train.venue_count()));
  m.setFromTriplets(t.begin(), t.end());
  auto svd = truncated_svd(m, k, SvdOptions{1e-10, seed});
  Eigen::MatrixXd left = svd.U * svd.singular_values.asDiagonal();

  LinkScoreTable out;
  out.predictor = "svd";
  out.pairs = candidates;
  out.scores.reserve(candidates.size());
  for (auto [a, v] : candidates) {
    out.scores.push_back(left.row(static_cast<Eigen::Index>(a)).dot(svd.V.row(static_cast<Eigen::Index>(v))));
  }
  return out;
}

LinkScoreTable score_embeddings(const BipartiteGraph& train, const Embeddings& emb, const EdgeSet& candidates) {
  LinkScoreTable out;
  out.predictor = "node_similarity";
  out.pairs = candidates;
  out.scores.reserve(candidates.size());
  for (auto [a, v] : candidates) out.scores.push_back(score_embedding(emb, train, artist_node(a), venue_node(v)));
  return out;
}

EdgeSet sample_negatives(const BipartiteGraph& train, const EdgeSet& exclude, std::size_t count, std::uint64_t seed) {
  const std::uint64_t A = train.artist_count(), V = train.venue_count();
  std::unordered_set<std::uint64_t> blocked;
  blocked.reserve(train.edge_count() + exclude.size());
  for (const auto& e : train.edges()) blocked.insert(pair_key(e.artist, e.venue));
  for (auto [a, v] : exclude)
    if (a < A && v < V) blocked.insert(pair_key(a, v));
  const std::uint64_t available = A * V - blocked.size();
  std::mt19937_64 rng(seed);

  EdgeSet out;
  if (count >= available / 2) {
    // Dense regime: enumerate, then keep a uniform subset.
    for (std::uint32_t a = 0; a < A; ++a)
      for (std::uint32_t v = 0; v < V; ++v)
        if (!blocked.contains(pair_key(a, v))) out.emplace_back(a, v);
    if (count < out.size()) {
      std::shuffle(out.begin(), out.end(), rng);
      out.resize(count);
    }
    return normalized(std::move(out));
  }
  std::unordered_set<std::uint64_t> chosen;
  std::uniform_int_distribution<std::uint64_t> pick_a(0, A - 1), pick_v(0, V - 1);
  while (chosen.size() < count) {
    const auto a = static_cast<std::uint32_t>(pick_a(rng));
    const auto v = static_cast<std::uint32_t>(pick_v(rng));
    const auto key = pair_key(a, v);
    if (blocked.contains(key) || !chosen.insert(key).second) continue;
    out.emplace_back(a, v);
  }
  return normalized(std::move(out));
}

double evaluate_linkpred(const LinkScoreTable& scores, const EdgeSet& positives, const EdgeSet& negatives) {
  if (positives.empty() || negatives.empty()) throw InvalidArgument("evaluate_linkpred: empty positive or negative set");
  std::vector<double> s;
  std::vector<bool> y;
  s.reserve(positives.size() + negatives.size());
  y.reserve(positives.size() + negatives.size());
  for (auto [a, v] : positives) {
    s.push_back(scores.at(a, v));
    y.push_back(true);
  }
  for (auto [a, v] : negatives) {
    s.push_back(scores.at(a, v));
    y.push_back(false);
  }
  return roc_auc(s, y);
}

BipartiteGraph restrict_to_nodes(const Corpus& corpus, const BipartiteGraph& nodes) {
  GraphBuilder b;
  for (const auto& id : nodes.artist_ids()) b.add_artist(id);
  for (const auto& id : nodes.venue_ids()) b.add_venue(id);
  for (const auto& ev : corpus.events) {
    auto a = nodes.find_artist(ev.artist);
    auto v = nodes.find_venue(ev.venue);
    if (a && v) b.add_edge(*a, *v, 1, year_of(ev.date));
  }
  return std::move(b).build();
}

TemporalSplit make_temporal_split(const Corpus& corpus, const SplitSpec& spec) {
  for (int y : spec.test_years) {
    if (y <= spec.train_end_year) throw InvalidArgument("temporal split: test year " + std::to_string(y) +
                                                        " not after train_end_year");
  }
  GraphBuilder b;
  for (const auto& ev : corpus.events)
    if (year_of(ev.date) <= spec.train_end_year) b.add_event(ev.artist, ev.venue, year_of(ev.date));
  TemporalSplit out;
  out.train = recursive_core_filter(std::move(b).build(), spec.core_k);
  if (out.train.edge_count() == 0) throw InvalidArgument("temporal split: empty training graph");

  const std::set<int> test_years(spec.test_years.begin(), spec.test_years.end());
  std::set<std::pair<std::uint32_t, std::uint32_t>> test, in_train;
  std::set<std::pair<std::string, std::string>> unseen;
  for (const auto& ev : corpus.events) {
    if (!test_years.contains(year_of(ev.date))) continue;
    ++out.test_events;
    auto a = out.train.find_artist(ev.artist);
    auto v = out.train.find_venue(ev.venue);
    if (!a || !v) {
      unseen.emplace(ev.artist.value, ev.venue.value);
      continue;
    }
    ++out.test_events_on_core;
    if (out.train.find_edge(*a, *v)) {
      in_train.emplace(*a, *v);
    } else {
      test.emplace(*a, *v);
    }
  }
  out.test.assign(test.begin(), test.end());
  out.test_pairs_unseen_node = unseen.size();
  out.test_pairs_in_train = in_train.size();
  if (out.test.empty()) throw InvalidArgument("temporal split: no new test links in the test years");
  return out;
}

RandomSplit make_random_split(const BipartiteGraph& graph, const SplitSpec& spec) {
  if (!(spec.hidden_fraction > 0.0 && spec.hidden_fraction < 1.0)) {
    throw InvalidArgument("random split: hidden_fraction must lie in (0, 1)");
  }
  const std::size_t m = graph.edge_count();
  const auto hide = static_cast<std::size_t>(std::llround(spec.hidden_fraction * static_cast<double>(m)));
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::mt19937_64 rng(spec.seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> drop(m, false);
  RandomSplit out;
  for (std::size_t i = 0; i < hide; ++i) {
    drop[order[i]] = true;
    const auto& e = graph.edge(static_cast<std::uint32_t>(order[i]));
    out.hidden.emplace_back(e.artist, e.venue);
  }
  out.hidden = normalized(std::move(out.hidden));
  out.train = graph.without_edges(drop);
  return out;
}

std::vector<std::pair<std::string, double>> evaluate_predictors(const BipartiteGraph& train, const EdgeSet& positives,
                                                                const EdgeSet& negatives, const Task2Config& cfg,
                                                                std::uint64_t seed) {
  EdgeSet candidates = positives;
  candidates.insert(candidates.end(), negatives.begin(), negatives.end());
  candidates = normalized(std::move(candidates));
  auto wants = [&](const std::string& name) {
    return std::find(cfg.predictors.begin(), cfg.predictors.end(), name) != cfg.predictors.end();
  };
  std::vector<std::pair<std::string, double>> out;
  if (wants("common_neighbors") || wants("jaccard") || wants("preferential_attachment")) {
    auto h = score_heuristics(train, candidates);
    for (auto* t : {&h.cn, &h.jaccard, &h.pa})
      if (wants(t->predictor)) out.emplace_back(t->predictor, evaluate_linkpred(*t, positives, negatives));
  }
  if (wants("svd")) {
    const auto k = std::min<std::size_t>(cfg.svd_k, std::min(train.artist_count(), train.venue_count()));
    out.emplace_back("svd", evaluate_linkpred(score_svd(train, candidates, k, seed), positives, negatives));
  }
  if (wants("node_similarity")) {
    WalkOptions wopts = cfg.walks;
    wopts.seed = seed;
    wopts.threads = cfg.threads;
    EmbeddingOptions eopts = cfg.embedding;
    eopts.seed = seed;
    auto walks = sample_walks(train, wopts);
    auto emb = train_embeddings(walks, train.artist_count() + train.venue_count(), eopts);
    out.emplace_back("node_similarity", evaluate_linkpred(score_embeddings(train, emb, candidates), positives, negatives));
  }
  return out;
}

namespace {

std::size_t negative_count(const Task2Config& cfg, std::size_t positives) {
  if (cfg.exhaustive) return SIZE_MAX / 2;
  return std::max(cfg.negatives_per_positive * positives, cfg.min_negatives);
}

std::size_t total_events(const BipartiteGraph& g) {
  std::size_t t = 0;
  for (const auto& e : g.edges()) t += e.info.count;
  return t;
}

}  // namespace

std::vector<Task2Result> run_task2(const Corpus& corpus, const Task2Config& cfg) {
  std::vector<Task2Result> results;

  // Forecasting: history up to train_end_year, future links in test_years.
  auto split = make_temporal_split(corpus, cfg.temporal);
  {
    Task2Result r;
    r.task = "FCST";
    r.train_artists = split.train.artist_count();
    r.train_venues = split.train.venue_count();
    r.train_edges = split.train.edge_count();
    r.train_events = total_events(split.train);
    const auto negatives = sample_negatives(split.train, split.test, negative_count(cfg, split.test.size()), cfg.seed);
    r.positives = split.test.size();
    r.negatives = negatives.size();
    for (auto& [name, auc] : evaluate_predictors(split.train, split.test, negatives, cfg, cfg.seed)) {
      r.rows.push_back(PredictorAuc{name, auc, {auc}});
    }
    r.split_details = {{"train_end_year", cfg.temporal.train_end_year},
                       {"test_years", cfg.temporal.test_years},
                       {"core_k", cfg.temporal.core_k},
                       {"test_events", split.test_events},
                       {"test_events_on_core", split.test_events_on_core},
                       {"test_pairs", split.test.size()},
                       {"test_pairs_unseen_node", split.test_pairs_unseen_node},
                       {"test_pairs_in_train", split.test_pairs_in_train}};
    results.push_back(std::move(r));
  }

  // Prediction: same node set, all years, random hidden links.
  const auto full = restrict_to_nodes(corpus, split.train);
  Task2Result r;
  r.task = "PRED";
  r.train_artists = full.artist_count();
  r.train_venues = full.venue_count();
  std::map<std::string, std::vector<double>> per_predictor;
  std::vector<std::string> order;
  nlohmann::json seeds = nlohmann::json::array();
  for (std::size_t s = 0; s < cfg.random_splits; ++s) {
    SplitSpec spec;
    spec.kind = SplitKind::random;
    spec.hidden_fraction = cfg.hidden_fraction;
    spec.seed = cfg.seed + 7919 * (s + 1);
    seeds.push_back(spec.seed);
    auto rs = make_random_split(full, spec);
    const auto negatives = sample_negatives(rs.train, rs.hidden, negative_count(cfg, rs.hidden.size()), spec.seed);
    r.train_edges = rs.train.edge_count();
    r.train_events = total_events(rs.train);
    r.positives = rs.hidden.size();
    r.negatives = negatives.size();
    for (auto& [name, auc] : evaluate_predictors(rs.train, rs.hidden, negatives, cfg, spec.seed)) {
      if (!per_predictor.contains(name)) order.push_back(name);
      per_predictor[name].push_back(auc);
    }
  }
  for (const auto& name : order) {
    const auto& v = per_predictor[name];
    double mean = 0.0;
    for (double x : v) mean += x;
    r.rows.push_back(PredictorAuc{name, mean / static_cast<double>(v.size()), v});
  }
  r.split_details = {{"hidden_fraction", cfg.hidden_fraction}, {"splits", cfg.random_splits}, {"seeds", seeds},
                     {"graph_edges", full.edge_count()}};
  results.push_back(std::move(r));
  return results;
}

nlohmann::json Task2Config::to_json() const {
  return {{"train_end_year", temporal.train_end_year},
          {"test_years", temporal.test_years},
          {"core_k", temporal.core_k},
          {"hidden_fraction", hidden_fraction},
          {"random_splits", random_splits},
          {"svd_k", svd_k},
          {"walks_per_node", walks.walks_per_node},
          {"walk_length", walks.length},
          {"embedding",
           {{"dim", embedding.dim},
            {"window", embedding.window},
            {"negative", embedding.negative},
            {"epochs", embedding.epochs},
            {"learning_rate", embedding.learning_rate}}},
          {"negatives_per_positive", negatives_per_positive},
          {"min_negatives", min_negatives},
          {"exhaustive", exhaustive},
          {"predictors", predictors},
          {"seed", seed}};
}

nlohmann::json Task2Result::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& p : rows) rows_json.push_back({{"model", p.predictor}, {"auc", p.auc}, {"per_split", p.per_split}});
  return {{"task", task},
          {"results", rows_json},
          {"train", {{"artists", train_artists}, {"venues", train_venues}, {"edges", train_edges}, {"events", train_events}}},
          {"positives", positives},
          {"negatives", negatives},
          {"split", split_details}};
}

}  // namespace gigmine

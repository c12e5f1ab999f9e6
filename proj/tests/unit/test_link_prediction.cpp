#include "doctest.h"

#include <random>
#include <set>

#include "gigmine/error.hpp"
#include "gigmine/ingest.hpp"
#include "gigmine/link_prediction.hpp"
#include "support.hpp"

using namespace gigmine;
using testing::Pairs;

namespace {

// a1-v1, a1-v2, a2-v1 as indices a0-v0, a0-v1, a1-v0.
BipartiteGraph toy() { return graph_from_pairs(2, 2, Pairs{{0, 0}, {0, 1}, {1, 0}}); }

EdgeSet all_pairs(std::size_t na, std::size_t nv) {
  EdgeSet out;
  for (std::uint32_t a = 0; a < na; ++a)
    for (std::uint32_t v = 0; v < nv; ++v) out.emplace_back(a, v);
  return out;
}

Event ev(const std::string& a, const std::string& v, int y) {
  static int n = 0;
  Event e;
  e.event_id = "e" + std::to_string(++n);
  e.artist = ArtistId{a};
  e.venue = VenueId{v};
  e.date = make_date(y, 3, 1);
  return e;
}

// Three disjoint a x v bicliques of `size` nodes per side.
Pairs bicliques(std::uint32_t size) {
  Pairs p;
  for (std::uint32_t b = 0; b < 3; ++b)
    for (std::uint32_t i = 0; i < size; ++i)
      for (std::uint32_t j = 0; j < size; ++j) p.emplace_back(b * size + i, b * size + j);
  return p;
}

}  // namespace

TEST_CASE("heuristics on the toy graph") {
  const auto g = toy();
  const auto a2 = artist_node(1), v2 = venue_node(1);
  CHECK(score_common_neighbors(g, a2, v2) == 2);
  CHECK(score_jaccard(g, a2, v2) == 0.5);
  CHECK(score_preferential_attachment(g, a2, v2) == 1);
  // Roles swapped.
  CHECK(score_common_neighbors(g, v2, a2) == 2);
  CHECK(score_jaccard(g, v2, a2) == 0.5);
}

TEST_CASE("heuristics on disconnected and isolated nodes") {
  const auto g = graph_from_pairs(3, 3, Pairs{{0, 0}, {1, 1}});
  CHECK(score_common_neighbors(g, artist_node(0), venue_node(1)) == 0);
  CHECK(score_jaccard(g, artist_node(2), venue_node(2)) == 0.0);
  CHECK(score_preferential_attachment(g, artist_node(2), venue_node(0)) == 0);
  CHECK_THROWS_AS(score_common_neighbors(g, artist_node(5), venue_node(0)), UnknownNodeError);
  CHECK_THROWS_AS(score_jaccard(g, artist_node(0), venue_node(9)), UnknownNodeError);
  CHECK_THROWS_AS(score_preferential_attachment(g, artist_node(0), venue_node(9)), UnknownNodeError);
}

TEST_CASE("single and batch heuristics equal the set-arithmetic oracle") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 40; ++round) {
    const std::size_t na = 1 + rng() % 50, nv = 1 + rng() % 50;
    const double density = 0.05 + 0.25 * static_cast<double>(rng() % 100) / 100.0;
    const auto pairs = testing::random_pairs(rng, na, nv, density);
    const auto g = graph_from_pairs(na, nv, pairs);
    const testing::Adjacency ref(na, nv, pairs);
    const auto cands = all_pairs(na, nv);
    const auto batch = score_heuristics(g, cands);
    for (std::size_t i = 0; i < cands.size(); ++i) {
      const auto [a, v] = cands[i];
      const testing::Node u{0, a}, w{1, v};
      const auto cn = testing::oracle_cn(ref, u, w);
      const auto jac = testing::oracle_jaccard(ref, u, w);
      const auto pa = testing::oracle_pa(ref, u, w);
      CHECK(score_common_neighbors(g, artist_node(a), venue_node(v)) == cn);
      CHECK(score_common_neighbors(g, venue_node(v), artist_node(a)) == cn);
      CHECK(score_jaccard(g, artist_node(a), venue_node(v)) == jac);
      CHECK(score_preferential_attachment(g, artist_node(a), venue_node(v)) == pa);
      CHECK(batch.cn.scores[i] == static_cast<double>(cn));
      CHECK(batch.jaccard.scores[i] == jac);
      CHECK(batch.pa.scores[i] == static_cast<double>(pa));
    }
    if (!cands.empty()) CHECK(batch.cn.at(cands.back().first, cands.back().second) == batch.cn.scores.back());
  }
}

TEST_CASE("score table lookups of unscored pairs fail") {
  const auto g = toy();
  const auto t = score_heuristics(g, EdgeSet{{1, 1}});
  CHECK(t.jaccard.at(1, 1) == 0.5);
  CHECK_THROWS_AS(t.jaccard.at(0, 0), InvalidArgument);
}

TEST_CASE("random split partitions the edges") {
  std::mt19937_64 rng(2);
  const auto g10 = graph_from_pairs(5, 5, Pairs{{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}, {2, 3}, {3, 3}, {3, 4}, {4, 4}, {4, 0}});
  SplitSpec spec;
  spec.kind = SplitKind::random;
  spec.seed = 9;
  const auto s = make_random_split(g10, spec);
  CHECK(s.hidden.size() == 2);
  CHECK(s.train.edge_count() == 8);
  CHECK(s.train.artist_count() == 5);

  const auto pairs = testing::random_pairs(rng, 30, 30, 0.2);
  const auto g = graph_from_pairs(30, 30, pairs);
  const auto r = make_random_split(g, spec);
  std::set<std::pair<std::uint32_t, std::uint32_t>> all(pairs.begin(), pairs.end()), seen;
  for (const auto& e : r.train.edges()) CHECK(seen.emplace(e.artist, e.venue).second);
  for (auto p : r.hidden) CHECK(seen.insert(p).second);
  CHECK(seen == all);
  const auto again = make_random_split(g, spec);
  CHECK(again.hidden == r.hidden);
  spec.seed = 10;
  CHECK(make_random_split(g, spec).hidden != r.hidden);
}

TEST_CASE("temporal split keeps new links among core nodes") {
  std::vector<Event> evs;
  // 5x5 biclique before 2016, each pair once: every node has 5 events.
  for (int a = 0; a < 5; ++a)
    for (int v = 0; v < 5; ++v)
      if (!(a == 0 && v == 0)) evs.push_back(ev("a" + std::to_string(a), "v" + std::to_string(v), 2010 + (a + v) % 5));
  evs.push_back(ev("a0", "v9", 2010));  // v9 falls out of the core
  evs.push_back(ev("a0", "v1", 2012));  // so a0 needs a fifth event elsewhere
  evs.push_back(ev("a0", "v0", 2016));  // new link among core nodes
  evs.push_back(ev("a0", "v0", 2017));  // same pair again
  evs.push_back(ev("a1", "v1", 2016));  // already linked in training
  evs.push_back(ev("a0", "v9", 2017));  // v9 is not in the core
  evs.push_back(ev("new", "v1", 2017)); // unseen artist
  evs.push_back(ev("a3", "v3", 2018));  // outside test years
  // v0 has only 4 events before 2016 (a1..a4); add one so it survives.
  evs.push_back(ev("a1", "v0", 2011));
  Corpus c;
  c.events = evs;
  c.reindex();
  const auto s = make_temporal_split(c, SplitSpec{});
  CHECK(s.train.artist_count() == 5);
  CHECK(s.train.venue_count() == 5);
  CHECK(s.test == EdgeSet{{*s.train.find_artist(ArtistId{"a0"}), *s.train.find_venue(VenueId{"v0"})}});
  CHECK(s.test_events == 5);
  CHECK(s.test_events_on_core == 3);
  CHECK(s.test_pairs_unseen_node == 2);
  CHECK(s.test_pairs_in_train == 1);

  Corpus old;
  old.events = {ev("a", "v", 2010)};
  old.reindex();
  SplitSpec one;
  one.core_k = 1;
  CHECK_THROWS_AS(make_temporal_split(old, one), InvalidArgument);
}

TEST_CASE("SVD scores: planted biclique") {
  // One 6x6 biclique plus scattered noise; hide one biclique edge.
  Pairs p;
  for (std::uint32_t i = 0; i < 6; ++i)
    for (std::uint32_t j = 0; j < 6; ++j)
      if (!(i == 2 && j == 3)) p.emplace_back(i, j);
  p.emplace_back(8, 9);
  p.emplace_back(10, 7);
  const auto g = graph_from_pairs(12, 12, p);
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges(p.begin(), p.end());
  EdgeSet non_edges;
  for (auto pr : all_pairs(12, 12))
    if (!edges.contains(pr)) non_edges.push_back(pr);
  const auto t = score_svd(g, non_edges, 1);
  const double hidden = t.at(2, 3);
  for (std::size_t i = 0; i < non_edges.size(); ++i)
    if (non_edges[i] != std::pair<std::uint32_t, std::uint32_t>{2, 3}) CHECK(t.scores[i] < hidden);

  // Full rank reproduces the matrix.
  const auto full = score_svd(g, all_pairs(12, 12), 12);
  for (std::size_t i = 0; i < full.pairs.size(); ++i)
    CHECK(full.scores[i] == doctest::Approx(edges.contains(full.pairs[i]) ? 1.0 : 0.0).epsilon(1e-8));
  CHECK_THROWS_AS(score_svd(g, non_edges, 13), InvalidArgument);
  CHECK_THROWS_AS(score_svd(g, non_edges, 0), InvalidArgument);
}

TEST_CASE("SVD recovers hidden edges of three bicliques") {
  const auto pairs = bicliques(20);
  const auto g = graph_from_pairs(60, 60, pairs);
  SplitSpec spec;
  spec.hidden_fraction = 0.1;
  spec.seed = 4;
  const auto split = make_random_split(g, spec);
  const auto neg = sample_negatives(split.train, split.hidden, 5000, 1);
  EdgeSet cands = split.hidden;
  cands.insert(cands.end(), neg.begin(), neg.end());
  const auto t = score_svd(split.train, cands, 3);
  CHECK(evaluate_linkpred(t, split.hidden, neg) >= 0.9);
}

TEST_CASE("SVD scores follow a relabeling of rows and columns") {
  std::mt19937_64 rng(6);
  const std::size_t na = 25, nv = 20;
  const auto pairs = testing::random_pairs(rng, na, nv, 0.25);
  std::vector<std::uint32_t> pa(na), pv(nv);
  std::iota(pa.begin(), pa.end(), 0U);
  std::iota(pv.begin(), pv.end(), 0U);
  std::shuffle(pa.begin(), pa.end(), rng);
  std::shuffle(pv.begin(), pv.end(), rng);
  Pairs permuted;
  for (auto [a, v] : pairs) permuted.emplace_back(pa[a], pv[v]);
  const auto g = graph_from_pairs(na, nv, pairs);
  const auto h = graph_from_pairs(na, nv, permuted);
  const auto cands = all_pairs(na, nv);
  EdgeSet moved;
  for (auto [a, v] : cands) moved.emplace_back(pa[a], pv[v]);
  const auto s = score_svd(g, cands, 5);
  const auto t = score_svd(h, moved, 5, 99);
  for (std::size_t i = 0; i < cands.size(); ++i) CHECK(t.scores[i] == doctest::Approx(s.scores[i]).epsilon(1e-8));
}

TEST_CASE("negative sampling") {
  std::mt19937_64 rng(12);
  const auto pairs = testing::random_pairs(rng, 40, 40, 0.1);
  const auto g = graph_from_pairs(40, 40, pairs);
  const EdgeSet exclude{{0, 0}, {1, 1}, {2, 2}};
  std::set<std::pair<std::uint32_t, std::uint32_t>> blocked(pairs.begin(), pairs.end());
  blocked.insert(exclude.begin(), exclude.end());
  for (std::size_t count : {10, 300, 1000, 100000}) {
    const auto neg = sample_negatives(g, exclude, count, 5);
    CHECK(neg.size() == std::min(count, 1600 - blocked.size()));
    CHECK(std::is_sorted(neg.begin(), neg.end()));
    CHECK(std::adjacent_find(neg.begin(), neg.end()) == neg.end());
    for (auto p : neg) CHECK_FALSE(blocked.contains(p));
    CHECK(neg == sample_negatives(g, exclude, count, 5));
  }
}

TEST_CASE("sampled-negative AUC converges to the exhaustive AUC") {
  std::mt19937_64 rng(13);
  const auto pairs = testing::random_pairs(rng, 60, 60, 0.15);
  const auto g = graph_from_pairs(60, 60, pairs);
  SplitSpec spec;
  spec.seed = 1;
  const auto split = make_random_split(g, spec);
  const auto everything = sample_negatives(split.train, split.hidden, 60 * 60, 0);
  const auto sampled = sample_negatives(split.train, split.hidden, 1000, 7);
  EdgeSet cands = split.hidden;
  cands.insert(cands.end(), everything.begin(), everything.end());
  const auto scores = score_heuristics(split.train, cands);
  for (const auto* t : {&scores.cn, &scores.jaccard, &scores.pa}) {
    const double exact = evaluate_linkpred(*t, split.hidden, everything);
    CHECK(std::abs(evaluate_linkpred(*t, split.hidden, sampled) - exact) < 0.03);
  }
}

TEST_CASE("evaluate_linkpred") {
  LinkScoreTable t;
  t.predictor = "x";
  t.pairs = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  t.scores = {0.9, 0.8, 0.1, 0.2};
  CHECK(evaluate_linkpred(t, EdgeSet{{0, 0}, {0, 1}}, EdgeSet{{1, 0}, {1, 1}}) == 1.0);
  t.scores = {0.5, 0.5, 0.5, 0.5};
  CHECK(evaluate_linkpred(t, EdgeSet{{0, 0}, {0, 1}}, EdgeSet{{1, 0}, {1, 1}}) == 0.5);
  CHECK_THROWS_AS(evaluate_linkpred(t, EdgeSet{}, EdgeSet{{1, 0}}), InvalidArgument);
}

// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any criterion fails. Criterion 10 needs the released dataset and prints
// SKIP unless GIGMINE_DATASET names a directory holding it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "gigmine/birank.hpp"
#include "gigmine/link_prediction.hpp"
#include "gigmine/logreg.hpp"
#include "gigmine/metrics.hpp"
#include "gigmine/pipeline.hpp"
#include "gigmine/success_forecast.hpp"
#include "gigmine/svd.hpp"
#include "gigmine/synth.hpp"
#include "support.hpp"

using namespace gigmine;
using testing::Pairs;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

int failures = 0;

void run(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (out.ok && secs >= limit_s) {
    out.ok = false;
    out.detail = "over the " + fmt(limit_s) + " s limit";
  }
  if (!out.ok) ++failures;
  std::printf("%s %2d %s (%.1f s)%s%s\n", out.ok ? "PASS" : "FAIL", id, name.c_str(), secs,
              out.detail.empty() ? "" : ": ", out.detail.c_str());
  std::fflush(stdout);
}

EdgeSet all_pairs(std::size_t na, std::size_t nv) {
  EdgeSet out;
  for (std::uint32_t a = 0; a < na; ++a)
    for (std::uint32_t v = 0; v < nv; ++v) out.emplace_back(a, v);
  return out;
}

Eigen::VectorXd vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Graph with at least one edge on every node, dated across 2010..2017.
BipartiteGraph dated_random(std::mt19937_64& rng, std::size_t na, std::size_t nv) {
  GraphBuilder b;
  for (std::size_t a = 0; a < na; ++a) b.add_artist(ArtistId{"a" + std::to_string(a)});
  for (std::size_t v = 0; v < nv; ++v) b.add_venue(VenueId{"v" + std::to_string(v)});
  const auto year = [&] { return 2010 + static_cast<int>(rng() % 8); };
  for (std::uint32_t a = 0; a < na; ++a) b.add_edge(a, static_cast<std::uint32_t>(rng() % nv), 1, year());
  for (std::uint32_t v = 0; v < nv; ++v) b.add_edge(static_cast<std::uint32_t>(rng() % na), v, 1, year());
  for (std::uint32_t a = 0; a < na; ++a)
    for (std::uint32_t v = 0; v < nv; ++v)
      if (rng() % 4 == 0) b.add_edge(a, v, 1 + static_cast<std::uint32_t>(rng() % 3), year());
  return std::move(b).build();
}

Eigen::MatrixXd dense_weights(const BipartiteGraph& g, const TemporalWeights& w) {
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.artist_count()),
                                            static_cast<Eigen::Index>(g.venue_count()));
  for (std::uint32_t e = 0; e < g.edge_count(); ++e) W(g.edge(e).artist, g.edge(e).venue) += w.edge_weight[e];
  return W;
}

Outcome heuristics_oracle() {
  Outcome out;
  std::mt19937_64 rng(1001);
  std::size_t checked = 0;
  for (int round = 0; round < 200; ++round) {
    const std::size_t na = 1 + rng() % 50, nv = 1 + rng() % 50;
    const double density = std::uniform_real_distribution<double>(0.05, 0.3)(rng);
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
      const bool same = score_common_neighbors(g, artist_node(a), venue_node(v)) == cn &&
                        score_jaccard(g, artist_node(a), venue_node(v)) == jac &&
                        score_preferential_attachment(g, artist_node(a), venue_node(v)) == pa &&
                        batch.cn.scores[i] == static_cast<double>(cn) && batch.jaccard.scores[i] == jac &&
                        batch.pa.scores[i] == static_cast<double>(pa);
      out.require(same, "graph " + std::to_string(round) + " pair (" + std::to_string(a) + "," + std::to_string(v) + ")");
      ++checked;
    }
  }
  if (out.ok) out.detail = std::to_string(checked) + " pairs exact";
  return out;
}

Outcome auc_oracle() {
  Outcome out;
  std::mt19937_64 rng(1002);
  double worst = 0.0;
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 2 + rng() % 999;
    const int levels = 1 + static_cast<int>(rng() % 20);  // few levels, many ties
    std::vector<double> s(n);
    std::vector<bool> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng() % static_cast<std::uint64_t>(levels)) / 3.0;
      y[i] = rng() % 3 == 0;
    }
    y[0] = true;
    y[1] = false;
    worst = std::max(worst, std::abs(roc_auc(s, y) - testing::oracle_auc(s, y)));
  }
  out.require(worst < 1e-12, "max deviation " + sci(worst));
  if (out.ok) out.detail = "max deviation " + sci(worst);
  return out;
}

Outcome logreg_gradient() {
  Outcome out;
  std::mt19937_64 rng(1003);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int round = 0; round < 20; ++round) {
    const Eigen::Index n = 20 + static_cast<Eigen::Index>(rng() % 200), d = 1 + static_cast<Eigen::Index>(rng() % 15);
    const double C = std::pow(10.0, std::uniform_real_distribution<double>(-2, 2)(rng));
    Eigen::MatrixXd X(n, d);
    Eigen::VectorXd truth(d);
    for (Eigen::Index j = 0; j < d; ++j) truth(j) = g(rng);
    std::vector<bool> y(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) X(i, j) = g(rng);
      y[static_cast<std::size_t>(i)] = X.row(i).dot(truth) + g(rng) > 0;
    }
    y[0] = true;
    y[1] = false;
    Eigen::VectorXd w(d + 1), grad;
    for (Eigen::Index j = 0; j <= d; ++j) w(j) = g(rng);
    logreg_objective(X, y, C, w, &grad);
    for (Eigen::Index j = 0; j <= d; ++j) {
      const double h = 1e-5 * std::max(1.0, std::abs(w(j)));
      Eigen::VectorXd up = w, dn = w;
      up(j) += h;
      dn(j) -= h;
      const double fd = (logreg_objective(X, y, C, up, nullptr) - logreg_objective(X, y, C, dn, nullptr)) / (2 * h);
      worst = std::max(worst, std::abs(fd - grad(j)) / std::max(1.0, std::abs(grad(j))));
    }
    const auto fit = train_logreg(X, y, LogRegOptions{C});
    for (std::size_t i = 1; i < fit.loss_history.size(); ++i)
      out.require(fit.loss_history[i] <= fit.loss_history[i - 1], "loss rose on instance " + std::to_string(round));
  }
  out.require(worst < 1e-5, "max relative deviation " + sci(worst));
  if (out.ok) out.detail = "max relative deviation " + sci(worst);
  return out;
}

Outcome svd_recovery() {
  Outcome out;
  std::mt19937_64 rng(1004);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int round = 0; round < 10; ++round) {
    const Eigen::Index r = 1 + static_cast<Eigen::Index>(rng() % 10);
    const Eigen::Index m = 20 + static_cast<Eigen::Index>(rng() % 481), n = 20 + static_cast<Eigen::Index>(rng() % 481);
    Eigen::MatrixXd L(m, r), R(r, n);
    for (Eigen::Index i = 0; i < L.size(); ++i) L.data()[i] = g(rng);
    for (Eigen::Index i = 0; i < R.size(); ++i) R.data()[i] = g(rng);
    const Eigen::MatrixXd A = L * R;
    const auto svd = truncated_svd(A, static_cast<std::size_t>(r));
    worst = std::max(worst, (svd.reconstruct() - A).norm() / A.norm());
  }
  out.require(worst < 1e-8, "relative error " + sci(worst));

  // Three disjoint 20x20 bicliques, 10% of edges hidden.
  Pairs p;
  for (std::uint32_t b = 0; b < 3; ++b)
    for (std::uint32_t i = 0; i < 20; ++i)
      for (std::uint32_t j = 0; j < 20; ++j) p.emplace_back(b * 20 + i, b * 20 + j);
  const auto graph = graph_from_pairs(60, 60, p);
  SplitSpec spec;
  spec.hidden_fraction = 0.1;
  spec.seed = 5;
  const auto split = make_random_split(graph, spec);
  const auto neg = sample_negatives(split.train, split.hidden, 5000, 2);
  EdgeSet cands = split.hidden;
  cands.insert(cands.end(), neg.begin(), neg.end());
  const double auc = evaluate_linkpred(score_svd(split.train, cands, 3), split.hidden, neg);
  out.require(auc >= 0.9, "biclique AUC " + fmt(auc));
  if (out.ok) out.detail = "max relative error " + sci(worst) + ", biclique AUC " + fmt(auc);
  return out;
}

Outcome birank_fixed_point() {
  Outcome out;
  std::mt19937_64 rng(1005);
  double worst = 0.0;
  for (int round = 0; round < 50; ++round) {
    const auto g = dated_random(rng, 1 + rng() % 20, 1 + rng() % 20);
    const auto w = temporal_weights(g, 0.85, 2017, round % 2 == 1);
    const auto seeds = seed_scores(g);
    BiRankOptions o;
    o.tol = 1e-14;
    o.max_iter = 5000;
    const auto r = birank(g, w, seeds, o);
    const auto [u, q] = testing::oracle_birank(dense_weights(g, w), vec(seeds.artist), vec(seeds.venue), 0.85, 0.85);
    worst = std::max({worst, (vec(r.artist_scores) - u).cwiseAbs().maxCoeff(), (vec(r.venue_scores) - q).cwiseAbs().maxCoeff()});

    const auto zero = birank(g, w, seeds, BiRankOptions{0.0, 0.0});
    out.require(zero.artist_scores == seeds.artist && zero.venue_scores == seeds.venue,
                "alpha = beta = 0 moved the seeds on graph " + std::to_string(round));
  }
  out.require(worst < 1e-10, "max deviation " + sci(worst));

  Pairs all;
  for (std::uint32_t a = 0; a < 5; ++a)
    for (std::uint32_t v = 0; v < 7; ++v) all.emplace_back(a, v);
  const auto k = graph_from_pairs(5, 7, all);
  const auto r = birank(k, temporal_weights(k), seed_scores(k));
  for (double x : r.artist_scores)
    out.require(std::abs(x - r.artist_scores[0]) < 1e-12, "complete graph artist score " + fmt(x));
  for (double x : r.venue_scores)
    out.require(std::abs(x - r.venue_scores[0]) < 1e-12, "complete graph venue score " + fmt(x));
  if (out.ok) out.detail = "max deviation " + sci(worst);
  return out;
}

Outcome seed_sums() {
  Outcome out;
  std::mt19937_64 rng(1006);
  double worst = 0.0;
  for (int round = 0; round < 200; ++round) {
    const auto g = dated_random(rng, 1 + rng() % 50, 1 + rng() % 50);
    const auto s = seed_scores(g);
    worst = std::max({worst, std::abs(std::accumulate(s.artist.begin(), s.artist.end(), 0.0) - 1.0),
                      std::abs(std::accumulate(s.venue.begin(), s.venue.end(), 0.0) - 1.0)});
  }
  out.require(worst < 1e-9, "sum deviation " + sci(worst));
  const auto s = seed_scores(graph_from_pairs(2, 3, Pairs{{0, 0}, {1, 0}, {1, 1}, {1, 2}}));
  out.require(std::abs(s.artist[0] - 1.0 / 3.0) < 1e-12 && std::abs(s.artist[1] - 2.0 / 3.0) < 1e-12,
              "degree (1,3) seeds " + fmt(s.artist[0]) + ", " + fmt(s.artist[1]));
  if (out.ok) out.detail = "sum deviation " + sci(worst) + ", (1/3, 2/3) exact";
  return out;
}

Outcome planted_forecasting() {
  Outcome out;
  double lift = 0.0;
  std::ostringstream per;
  for (std::uint64_t seed : {1, 2, 3}) {
    GenSpec spec;
    spec.n_artists = 2000;
    spec.seed = seed;
    spec.planted.success_venue_bias = 3.0;
    const auto loaded = generate(spec).load();
    const auto prep = prepare(loaded.corpus, loaded.report, PreprocessConfig{});
    Task1Config cfg;
    cfg.seed = seed;
    cfg.models = {ModelKind::baseline, ModelKind::logreg};
    cfg.protocols = {Protocol::forecasting};
    const auto reports = run_task1(prep.corpus, prep.labels, cfg);
    const double base = reports.at(0).mean.roc_auc, lr = reports.at(1).mean.roc_auc;
    per << (seed > 1 ? "; " : "") << "seed " << seed << " LR " << fmt(lr) << " vs " << fmt(base);
    lift += (lr - base) / 3.0;
  }
  out.require(lift >= 0.10, "mean lift " + fmt(lift) + " (" + per.str() + ")");
  if (out.ok) out.detail = "mean lift " + fmt(lift) + " (" + per.str() + ")";
  return out;
}

Outcome planted_links() {
  Outcome out;
  CommunitySpec cs;
  cs.seed = 8;
  const auto g = community_bipartite_graph(cs);
  SplitSpec spec;
  spec.hidden_fraction = 0.2;
  spec.seed = 8;
  const auto split = make_random_split(g, spec);
  const auto neg = sample_negatives(split.train, split.hidden, 10 * split.hidden.size(), 9);
  EdgeSet cands = split.hidden;
  cands.insert(cands.end(), neg.begin(), neg.end());
  const auto h = score_heuristics(split.train, cands);
  const double cn = evaluate_linkpred(h.cn, split.hidden, neg);
  const double jac = evaluate_linkpred(h.jaccard, split.hidden, neg);
  const double pa = evaluate_linkpred(h.pa, split.hidden, neg);
  const std::string summary = "CN " + fmt(cn) + ", Jaccard " + fmt(jac) + ", PA " + fmt(pa);
  out.require(cn >= 0.85 && jac >= 0.85, summary);
  out.require(cn > pa && jac > pa, "ordering: " + summary);
  if (out.ok) out.detail = summary;
  return out;
}

Outcome trajectory_capture() {
  Outcome out;
  GenSpec spec;
  spec.n_artists = 800;
  spec.n_venues = 600;
  spec.seed = 4;
  spec.tours_per_route = 20;
  const auto g = generate(spec);
  const auto loaded = g.load();
  const auto prep = prepare(loaded.corpus, loaded.report, PreprocessConfig{});
  const auto traj = yearly_trajectories(prep.corpus, TrajectoryOptions{});
  std::ostringstream summary;
  for (const auto& t : g.manifest["trajectories"]) {
    const auto name = t["artist"].get<std::string>();
    const auto years = t["years"].get<std::vector<int>>();
    std::map<int, std::size_t> rank_in;
    for (auto [y, r] : trajectory_of(traj, ArtistId{name})) rank_in[y] = r;
    // Six ramp years give six windows ending in those years: five steps.
    std::size_t improving = 0;
    summary << (summary.tellp() > 0 ? "; " : "") << name << " ranks";
    for (std::size_t i = 0; i < years.size(); ++i) {
      const auto it = rank_in.find(years[i]);
      summary << ' ' << (it == rank_in.end() ? std::string("-") : std::to_string(it->second));
      if (i == 0) continue;
      const auto prev = rank_in.find(years[i - 1]);
      if (it != rank_in.end() && prev != rank_in.end() && it->second < prev->second) ++improving;
    }
    out.require(improving >= 4, summary.str());
  }
  out.require(!g.manifest["trajectories"].empty(), "no trajectory artists planted");
  if (out.ok) out.detail = summary.str();
  return out;
}

Outcome real_data(const std::filesystem::path& dir) {
  Outcome out;
  auto loaded = parse_corpus(dir / "events.csv", dir / "releases.csv", dir / "labels.csv");
  const auto prep = prepare(loaded.corpus, std::move(loaded.report), PreprocessConfig{});
  const auto stats = corpus_stats(prep.corpus);
  const std::string summary = "concerts " + stats["concerts"].dump() + ", artists " + stats["artists"].dump() +
                              ", venues " + stats["venues"].dump() + ", major labels " + stats["major_labels"].dump();
  out.require(stats["concerts"] == 645507 && stats["artists"] == 13912 && stats["venues"] == 11428 &&
                  stats["major_labels"] == 286,
              summary);
  Task2Config t2;
  t2.predictors = {"common_neighbors", "jaccard", "preferential_attachment", "svd"};
  const auto res = run_task2(prep.corpus, t2);
  const std::map<std::string, double> published{
      {"common_neighbors", 0.87}, {"jaccard", 0.89}, {"preferential_attachment", 0.79}, {"svd", 0.81}};
  for (const auto& r : res) {
    if (r.task != "FCST") continue;
    for (const auto& row : r.rows)
      if (published.contains(row.predictor))
        out.require(std::abs(row.auc - published.at(row.predictor)) <= 0.03, "FCST " + row.predictor + " AUC " + fmt(row.auc));
  }
  if (out.ok) out.detail = summary;
  return out;
}

}  // namespace

int main() {
  run(1, "heuristic scores equal the set-arithmetic oracle", 30, heuristics_oracle);
  run(2, "roc_auc equals the pairwise oracle", 10, auc_oracle);
  run(3, "logistic regression gradient and monotone loss", 30, logreg_gradient);
  run(4, "truncated SVD recovery and biclique link prediction", 60, svd_recovery);
  run(5, "BiRank fixed point, zero damping and complete graph", 20, birank_fixed_point);
  run(6, "seed scores sum to one; degree (1,3) gives (1/3, 2/3)", 10, seed_sums);
  run(7, "planted forecasting: LR beats the concert-count baseline", 300, planted_forecasting);
  run(8, "planted communities: CN and Jaccard AUC, ordering over PA", 300, planted_links);
  run(9, "BiRank captures a planted rising artist", 120, trajectory_capture);
  if (const char* dir = std::getenv("GIGMINE_DATASET"); dir && *dir) {
    run(10, "real-data reproduction", 1e9, [dir] { return real_data(dir); });
  } else {
    std::printf("SKIP 10 real-data reproduction: set GIGMINE_DATASET to the dataset directory\n");
  }
  return failures == 0 ? 0 : 1;
}

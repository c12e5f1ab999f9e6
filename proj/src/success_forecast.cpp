#include "gigmine/success_forecast.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "gigmine/error.hpp"
#include "gigmine/parallel.hpp"

namespace gigmine {

std::string_view protocol_tag(Protocol p) { return p == Protocol::forecasting ? "FCST" : "PRED"; }

std::string_view model_name(ModelKind k) {
  switch (k) {
    case ModelKind::baseline: return "Baseline";
    case ModelKind::logreg: return "LR";
    case ModelKind::logreg_svd: return "LR+SVD";
  }
  return "?";
}

double AffiliationMatrix::sparsity() const {
  const double cells = static_cast<double>(entries.rows()) * static_cast<double>(entries.cols());
  if (cells == 0.0) return 1.0;
  return 1.0 - static_cast<double>(entries.nonZeros()) / cells;
}

AffiliationMatrix build_affiliation(const Corpus& corpus, const Labeling& labels, Protocol mode, bool binary) {
  AffiliationMatrix m;
  m.binary = binary;
  std::map<VenueId, Eigen::Index> col_of;
  for (const auto& [venue, unused] : corpus.venue_events) {
    col_of.emplace(venue, static_cast<Eigen::Index>(m.cols.size()));
    m.cols.push_back(venue);
  }
  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto& [artist, idx] : corpus.artist_events) {
    const auto row = static_cast<Eigen::Index>(m.rows.size());
    m.rows.push_back(artist);
    const auto cp = mode == Protocol::forecasting ? labels.change_point_of(artist) : std::nullopt;
    std::map<Eigen::Index, double> counts;
    for (std::size_t i : idx) {
      const auto& ev = corpus.events[i];
      if (cp && !(ev.date < *cp)) continue;
      counts[col_of.at(ev.venue)] += 1.0;
    }
    for (auto [col, c] : counts) triplets.emplace_back(row, col, binary ? 1.0 : c);
  }
  m.entries.resize(static_cast<Eigen::Index>(m.rows.size()), static_cast<Eigen::Index>(m.cols.size()));
  m.entries.setFromTriplets(triplets.begin(), triplets.end());
  m.entries.makeCompressed();
  return m;
}

std::vector<bool> row_labels(const AffiliationMatrix& m, const Labeling& labels) {
  std::vector<bool> out;
  out.reserve(m.rows.size());
  for (const auto& a : m.rows) out.push_back(labels.is_positive(a));
  return out;
}

std::vector<double> baseline_scores(const SparseMatrix& m) {
  if (m.rows() == 0) throw InvalidArgument("baseline_scores: empty matrix");
  Eigen::VectorXd sums = m * Eigen::VectorXd::Ones(m.cols());
  const double max = sums.maxCoeff();
  if (!(max > 0.0)) throw InvalidArgument("baseline_scores: matrix has no concerts");
  std::vector<double> out(static_cast<std::size_t>(sums.size()));
  for (Eigen::Index i = 0; i < sums.size(); ++i) out[static_cast<std::size_t>(i)] = sums[i] / max;
  return out;
}

Eigen::MatrixXd svd_reduce(const SparseMatrix& m, std::size_t k, std::uint64_t seed) {
  auto svd = truncated_svd(m, k, SvdOptions{1e-10, seed});
  return svd.U * svd.singular_values.asDiagonal();
}

SparseMatrix select_rows(const SparseMatrix& m, const std::vector<std::size_t>& rows) {
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (SparseMatrix::InnerIterator it(m, static_cast<Eigen::Index>(rows[r])); it; ++it) {
      t.emplace_back(static_cast<Eigen::Index>(r), it.col(), it.value());
    }
  }
  SparseMatrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  out.setFromTriplets(t.begin(), t.end());
  out.makeCompressed();
  return out;
}

Partition stratified_split(const std::vector<bool>& labels, double test_fraction, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Partition p;
  for (bool cls : {true, false}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) members.push_back(i);
    std::shuffle(members.begin(), members.end(), rng);
    auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(members.size())));
    n_test = std::clamp<std::size_t>(n_test, members.empty() ? 0 : 1, members.size());
    p.test.insert(p.test.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_test));
    p.train.insert(p.train.end(), members.begin() + static_cast<std::ptrdiff_t>(n_test), members.end());
  }
  std::sort(p.train.begin(), p.train.end());
  std::sort(p.test.begin(), p.test.end());
  return p;
}

std::vector<std::size_t> stratified_folds(const std::vector<bool>& labels, std::size_t folds, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> fold(labels.size());
  std::size_t offset = 0;
  for (bool cls : {true, false}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) members.push_back(i);
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t j = 0; j < members.size(); ++j) fold[members[j]] = (j + offset) % folds;
    offset += members.size();
  }
  return fold;
}

namespace {

std::vector<bool> pick(const std::vector<bool>& v, const std::vector<std::size_t>& idx) {
  std::vector<bool> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(v[i]);
  return out;
}

std::vector<double> pick(const std::vector<double>& v, const std::vector<std::size_t>& idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(v[i]);
  return out;
}

bool has_both(const std::vector<bool>& y) {
  const auto pos = std::count(y.begin(), y.end(), true);
  return pos > 0 && static_cast<std::size_t>(pos) < y.size();
}

Metrics score(const std::vector<double>& s, const std::vector<bool>& y, double threshold) {
  Metrics m;
  auto c = precision_recall_f1(s, y, threshold);
  m.precision = c.precision;
  m.recall = c.recall;
  m.f1 = c.f1;
  m.roc_auc = has_both(y) ? roc_auc(s, y) : 0.5;
  return m;
}

struct Candidate {
  double C = 1.0;
  std::optional<std::size_t> k;
  double f1 = 0.0, auc = 0.0;
};

// Scores of a model fit on (train rows) and evaluated on (eval rows).
std::vector<double> fit_and_score(const SparseMatrix& train_x, const std::vector<bool>& train_y,
                                  const SparseMatrix& eval_x, const Candidate& cand, const TruncatedSvd* svd,
                                  const LogRegOptions& base) {
  LogRegOptions opts = base;
  opts.C = cand.C;
  if (!cand.k) {
    auto fit = train_logreg(train_x, train_y, opts);
    return predict_proba(fit.model, eval_x);
  }
  const auto k = static_cast<Eigen::Index>(*cand.k);
  Eigen::MatrixXd v = svd->V.leftCols(k);
  Eigen::MatrixXd tr = train_x * v;
  Eigen::MatrixXd ev = eval_x * v;
  auto fit = train_logreg(tr, train_y, opts);
  return predict_proba(fit.model, ev);
}

std::vector<std::size_t> usable_k(const std::vector<std::size_t>& grid, std::size_t min_dim) {
  std::vector<std::size_t> out;
  for (auto k : grid)
    if (k >= 1 && k <= min_dim) out.push_back(k);
  if (out.empty() && min_dim >= 1) out.push_back(std::max<std::size_t>(1, min_dim / 2));
  return out;
}

SplitOutcome run_split(const AffiliationMatrix& matrix, const std::vector<bool>& labels, ModelKind model,
                       Protocol mode, const Task1Config& cfg, std::uint64_t split_seed,
                       const std::vector<double>& baseline) {
  SplitOutcome out;
  out.seed = split_seed;
  const auto part = stratified_split(labels, cfg.test_fraction, split_seed);
  const auto y_train = pick(labels, part.train);
  const auto y_test = pick(labels, part.test);
  out.train_size = part.train.size();
  out.test_size = part.test.size();
  out.test_positives = static_cast<std::size_t>(std::count(y_test.begin(), y_test.end(), true));
  out.chosen.mode = out.auc_selected.mode = mode;
  out.chosen.random_seed = out.auc_selected.random_seed = split_seed;

  if (model == ModelKind::baseline) {
    out.metrics = score(pick(baseline, part.test), y_test, cfg.threshold);
    out.auc_selected_metrics = out.metrics;
    return out;
  }

  const SparseMatrix x_train = select_rows(matrix.entries, part.train);
  const SparseMatrix x_test = select_rows(matrix.entries, part.test);
  const bool with_svd = model == ModelKind::logreg_svd;

  // Candidate grid.
  std::vector<Candidate> cands;
  std::vector<std::size_t> ks;
  if (with_svd) {
    const auto min_dim = static_cast<std::size_t>(std::min(x_train.rows(), x_train.cols()));
    // Each CV fold trains on (folds-1)/folds of the rows.
    const auto fold_rows = x_train.rows() * static_cast<Eigen::Index>(cfg.folds - 1) / static_cast<Eigen::Index>(cfg.folds);
    ks = usable_k(cfg.k_grid, std::min<std::size_t>(min_dim, static_cast<std::size_t>(fold_rows)));
  }
  for (double c : cfg.c_grid) {
    if (with_svd) {
      for (auto k : ks) cands.push_back({c, k});
    } else {
      cands.push_back({c, std::nullopt});
    }
  }

  // Cross-validation on the train side.
  const auto fold = stratified_folds(y_train, cfg.folds, split_seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<double> f1_sum(cands.size(), 0.0), auc_sum(cands.size(), 0.0);
  for (std::size_t f = 0; f < cfg.folds; ++f) {
    std::vector<std::size_t> tr, va;
    for (std::size_t i = 0; i < fold.size(); ++i) (fold[i] == f ? va : tr).push_back(i);
    const auto ytr = pick(y_train, tr);
    const auto yva = pick(y_train, va);
    if (!has_both(ytr)) throw InvalidArgument("task1: a CV fold has a single class; too few positives");
    const SparseMatrix xtr = select_rows(x_train, tr);
    const SparseMatrix xva = select_rows(x_train, va);
    std::optional<TruncatedSvd> svd;
    if (with_svd) svd = truncated_svd(xtr, *std::max_element(ks.begin(), ks.end()), SvdOptions{1e-10, split_seed + f});
    for (std::size_t c = 0; c < cands.size(); ++c) {
      auto s = fit_and_score(xtr, ytr, xva, cands[c], svd ? &*svd : nullptr, cfg.solver);
      auto m = score(s, yva, cfg.threshold);
      f1_sum[c] += m.f1;
      auc_sum[c] += m.roc_auc;
    }
  }
  std::size_t best_f1 = 0, best_auc = 0;
  for (std::size_t c = 1; c < cands.size(); ++c) {
    if (f1_sum[c] > f1_sum[best_f1] || (f1_sum[c] == f1_sum[best_f1] && auc_sum[c] > auc_sum[best_f1])) best_f1 = c;
    if (auc_sum[c] > auc_sum[best_auc]) best_auc = c;
  }

  std::optional<TruncatedSvd> svd;
  if (with_svd) svd = truncated_svd(x_train, *std::max_element(ks.begin(), ks.end()), SvdOptions{1e-10, split_seed});
  auto evaluate = [&](std::size_t c, ClassifierConfig& chosen) {
    chosen.C = cands[c].C;
    chosen.svd_components = cands[c].k;
    auto s = fit_and_score(x_train, y_train, x_test, cands[c], svd ? &*svd : nullptr, cfg.solver);
    return score(s, y_test, cfg.threshold);
  };
  out.metrics = evaluate(best_f1, out.chosen);
  out.auc_selected_metrics = best_auc == best_f1 ? out.metrics : evaluate(best_auc, out.auc_selected);
  if (best_auc == best_f1) out.auc_selected = out.chosen;
  return out;
}

Metrics mean_of(const std::vector<SplitOutcome>& splits, bool auc_selected) {
  Metrics m;
  for (const auto& s : splits) {
    const auto& x = auc_selected ? s.auc_selected_metrics : s.metrics;
    m.precision += x.precision;
    m.recall += x.recall;
    m.f1 += x.f1;
    m.roc_auc += x.roc_auc;
  }
  const double n = splits.empty() ? 1.0 : static_cast<double>(splits.size());
  m.precision /= n;
  m.recall /= n;
  m.f1 /= n;
  m.roc_auc /= n;
  return m;
}

nlohmann::json metrics_json(const Metrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"roc_auc", m.roc_auc}};
}

nlohmann::json classifier_json(const ClassifierConfig& c) {
  nlohmann::json j{{"C", c.C}, {"mode", protocol_tag(c.mode)}, {"random_seed", c.random_seed}};
  j["svd_components"] = c.svd_components ? nlohmann::json(*c.svd_components) : nlohmann::json(nullptr);
  return j;
}

}  // namespace

EvalReport evaluate_model(const AffiliationMatrix& matrix, const std::vector<bool>& labels, ModelKind model,
                          Protocol mode, const Task1Config& cfg) {
  if (labels.size() != static_cast<std::size_t>(matrix.entries.rows())) {
    throw InvalidArgument("task1: label count does not match matrix rows");
  }
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
  const auto negatives = labels.size() - positives;
  // Each CV fold of the train side needs a positive, plus one for the test side.
  if (positives < cfg.folds + 1 || negatives < cfg.folds + 1) {
    throw InvalidArgument("task1: " + std::to_string(positives) + " positives and " + std::to_string(negatives) +
                          " negatives are too few for stratified " + std::to_string(cfg.folds) + "-fold CV");
  }
  if (cfg.folds < 2) throw InvalidArgument("task1: folds must be at least 2");

  std::vector<double> baseline;
  if (model == ModelKind::baseline) baseline = baseline_scores(matrix.entries);

  EvalReport rep;
  rep.mode = mode;
  rep.model = model;
  rep.splits.resize(cfg.splits);
  parallel_for(cfg.splits, cfg.threads, [&](std::size_t s) {
    rep.splits[s] = run_split(matrix, labels, model, mode, cfg, cfg.seed + 1000 * s, baseline);
  });
  rep.mean = mean_of(rep.splits, false);
  rep.auc_selected_mean = mean_of(rep.splits, true);
  return rep;
}

std::vector<EvalReport> run_task1(const Corpus& corpus, const Labeling& labels, const Task1Config& cfg) {
  std::vector<EvalReport> out;
  for (Protocol mode : cfg.protocols) {
    const auto matrix = build_affiliation(corpus, labels, mode);
    const auto y = row_labels(matrix, labels);
    for (ModelKind model : cfg.models) out.push_back(evaluate_model(matrix, y, model, mode, cfg));
  }
  return out;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json splits_json = nlohmann::json::array();
  for (const auto& s : splits) {
    splits_json.push_back({{"seed", s.seed},
                           {"train_size", s.train_size},
                           {"test_size", s.test_size},
                           {"test_positives", s.test_positives},
                           {"metrics", metrics_json(s.metrics)},
                           {"chosen", classifier_json(s.chosen)},
                           {"auc_selected_metrics", metrics_json(s.auc_selected_metrics)},
                           {"auc_selected", classifier_json(s.auc_selected)}});
  }
  auto j = metrics_json(mean);
  j["task"] = protocol_tag(mode);
  j["model"] = model_name(model);
  j["auc_selected_mean"] = metrics_json(auc_selected_mean);
  j["splits"] = splits_json;
  return j;
}

nlohmann::json Task1Config::to_json() const {
  nlohmann::json models_json = nlohmann::json::array(), modes_json = nlohmann::json::array();
  for (auto m : models) models_json.push_back(model_name(m));
  for (auto p : protocols) modes_json.push_back(protocol_tag(p));
  return {{"c_grid", c_grid},
          {"k_grid", k_grid},
          {"splits", splits},
          {"folds", folds},
          {"test_fraction", test_fraction},
          {"threshold", threshold},
          {"seed", seed},
          {"solver", {{"gtol", solver.gtol}, {"max_iter", solver.max_iter}, {"memory", solver.memory}}},
          {"models", models_json},
          {"protocols", modes_json}};
}

}  // namespace gigmine

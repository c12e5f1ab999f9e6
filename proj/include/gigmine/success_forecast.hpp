#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gigmine/ids.hpp"
#include "gigmine/ingest.hpp"
#include "gigmine/labeling.hpp"
#include "gigmine/logreg.hpp"
#include "gigmine/metrics.hpp"
#include "gigmine/svd.hpp"
#include "json.hpp"

namespace gigmine {

/// Forecasting sees only events strictly before an artist's change point;
/// prediction sees the full history.
enum class Protocol { forecasting, prediction };

std::string_view protocol_tag(Protocol p);

/// Artist x venue performance counts (or 0/1 indicators). Rows and columns
/// are in sorted id order.
struct AffiliationMatrix {
  std::vector<ArtistId> rows;
  std::vector<VenueId> cols;
  SparseMatrix entries;
  bool binary = false;

  /// Fraction of zero entries.
  double sparsity() const;
};

AffiliationMatrix build_affiliation(const Corpus& corpus, const Labeling& labels, Protocol mode, bool binary = false);

/// Success label for each matrix row.
std::vector<bool> row_labels(const AffiliationMatrix& m, const Labeling& labels);

/// Row sum over the largest row sum. Throws InvalidArgument for an empty or
/// all-zero matrix.
std::vector<double> baseline_scores(const SparseMatrix& m);

/// Rows projected onto the top-k left singular directions, scaled by the
/// singular values (U_k * S_k).
Eigen::MatrixXd svd_reduce(const SparseMatrix& m, std::size_t k, std::uint64_t seed = 0);

enum class ModelKind { baseline, logreg, logreg_svd };

std::string_view model_name(ModelKind k);

struct ClassifierConfig {
  double C = 1.0;
  Protocol mode = Protocol::forecasting;
  std::optional<std::size_t> svd_components;
  std::uint64_t random_seed = 0;
};

struct Metrics {
  double precision = 0.0, recall = 0.0, f1 = 0.0, roc_auc = 0.0;
};

struct SplitOutcome {
  std::uint64_t seed = 0;
  std::size_t train_size = 0, test_size = 0, test_positives = 0;
  Metrics metrics;                 // model chosen by cross-validated F1
  ClassifierConfig chosen;
  Metrics auc_selected_metrics;    // model chosen by cross-validated AUC
  ClassifierConfig auc_selected;
};

struct EvalReport {
  Protocol mode = Protocol::forecasting;
  ModelKind model = ModelKind::baseline;
  std::vector<SplitOutcome> splits;
  Metrics mean;
  Metrics auc_selected_mean;

  nlohmann::json to_json() const;
};

struct Task1Config {
  std::vector<double> c_grid{0.01, 0.1, 1.0, 10.0, 100.0};
  std::vector<std::size_t> k_grid{250, 500, 750, 1000};
  std::size_t splits = 3;
  std::size_t folds = 3;
  double test_fraction = 0.2;
  double threshold = 0.5;
  std::uint64_t seed = 42;
  std::size_t threads = 1;
  LogRegOptions solver;
  std::vector<ModelKind> models{ModelKind::baseline, ModelKind::logreg, ModelKind::logreg_svd};
  std::vector<Protocol> protocols{Protocol::forecasting, Protocol::prediction};

  nlohmann::json to_json() const;
};

/// Indices of a stratified train/test partition: each class contributes
/// round(test_fraction * class size) test rows, at least one.
struct Partition {
  std::vector<std::size_t> train, test;
};
Partition stratified_split(const std::vector<bool>& labels, double test_fraction, std::uint64_t seed);
/// Stratified k-fold assignment: fold id per row.
std::vector<std::size_t> stratified_folds(const std::vector<bool>& labels, std::size_t folds, std::uint64_t seed);

SparseMatrix select_rows(const SparseMatrix& m, const std::vector<std::size_t>& rows);

/// One (protocol, model) result over `splits` seeded stratified splits. On
/// each, C (and k for SVD) are tuned by `folds`-fold CV on the train side,
/// the model is refit on the full train side and scored on the test side.
EvalReport evaluate_model(const AffiliationMatrix& matrix, const std::vector<bool>& labels, ModelKind model,
                          Protocol mode, const Task1Config& cfg);

/// Every configured (protocol, model) pair on the corpus.
std::vector<EvalReport> run_task1(const Corpus& corpus, const Labeling& labels, const Task1Config& cfg);

}  // namespace gigmine

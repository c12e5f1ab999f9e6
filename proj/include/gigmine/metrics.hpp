#pragma once

#include <vector>

namespace gigmine {

/// Area under the ROC curve as the normalized Mann-Whitney U statistic.
/// Tied scores take their midrank, so a tie between a positive and a
/// negative counts one half. Throws InvalidArgument when either class is
/// empty, lengths differ, or a score is not finite.
double roc_auc(const std::vector<double>& scores, const std::vector<bool>& labels);

struct Classification {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Confusion-matrix ratios, predicting positive when score > threshold.
/// A ratio with a zero denominator is 0; F1 is 0 when P + R is 0.
Classification precision_recall_f1(const std::vector<double>& scores, const std::vector<bool>& labels,
                                   double threshold = 0.5);

}  // namespace gigmine

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "gigmine/svd.hpp"

namespace gigmine {

struct LogRegOptions {
  double C = 1.0;               // inverse regularization strength
  double gtol = 1e-6;           // stop when |grad| <= gtol * max(1, |grad at start|)
  std::size_t max_iter = 1000;  // L-BFGS iteration cap
  std::size_t memory = 10;
};

struct LogisticModel {
  Eigen::VectorXd weights;
  double intercept = 0.0;
};

struct LogRegFit {
  LogisticModel model;
  std::vector<double> loss_history;  // objective after each accepted step, starting at w = 0
  std::size_t iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;
};

/// Objective sum_i log(1 + exp(-s_i z_i)) + |w|^2 / (2C), z = Xw + b, with
/// s_i = +/-1 the label and the intercept b unpenalized. `params` stacks
/// [w; b]. Writes the gradient when `grad` is non-null.
double logreg_objective(const SparseMatrix& X, const std::vector<bool>& y, double C, const Eigen::VectorXd& params,
                        Eigen::VectorXd* grad);
double logreg_objective(const Eigen::MatrixXd& X, const std::vector<bool>& y, double C,
                        const Eigen::VectorXd& params, Eigen::VectorXd* grad);

/// L2-regularized logistic regression by L-BFGS with Armijo backtracking, so
/// the objective never increases between iterations. Throws InvalidArgument
/// when the labels hold a single class or C <= 0.
LogRegFit train_logreg(const SparseMatrix& X, const std::vector<bool>& y, const LogRegOptions& opts = {});
LogRegFit train_logreg(const Eigen::MatrixXd& X, const std::vector<bool>& y, const LogRegOptions& opts = {});

/// sigmoid(Xw + b); throws InvalidArgument on a feature-width mismatch.
std::vector<double> predict_proba(const LogisticModel& model, const SparseMatrix& X);
std::vector<double> predict_proba(const LogisticModel& model, const Eigen::MatrixXd& X);

double sigmoid(double z);

}  // namespace gigmine

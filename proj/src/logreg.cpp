#include "gigmine/logreg.hpp"

#include <cmath>
#include <deque>

#include "gigmine/error.hpp"

namespace gigmine {

namespace {

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

template <class Matrix>
void check_inputs(const Matrix& X, const std::vector<bool>& y) {
  if (static_cast<std::size_t>(X.rows()) != y.size()) {
    throw InvalidArgument("logistic regression: " + std::to_string(X.rows()) + " rows but " +
                          std::to_string(y.size()) + " labels");
  }
}

template <class Matrix>
double objective(const Matrix& X, const std::vector<bool>& y, double C, const Eigen::VectorXd& params,
                 Eigen::VectorXd* grad) {
  check_inputs(X, y);
  const Eigen::Index d = X.cols();
  if (params.size() != d + 1) throw InvalidArgument("logistic regression: parameter size mismatch");
  const auto w = params.head(d);
  const double b = params[d];
  Eigen::VectorXd z = X * w;
  z.array() += b;

  double loss = 0.0;
  Eigen::VectorXd residual(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double yi = y[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    // -log p(y|z) = softplus(z) - y z
    loss += softplus(z[i]) - yi * z[i];
    residual[i] = sigmoid(z[i]) - yi;
  }
  loss += w.squaredNorm() / (2.0 * C);
  if (grad) {
    grad->resize(d + 1);
    grad->head(d) = X.transpose() * residual + w / C;
    (*grad)[d] = residual.sum();
  }
  return loss;
}

template <class Matrix>
LogRegFit train(const Matrix& X, const std::vector<bool>& y, const LogRegOptions& opts) {
  check_inputs(X, y);
  if (!(opts.C > 0.0)) throw InvalidArgument("logistic regression: C must be positive");
  std::size_t pos = 0;
  for (bool v : y) pos += v ? 1 : 0;
  if (pos == 0 || pos == y.size()) throw InvalidArgument("logistic regression: labels contain a single class");

  const Eigen::Index n = X.cols() + 1;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd g;
  double f = objective(X, y, opts.C, x, &g);
  const double g0 = g.norm();
  const double stop = opts.gtol * std::max(1.0, g0);

  LogRegFit fit;
  fit.loss_history.push_back(f);
  std::deque<Eigen::VectorXd> S, Y;
  std::deque<double> rho;

  for (std::size_t it = 0; it < opts.max_iter; ++it) {
    if (g.norm() <= stop) {
      fit.converged = true;
      break;
    }
    // Two-loop recursion for the quasi-Newton direction.
    Eigen::VectorXd q = g;
    std::vector<double> a(S.size());
    for (std::size_t i = S.size(); i-- > 0;) {
      a[i] = rho[i] * S[i].dot(q);
      q -= a[i] * Y[i];
    }
    double gamma = 1.0;
    if (!S.empty()) gamma = S.back().dot(Y.back()) / Y.back().squaredNorm();
    Eigen::VectorXd r = gamma * q;
    for (std::size_t i = 0; i < S.size(); ++i) {
      const double bcoef = rho[i] * Y[i].dot(r);
      r += S[i] * (a[i] - bcoef);
    }
    Eigen::VectorXd dir = -r;
    double slope = g.dot(dir);
    if (slope >= 0.0) {  // not a descent direction: reset memory
      S.clear();
      Y.clear();
      rho.clear();
      dir = -g;
      slope = -g.squaredNorm();
    }

    double step = S.empty() ? std::min(1.0, 1.0 / std::max(g.norm(), 1e-300)) : 1.0;
    Eigen::VectorXd x_new, g_new;
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + step * dir;
      f_new = objective(X, y, opts.C, x_new, &g_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no further decrease representable

    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd yv = g_new - g;
    const double sy = s.dot(yv);
    if (sy > 1e-12 * yv.squaredNorm()) {
      S.push_back(std::move(s));
      Y.push_back(std::move(yv));
      rho.push_back(1.0 / sy);
      if (S.size() > opts.memory) {
        S.pop_front();
        Y.pop_front();
        rho.pop_front();
      }
    }
    x = std::move(x_new);
    g = std::move(g_new);
    f = f_new;
    fit.loss_history.push_back(f);
    ++fit.iterations;
  }
  if (!fit.converged && g.norm() <= stop) fit.converged = true;
  fit.grad_norm = g.norm();
  fit.model.weights = x.head(n - 1);
  fit.model.intercept = x[n - 1];
  return fit;
}

template <class Matrix>
std::vector<double> predict(const LogisticModel& model, const Matrix& X) {
  if (X.cols() != model.weights.size()) {
    throw InvalidArgument("predict_proba: model expects " + std::to_string(model.weights.size()) +
                          " features, got " + std::to_string(X.cols()));
  }
  Eigen::VectorXd z = X * model.weights;
  std::vector<double> out(static_cast<std::size_t>(z.size()));
  for (Eigen::Index i = 0; i < z.size(); ++i) out[static_cast<std::size_t>(i)] = sigmoid(z[i] + model.intercept);
  return out;
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logreg_objective(const SparseMatrix& X, const std::vector<bool>& y, double C, const Eigen::VectorXd& params,
                        Eigen::VectorXd* grad) {
  return objective(X, y, C, params, grad);
}

double logreg_objective(const Eigen::MatrixXd& X, const std::vector<bool>& y, double C,
                        const Eigen::VectorXd& params, Eigen::VectorXd* grad) {
  return objective(X, y, C, params, grad);
}

LogRegFit train_logreg(const SparseMatrix& X, const std::vector<bool>& y, const LogRegOptions& opts) {
  return train(X, y, opts);
}

LogRegFit train_logreg(const Eigen::MatrixXd& X, const std::vector<bool>& y, const LogRegOptions& opts) {
  return train(X, y, opts);
}

std::vector<double> predict_proba(const LogisticModel& model, const SparseMatrix& X) { return predict(model, X); }

std::vector<double> predict_proba(const LogisticModel& model, const Eigen::MatrixXd& X) { return predict(model, X); }

}  // namespace gigmine

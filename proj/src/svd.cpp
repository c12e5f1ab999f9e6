#include "gigmine/svd.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "gigmine/error.hpp"

namespace gigmine {

namespace {

// y = A x and y = A^T x for an operator with `rows x cols` shape.
struct LinearOp {
  Eigen::Index rows = 0, cols = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply_t;
};

class Basis {
 public:
  explicit Basis(Eigen::Index dim) : vecs_(dim, 0) {}

  Eigen::Index size() const { return used_; }
  Eigen::Index dim() const { return vecs_.rows(); }
  auto active() const { return vecs_.leftCols(used_); }

  // Classical Gram-Schmidt, applied twice.
  void orthogonalize(Eigen::VectorXd& x) const {
    if (used_ == 0) return;
    for (int pass = 0; pass < 2; ++pass) x -= active() * (active().transpose() * x);
  }

  void push(const Eigen::VectorXd& x) {
    if (used_ == vecs_.cols()) vecs_.conservativeResize(Eigen::NoChange, std::max<Eigen::Index>(8, 2 * used_));
    vecs_.col(used_++) = x;
  }

  const Eigen::MatrixXd& raw() const { return vecs_; }

 private:
  Eigen::MatrixXd vecs_;
  Eigen::Index used_ = 0;
};

// A unit vector orthogonal to `basis`, or false when the basis already
// spans the space.
bool random_orthogonal(const Basis& basis, std::mt19937_64& rng, Eigen::VectorXd& out) {
  std::normal_distribution<double> normal;
  for (int attempt = 0; attempt < 4; ++attempt) {
    out.resize(basis.dim());
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = normal(rng);
    basis.orthogonalize(out);
    const double n = out.norm();
    if (n > 1e-8) {
      out /= n;
      return true;
    }
  }
  return false;
}

TruncatedSvd lanczos_svd(const LinearOp& op, std::size_t k, const SvdOptions& opts) {
  const Eigen::Index max_steps = op.cols;  // caller guarantees cols <= rows
  std::mt19937_64 rng(opts.seed);
  Basis U(op.rows), V(op.cols);
  std::vector<double> alpha, beta;

  Eigen::VectorXd v;
  random_orthogonal(V, rng, v);
  V.push(v);
  Eigen::VectorXd u_prev;
  double beta_prev = 0.0;
  const double breakdown = 1e-13;

  Eigen::Index target = std::min<Eigen::Index>(max_steps, std::max<Eigen::Index>(2 * static_cast<Eigen::Index>(k),
                                                                                   static_cast<Eigen::Index>(k) + 16));
  TruncatedSvd out;
  while (true) {
    while (static_cast<Eigen::Index>(alpha.size()) < target) {
      const Eigen::Index j = static_cast<Eigen::Index>(alpha.size());
      Eigen::VectorXd u = op.apply(V.raw().col(j));
      if (j > 0) u -= beta_prev * u_prev;
      U.orthogonalize(u);
      double a = u.norm();
      if (a < breakdown) {
        a = 0.0;
        if (!random_orthogonal(U, rng, u)) break;
      } else {
        u /= a;
      }
      U.push(u);
      alpha.push_back(a);

      double b = 0.0;
      if (j + 1 < max_steps) {
        Eigen::VectorXd vn = op.apply_t(u) - a * V.raw().col(j);
        V.orthogonalize(vn);
        b = vn.norm();
        if (b < breakdown) {
          b = 0.0;
          if (!random_orthogonal(V, rng, vn)) break;
        } else {
          vn /= b;
        }
        V.push(vn);
      }
      beta.push_back(b);
      u_prev = u;
      beta_prev = b;
    }

    const Eigen::Index m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      B(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) B(i, i + 1) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::BDCSVD<Eigen::MatrixXd> small(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = small.singularValues();
    const double residual_scale = beta.empty() ? 0.0 : beta.back();
    const double sigma_max = s.size() ? s[0] : 0.0;
    bool ok = true;
    const Eigen::Index kk = std::min<Eigen::Index>(static_cast<Eigen::Index>(k), m);
    for (Eigen::Index i = 0; i < kk; ++i) {
      if (residual_scale * std::abs(small.matrixU()(m - 1, i)) > opts.tol * std::max(sigma_max, 1e-300)) ok = false;
    }
    const bool exhausted = m >= max_steps || m < target;
    if ((ok && kk == static_cast<Eigen::Index>(k)) || exhausted) {
      out.singular_values = s.head(kk);
      out.U = U.active().leftCols(m) * small.matrixU().leftCols(kk);
      out.V = V.active().leftCols(m) * small.matrixV().leftCols(kk);
      out.lanczos_steps = static_cast<std::size_t>(m);
      out.converged = ok || exhausted;
      return out;
    }
    target = std::min<Eigen::Index>(max_steps, target + std::max<Eigen::Index>(target / 2, 8));
  }
}

template <class Matrix>
TruncatedSvd svd_impl(const Matrix& A, std::size_t k, const SvdOptions& opts) {
  const auto min_dim = static_cast<std::size_t>(std::min(A.rows(), A.cols()));
  if (k < 1 || k > min_dim) {
    throw InvalidArgument("truncated_svd: k=" + std::to_string(k) + " outside [1, " + std::to_string(min_dim) + "]");
  }
  LinearOp op;
  const bool transposed = A.rows() < A.cols();
  if (!transposed) {
    op.rows = A.rows();
    op.cols = A.cols();
    op.apply = [&A](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x; };
    op.apply_t = [&A](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A.transpose() * x; };
  } else {
    op.rows = A.cols();
    op.cols = A.rows();
    op.apply = [&A](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A.transpose() * x; };
    op.apply_t = [&A](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x; };
  }
  TruncatedSvd out = lanczos_svd(op, k, opts);
  if (transposed) std::swap(out.U, out.V);
  return out;
}

}  // namespace

TruncatedSvd truncated_svd(const SparseMatrix& A, std::size_t k, const SvdOptions& opts) {
  return svd_impl(A, k, opts);
}

TruncatedSvd truncated_svd(const Eigen::MatrixXd& A, std::size_t k, const SvdOptions& opts) {
  return svd_impl(A, k, opts);
}

}  // namespace gigmine

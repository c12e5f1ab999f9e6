#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace gigmine {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct SvdOptions {
  double tol = 1e-10;       // residual bound relative to the largest singular value
  std::uint64_t seed = 0;   // start vector and breakdown restarts
};

/// Leading singular triplets A ~= U diag(s) V^T, largest first.
struct TruncatedSvd {
  Eigen::MatrixXd U;
  Eigen::VectorXd singular_values;
  Eigen::MatrixXd V;
  std::size_t lanczos_steps = 0;
  bool converged = false;

  std::size_t rank() const noexcept { return static_cast<std::size_t>(singular_values.size()); }
  /// Rows of `X` projected onto the right singular directions: X V.
  Eigen::MatrixXd transform(const SparseMatrix& X) const { return X * V; }
  Eigen::MatrixXd reconstruct() const { return U * singular_values.asDiagonal() * V.transpose(); }
};

/// Golub-Kahan-Lanczos bidiagonalization with full reorthogonalization.
/// The Krylov basis grows until the top-k Ritz residuals fall under
/// `tol * sigma_max` or the basis spans the smaller dimension, in which case
/// the decomposition is exact. Throws InvalidArgument unless
/// 1 <= k <= min(rows, cols).
TruncatedSvd truncated_svd(const SparseMatrix& A, std::size_t k, const SvdOptions& opts = {});
TruncatedSvd truncated_svd(const Eigen::MatrixXd& A, std::size_t k, const SvdOptions& opts = {});

}  // namespace gigmine

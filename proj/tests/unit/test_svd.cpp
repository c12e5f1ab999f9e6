#include "doctest.h"

#include <random>

#include "gigmine/error.hpp"
#include "gigmine/svd.hpp"

using namespace gigmine;

namespace {

Eigen::MatrixXd gaussian(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> n;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = n(rng);
  return m;
}

double rel_err(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_CASE("rank-r matrix is recovered at k = r") {
  std::mt19937_64 rng(1);
  for (int r : {1, 3, 8}) {
    const Eigen::MatrixXd A = gaussian(rng, 60, r) * gaussian(rng, r, 45);
    const auto svd = truncated_svd(A, static_cast<std::size_t>(r));
    CHECK(svd.rank() == static_cast<std::size_t>(r));
    CHECK(rel_err(svd.reconstruct(), A) < 1e-8);
    const SparseMatrix S = A.sparseView();
    CHECK(rel_err(truncated_svd(S, static_cast<std::size_t>(r)).reconstruct(), A) < 1e-8);
  }
}

TEST_CASE("full-rank decomposition is exact") {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd A = gaussian(rng, 12, 7);
  const auto svd = truncated_svd(A, 7);
  CHECK(rel_err(svd.reconstruct(), A) < 1e-10);
  const Eigen::JacobiSVD<Eigen::MatrixXd> ref(A);
  for (Eigen::Index i = 0; i < 7; ++i)
    CHECK(svd.singular_values(i) == doctest::Approx(ref.singularValues()(i)).epsilon(1e-10));
  CHECK((svd.U.transpose() * svd.U - Eigen::MatrixXd::Identity(7, 7)).norm() < 1e-10);
  CHECK((svd.V.transpose() * svd.V - Eigen::MatrixXd::Identity(7, 7)).norm() < 1e-10);
}

TEST_CASE("diagonal matrix singular values are sorted absolute entries") {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(5, 5);
  const double diag[] = {2.0, -7.0, 0.5, 3.0, -1.0};
  for (int i = 0; i < 5; ++i) D(i, i) = diag[i];
  const auto svd = truncated_svd(D, 5);
  const double expect[] = {7.0, 3.0, 2.0, 1.0, 0.5};
  for (int i = 0; i < 5; ++i) CHECK(svd.singular_values(i) == doctest::Approx(expect[i]).epsilon(1e-12));
  const auto top2 = truncated_svd(D, 2);
  CHECK(top2.singular_values(0) == doctest::Approx(7.0));
  CHECK(top2.singular_values(1) == doctest::Approx(3.0));
}

TEST_CASE("top-k singular values match a dense reference on a sparse matrix") {
  std::mt19937_64 rng(8);
  std::bernoulli_distribution coin(0.05);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(200, 120);
  for (Eigen::Index i = 0; i < 200; ++i)
    for (Eigen::Index j = 0; j < 120; ++j)
      if (coin(rng)) A(i, j) = 1 + static_cast<double>(rng() % 4);
  const SparseMatrix S = A.sparseView();
  const auto svd = truncated_svd(S, 10, SvdOptions{1e-10, 5});
  const Eigen::JacobiSVD<Eigen::MatrixXd> ref(A);
  for (Eigen::Index i = 0; i < 10; ++i)
    CHECK(svd.singular_values(i) == doctest::Approx(ref.singularValues()(i)).epsilon(1e-8));
  // Same seed, same factors.
  const auto again = truncated_svd(S, 10, SvdOptions{1e-10, 5});
  CHECK((again.U - svd.U).norm() == 0.0);
}

TEST_CASE("k out of range is rejected") {
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(3, 4);
  CHECK_THROWS_AS(truncated_svd(A, 0), InvalidArgument);
  CHECK_THROWS_AS(truncated_svd(A, 4), InvalidArgument);
}

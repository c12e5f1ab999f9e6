#include "doctest.h"

#include <cmath>
#include <random>

#include "gigmine/error.hpp"
#include "gigmine/metrics.hpp"
#include "support.hpp"

using namespace gigmine;

namespace {

struct Sample {
  std::vector<double> s;
  std::vector<bool> y;
};

// Random scores with deliberate ties (rounded to a coarse grid half the time).
Sample random_sample(std::mt19937_64& rng, std::size_t n) {
  Sample out;
  std::uniform_real_distribution<double> u(-3, 3);
  const bool coarse = rng() % 2;
  for (std::size_t i = 0; i < n; ++i) {
    double v = u(rng);
    if (coarse) v = std::round(v * 2) / 2;
    out.s.push_back(v);
    out.y.push_back(rng() % 3 == 0);
  }
  out.y[0] = true;
  out.y[1] = false;
  return out;
}

}  // namespace

TEST_CASE("AUC trivial cases") {
  CHECK(roc_auc({0.1, 0.2, 0.8, 0.9}, {false, false, true, true}) == 1.0);
  CHECK(roc_auc({0.9, 0.8, 0.2, 0.1}, {false, false, true, true}) == 0.0);
  CHECK(roc_auc({0.3, 0.3, 0.3, 0.3}, {false, true, true, false}) == 0.5);
}

TEST_CASE("AUC rejects degenerate input") {
  CHECK_THROWS_AS(roc_auc({0.1, 0.2}, {true, true}), InvalidArgument);
  CHECK_THROWS_AS(roc_auc({0.1, 0.2}, {false, false}), InvalidArgument);
  CHECK_THROWS_AS(roc_auc({0.1}, {true, false}), InvalidArgument);
  CHECK_THROWS_AS(roc_auc({NAN, 0.2}, {true, false}), InvalidArgument);
}

TEST_CASE("AUC matches the pairwise oracle and its symmetries") {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 200; ++round) {
    const auto [s, y] = random_sample(rng, 2 + rng() % 999);
    const double auc = roc_auc(s, y);
    CHECK(auc == doctest::Approx(testing::oracle_auc(s, y)).epsilon(1e-12));

    std::vector<double> ex, aff, neg;
    for (double v : s) {
      ex.push_back(std::exp(v));
      aff.push_back(3.0 * v + 7.0);
      neg.push_back(-v);
    }
    CHECK(roc_auc(ex, y) == doctest::Approx(auc).epsilon(1e-12));
    CHECK(roc_auc(aff, y) == doctest::Approx(auc).epsilon(1e-12));

    std::vector<bool> flipped(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) flipped[i] = !y[i];
    CHECK(roc_auc(neg, flipped) == doctest::Approx(auc).epsilon(1e-12));
    // Ties count one half on both sides, so the complement holds with ties too.
    CHECK(roc_auc(s, flipped) == doctest::Approx(1.0 - auc).epsilon(1e-12));
  }
}

TEST_CASE("precision, recall and F1") {
  CHECK(precision_recall_f1({0.9, 0.1}, {true, false}).f1 == 1.0);
  // Score equal to the threshold predicts negative.
  const auto at = precision_recall_f1({0.5, 0.1}, {true, false});
  CHECK(at.precision == 0.0);
  CHECK(at.recall == 0.0);
  CHECK(at.f1 == 0.0);
  const auto none = precision_recall_f1({0.1, 0.2}, {false, false});
  CHECK(none.f1 == 0.0);
}

TEST_CASE("F1 is the harmonic mean of the reported table ratios") {
  // P = 0.18, R = 0.35 give F1 0.238.
  // 200 positives, 70 found (R 0.35); 70 of 389 predicted (P ~ 0.18).
  std::vector<double> s;
  std::vector<bool> y;
  for (int i = 0; i < 70; ++i) s.push_back(0.9), y.push_back(true);
  for (int i = 0; i < 130; ++i) s.push_back(0.1), y.push_back(true);
  for (int i = 0; i < 319; ++i) s.push_back(0.9), y.push_back(false);
  for (int i = 0; i < 500; ++i) s.push_back(0.1), y.push_back(false);
  const auto c = precision_recall_f1(s, y);
  CHECK(c.recall == doctest::Approx(0.35));
  CHECK(c.precision == doctest::Approx(0.18).epsilon(0.001));
  CHECK(c.f1 == doctest::Approx(0.238).epsilon(0.002));
}

TEST_CASE("confusion ratios match direct counting") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int round = 0; round < 300; ++round) {
    const std::size_t n = 1 + rng() % 200;
    std::vector<double> s(n);
    std::vector<bool> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = rng() % 10 == 0 ? 0.5 : u(rng);
      y[i] = rng() % 2;
    }
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool pred = s[i] > 0.5;
      tp += pred && y[i];
      fp += pred && !y[i];
      fn += !pred && y[i];
    }
    const double p = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double r = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    const auto c = precision_recall_f1(s, y);
    CHECK(c.precision == doctest::Approx(p).epsilon(1e-12));
    CHECK(c.recall == doctest::Approx(r).epsilon(1e-12));
    CHECK(c.f1 <= std::max(c.precision, c.recall) + 1e-12);
    if (p > 0 && r > 0) CHECK(c.f1 == doctest::Approx(2 * p * r / (p + r)).epsilon(1e-12));
    else CHECK(c.f1 == 0.0);
  }
}

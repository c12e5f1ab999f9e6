// Shared generators and brute-force oracles for the unit and acceptance
// tests. Oracles deliberately avoid the library's graph internals: they work
// on plain adjacency sets keyed by ("a"|"v", index).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gigmine/graph.hpp"

namespace testing {

using Pairs = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

inline Pairs random_pairs(std::mt19937_64& rng, std::size_t n_a, std::size_t n_v, double density) {
  std::bernoulli_distribution coin(density);
  Pairs out;
  for (std::uint32_t a = 0; a < n_a; ++a)
    for (std::uint32_t v = 0; v < n_v; ++v)
      if (coin(rng)) out.emplace_back(a, v);
  return out;
}

// Node = (side, index) with side 0 for artists, 1 for venues.
using Node = std::pair<int, std::uint32_t>;

struct Adjacency {
  std::map<Node, std::set<Node>> nb;

  Adjacency(std::size_t n_a, std::size_t n_v, const Pairs& pairs) {
    for (std::uint32_t a = 0; a < n_a; ++a) nb[{0, a}];
    for (std::uint32_t v = 0; v < n_v; ++v) nb[{1, v}];
    for (auto [a, v] : pairs) {
      nb[{0, a}].insert({1, v});
      nb[{1, v}].insert({0, a});
    }
  }

  std::set<Node> hat(Node u) const {
    std::set<Node> out;
    for (const auto& x : nb.at(u))
      for (const auto& y : nb.at(x)) out.insert(y);
    return out;
  }
};

inline std::set<Node> set_and(const std::set<Node>& x, const std::set<Node>& y) {
  std::set<Node> out;
  for (const auto& n : x)
    if (y.count(n)) out.insert(n);
  return out;
}

inline std::set<Node> set_or(std::set<Node> x, const std::set<Node>& y) {
  x.insert(y.begin(), y.end());
  return x;
}

inline std::size_t oracle_cn(const Adjacency& g, Node u, Node w) {
  return set_or(set_and(g.hat(u), g.nb.at(w)), set_and(g.hat(w), g.nb.at(u))).size();
}

inline double oracle_jaccard(const Adjacency& g, Node u, Node w) {
  const auto all = set_or(set_or(g.hat(u), g.nb.at(w)), set_or(g.hat(w), g.nb.at(u)));
  if (all.empty()) return 0.0;
  return static_cast<double>(oracle_cn(g, u, w)) / static_cast<double>(all.size());
}

inline std::size_t oracle_pa(const Adjacency& g, Node u, Node w) { return g.nb.at(u).size() * g.nb.at(w).size(); }

// Fraction of (positive, negative) pairs ordered correctly, ties counting 1/2.
inline double oracle_auc(const std::vector<double>& s, const std::vector<bool>& y) {
  double good = 0.0;
  std::size_t p = 0, n = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    ++p;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j]) continue;
      good += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  }
  for (bool b : y) n += !b;
  return good / (static_cast<double>(p) * static_cast<double>(n));
}

// BiRank fixed point by a dense linear solve:
//   (I - alpha beta S S^T) u = alpha (1 - beta) S p0 + (1 - alpha) u0
//   p = beta S^T u + (1 - beta) p0
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> oracle_birank(const Eigen::MatrixXd& W, const Eigen::VectorXd& u0,
                                                                 const Eigen::VectorXd& p0, double alpha, double beta) {
  const Eigen::Index A = W.rows(), V = W.cols();
  Eigen::VectorXd du = W.rowwise().sum(), dp = W.colwise().sum().transpose();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(A, V);
  for (Eigen::Index i = 0; i < A; ++i)
    for (Eigen::Index j = 0; j < V; ++j)
      if (W(i, j) > 0) S(i, j) = W(i, j) / std::sqrt(du(i) * dp(j));
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(A, A) - alpha * beta * S * S.transpose();
  Eigen::VectorXd rhs = alpha * (1 - beta) * S * p0 + (1 - alpha) * u0;
  Eigen::VectorXd u = M.fullPivLu().solve(rhs);
  Eigen::VectorXd p = beta * S.transpose() * u + (1 - beta) * p0;
  return {u, p};
}

}  // namespace testing

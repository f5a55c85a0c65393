#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "hubofs/baselines.hpp"
#include "hubofs/errors.hpp"
#include "hubofs/rng.hpp"

using namespace hubofs;

namespace {

Dataset make(const Matrix& x, std::vector<std::uint8_t> y) {
  Dataset d;
  d.features = x;
  d.target = std::move(y);
  for (std::size_t c = 0; c < x.cols(); ++c) d.feature_names.push_back("f" + std::to_string(c));
  return d;
}

double pairwise_auc(const std::vector<std::uint8_t>& y, const std::vector<double>& s) {
  double wins = 0;
  double pairs = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[i] != 1 || y[j] != 0) continue;
      pairs += 1;
      if (s[i] > s[j]) wins += 1;
      else if (s[i] == s[j]) wins += 0.5;
    }
  return wins / pairs;
}

}  // namespace

TEST_CASE("select_k_best is nested in k") {
  const std::vector<double> rel{0.3, 0.9, 0.1, 0.9, 0.5};
  CHECK(select_k_best(rel, 2) == std::vector<std::size_t>{1, 3});
  for (std::size_t k = 1; k < rel.size(); ++k) {
    const auto a = select_k_best(rel, k);
    const auto b = select_k_best(rel, k + 1);
    CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
  }
}

TEST_CASE("PCA on rank-1 data") {
  Matrix x(50, 3);
  for (std::size_t r = 0; r < 50; ++r) {
    const double t = static_cast<double>(r) - 20.0;
    x(r, 0) = t;
    x(r, 1) = -2.0 * t;
    x(r, 2) = 0.5 * t;
  }
  const auto m = pca_fit(make(x, std::vector<std::uint8_t>(50, 0)));
  CHECK(m.kept_components == 1);
  CHECK(std::abs(m.explained_variance_ratio[0] - 1.0) < 1e-9);
  // sign convention: largest-magnitude entry positive
  CHECK(m.components(0, 1) > 0);
}

TEST_CASE("PCA on isotropic 2-D data keeps both components") {
  Matrix x(4, 2);
  x(0, 0) = 1;
  x(1, 0) = -1;
  x(2, 1) = 1;
  x(3, 1) = -1;
  const auto m = pca_fit(make(x, {0, 1, 0, 1}));
  CHECK(m.kept_components == 2);
}

TEST_CASE("PCA properties on random data") {
  Xoshiro256 rng(17);
  Matrix x(120, 5);
  for (std::size_t r = 0; r < 120; ++r)
    for (std::size_t c = 0; c < 5; ++c) x(r, c) = rng.uniform() * static_cast<double>(c + 1) + (c == 3 ? x(r, 0) : 0.0);
  const auto d = make(x, std::vector<std::uint8_t>(120, 1));
  const auto m = pca_fit(d, 1.0);
  CHECK(m.kept_components == 5);
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = 0; b < 5; ++b) {
      double dot = 0;
      for (std::size_t c = 0; c < 5; ++c) dot += m.components(a, c) * m.components(b, c);
      CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-10);
    }
  for (std::size_t k = 1; k < 5; ++k) CHECK(m.eigenvalues[k] <= m.eigenvalues[k - 1]);
  const auto t = pca_transform(m, d);
  CHECK(t.feature_names.front() == "PC1");
  const auto back = pca_inverse_transform(m, t.features);
  for (std::size_t i = 0; i < x.data().size(); ++i) CHECK(std::abs(back.data()[i] - x.data()[i]) < 1e-8);

  Matrix mean_row(1, 5);
  for (std::size_t c = 0; c < 5; ++c) mean_row(0, c) = m.mean[c];
  const auto z = pca_transform(m, make(mean_row, {1}));
  for (double v : z.features.data()) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("logistic gradient matches finite differences") {
  Xoshiro256 rng(3);
  Matrix x(30, 3);
  std::vector<std::uint8_t> y(30);
  for (std::size_t r = 0; r < 30; ++r) {
    for (std::size_t c = 0; c < 3; ++c) x(r, c) = rng.uniform() * 2 - 1;
    y[r] = rng.uniform() < 0.5 ? 1 : 0;
  }
  LogisticModel m;
  m.weights = {0.3, -0.7, 1.1};
  m.bias = 0.2;
  const auto g = logistic_gradient(m, x, y, 0.05);
  REQUIRE(g.size() == 4);
  const double h = 1e-6;
  for (std::size_t k = 0; k < 4; ++k) {
    auto plus = m, minus = m;
    if (k < 3) {
      plus.weights[k] += h;
      minus.weights[k] -= h;
    } else {
      plus.bias += h;
      minus.bias -= h;
    }
    const double fd = (logistic_loss(plus, x, y, 0.05) - logistic_loss(minus, x, y, 0.05)) / (2 * h);
    CHECK(std::abs(fd - g[k]) < 1e-7);
  }
}

TEST_CASE("logistic fit") {
  Matrix x(40, 1);
  std::vector<std::uint8_t> y(40);
  for (std::size_t r = 0; r < 40; ++r) {
    x(r, 0) = static_cast<double>(r) - 19.5;
    y[r] = r >= 20 ? 1 : 0;
  }
  const auto d = make(x, y);
  const auto zero = logistic_fit(d, {1e-3, 0, 0.1});
  for (double p : zero.predict_proba(x)) CHECK(p == 0.5);
  const auto fit = logistic_fit(d);
  CHECK(evaluate(fit, d).accuracy == 1.0);

  double prev = logistic_loss(LogisticModel{{0.0}, 0.0}, x, y, 1e-3);
  for (std::size_t it : {10, 50, 200, 500}) {
    const double loss = logistic_loss(logistic_fit(d, {1e-3, it, 0.01}), x, y, 1e-3);
    CHECK(loss <= prev + 1e-12);
    prev = loss;
  }
}

TEST_CASE("AUC examples") {
  const std::vector<std::uint8_t> y{0, 0, 1, 1};
  CHECK(roc_auc(y, std::vector<double>{0.1, 0.4, 0.35, 0.8}) == 0.75);
  CHECK(roc_auc(y, std::vector<double>{0.5, 0.5, 0.5, 0.5}) == 0.5);
  CHECK(roc_auc(std::vector<std::uint8_t>{1, 1}, std::vector<double>{0.1, 0.2}) == 0.5);
  const auto rep = evaluate_scores(y, std::vector<double>{0.1, 0.2, 0.3, 0.4});
  CHECK(rep.f1 == 0.0);
  CHECK(rep.accuracy == 0.5);
  CHECK(rep.auc == 1.0);
}

TEST_CASE("AUC equals pairwise enumeration and is rank-invariant") {
  Xoshiro256 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 60);
    std::vector<std::uint8_t> y(n);
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng.uniform() < 0.4 ? 1 : 0;
      s[i] = std::floor(rng.uniform() * 10) / 10.0;
    }
    y[0] = 0;
    y[1] = 1;
    const double a = roc_auc(y, s);
    CHECK(a == pairwise_auc(y, s));
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = std::exp(3 * s[i]) - 4;
    CHECK(roc_auc(y, t) == a);
  }
}

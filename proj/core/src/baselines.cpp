#include "hubofs/baselines.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "hubofs/errors.hpp"
#include "hubofs/hubo.hpp"

namespace hubofs {

std::vector<std::size_t> select_k_best(std::span<const double> relevance, std::size_t k) {
  return preselect_top_k(relevance, k);
}

PcaModel pca_fit(const Dataset& d, double var_threshold) {
  if (!(var_threshold > 0.0 && var_threshold <= 1.0)) throw InvalidArgument("var_threshold must lie in (0,1]");
  const std::size_t rows = d.num_samples();
  const std::size_t cols = d.num_features();
  if (rows < 2) throw InvalidArgument("PCA needs at least 2 samples");

  Eigen::MatrixXd x(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) x(r, c) = d.features(r, c);
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(rows - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error("PCA eigendecomposition failed");
  const Eigen::VectorXd evals = solver.eigenvalues();
  const Eigen::MatrixXd evecs = solver.eigenvectors();

  std::vector<double> clipped(cols);
  double total = 0.0;
  for (std::size_t c = 0; c < cols; ++c) {
    clipped[c] = std::max(0.0, evals(static_cast<Eigen::Index>(c)));
    total += clipped[c];
  }
  if (!(total > 0.0)) throw DataError("PCA on data with zero total variance");

  PcaModel m;
  m.mean.assign(mean.data(), mean.data() + cols);
  m.components = Matrix(cols, cols);
  // Eigen returns ascending eigenvalues.
  for (std::size_t r = 0; r < cols; ++r) {
    const auto src = static_cast<Eigen::Index>(cols - 1 - r);
    Eigen::VectorXd v = evecs.col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    for (std::size_t c = 0; c < cols; ++c) m.components(r, c) = v(static_cast<Eigen::Index>(c));
    m.eigenvalues.push_back(clipped[cols - 1 - r]);
    m.explained_variance_ratio.push_back(clipped[cols - 1 - r] / total);
  }
  double cumulative = 0.0;
  m.kept_components = cols;
  for (std::size_t r = 0; r < cols; ++r) {
    cumulative += m.explained_variance_ratio[r];
    if (cumulative >= var_threshold - 1e-12) {
      m.kept_components = r + 1;
      break;
    }
  }
  return m;
}

Dataset pca_transform(const PcaModel& m, const Dataset& d) {
  const std::size_t cols = m.mean.size();
  if (d.num_features() != cols) throw InvalidArgument("PCA dimension mismatch");
  Dataset out;
  out.target = d.target;
  out.dropped_rows = d.dropped_rows;
  out.class_labels = d.class_labels;
  out.features = Matrix(d.num_samples(), m.kept_components);
  for (std::size_t r = 0; r < d.num_samples(); ++r)
    for (std::size_t k = 0; k < m.kept_components; ++k) {
      double acc = 0.0;
      for (std::size_t c = 0; c < cols; ++c) acc += (d.features(r, c) - m.mean[c]) * m.components(k, c);
      out.features(r, k) = acc;
    }
  for (std::size_t k = 0; k < m.kept_components; ++k) out.feature_names.push_back("PC" + std::to_string(k + 1));
  return out;
}

Matrix pca_inverse_transform(const PcaModel& m, const Matrix& scores) {
  const std::size_t cols = m.mean.size();
  if (scores.cols() > cols) throw InvalidArgument("too many score columns");
  Matrix out(scores.rows(), cols);
  for (std::size_t r = 0; r < scores.rows(); ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      double acc = m.mean[c];
      for (std::size_t k = 0; k < scores.cols(); ++k) acc += scores(r, k) * m.components(k, c);
      out(r, c) = acc;
    }
  return out;
}

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double linear(const LogisticModel& m, std::span<const double> row) {
  double z = m.bias;
  for (std::size_t c = 0; c < row.size(); ++c) z += m.weights[c] * row[c];
  return z;
}

void check_xy(const Matrix& x, std::span<const std::uint8_t> y, const LogisticModel& m) {
  if (x.rows() != y.size()) throw InvalidArgument("row/label count mismatch");
  if (m.weights.size() != x.cols()) throw InvalidArgument("weight/feature count mismatch");
  if (x.rows() == 0) throw InvalidArgument("empty design matrix");
}

}  // namespace

double LogisticModel::probability(std::span<const double> row) const {
  if (row.size() != weights.size()) throw InvalidArgument("weight/feature count mismatch");
  return sigmoid(linear(*this, row));
}

std::vector<double> LogisticModel::predict_proba(const Matrix& x) const {
  std::vector<double> p(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) p[r] = probability(x.row(r));
  return p;
}

double logistic_loss(const LogisticModel& m, const Matrix& x, std::span<const std::uint8_t> y, double l2) {
  check_xy(x, y, m);
  double loss = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double z = linear(m, x.row(r));
    // log(1 + e^z) - y z, written to avoid overflow.
    const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    loss += softplus - (y[r] ? z : 0.0);
  }
  loss /= static_cast<double>(x.rows());
  double wsq = 0.0;
  for (double w : m.weights) wsq += w * w;
  return loss + 0.5 * l2 * wsq;
}

std::vector<double> logistic_gradient(const LogisticModel& m, const Matrix& x, std::span<const std::uint8_t> y,
                                      double l2) {
  check_xy(x, y, m);
  const std::size_t cols = x.cols();
  std::vector<double> g(cols + 1, 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto row = x.row(r);
    const double err = sigmoid(linear(m, row)) - static_cast<double>(y[r]);
    for (std::size_t c = 0; c < cols; ++c) g[c] += err * row[c];
    g[cols] += err;
  }
  const double inv = 1.0 / static_cast<double>(x.rows());
  for (std::size_t c = 0; c < cols; ++c) g[c] = g[c] * inv + l2 * m.weights[c];
  g[cols] *= inv;
  return g;
}

LogisticModel logistic_fit(const Dataset& train, const LogisticParams& params) {
  if (!(params.l2 >= 0.0)) throw InvalidArgument("l2 must be >= 0");
  if (!(params.learning_rate > 0.0)) throw InvalidArgument("learning_rate must be > 0");
  const bool has0 = std::find(train.target.begin(), train.target.end(), 0) != train.target.end();
  const bool has1 = std::find(train.target.begin(), train.target.end(), 1) != train.target.end();
  if (!has0 || !has1) throw DataError("logistic_fit needs both classes in the training data");

  LogisticModel m;
  m.weights.assign(train.num_features(), 0.0);
  for (std::size_t it = 0; it < params.iterations; ++it) {
    const auto g = logistic_gradient(m, train.features, train.target, params.l2);
    for (std::size_t c = 0; c < m.weights.size(); ++c) m.weights[c] -= params.learning_rate * g[c];
    m.bias -= params.learning_rate * g.back();
  }
  return m;
}

double roc_auc(std::span<const std::uint8_t> y, std::span<const double> scores) {
  if (y.size() != scores.size()) throw InvalidArgument("label/score count mismatch");
  const std::size_t n = y.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Average 1-based ranks over tie groups; all values are multiples of 1/2.
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start;
    while (end < n && scores[order[end]] == scores[order[start]]) ++end;
    const double avg_rank = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t p = start; p < end; ++p)
      if (y[order[p]]) {
        positive_rank_sum += avg_rank;
        ++positives;
      }
    start = end;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) return 0.5;
  const double np = static_cast<double>(positives);
  const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(negatives));
}

EvalReport evaluate_scores(std::span<const std::uint8_t> y, std::span<const double> probabilities) {
  if (y.empty()) throw InvalidArgument("evaluation on an empty test set");
  if (y.size() != probabilities.size()) throw InvalidArgument("label/score count mismatch");
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t correct = 0;
  for (std::size_t r = 0; r < y.size(); ++r) {
    const bool pred = probabilities[r] > 0.5;
    const bool truth = y[r] != 0;
    if (pred == truth) ++correct;
    if (pred && truth) ++tp;
    if (pred && !truth) ++fp;
    if (!pred && truth) ++fn;
  }
  EvalReport rep;
  rep.accuracy = static_cast<double>(correct) / static_cast<double>(y.size());
  const std::size_t denom = 2 * tp + fp + fn;
  rep.f1 = denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
  rep.auc = roc_auc(y, probabilities);
  return rep;
}

EvalReport evaluate(const LogisticModel& model, const Dataset& test) {
  auto rep = evaluate_scores(test.target, model.predict_proba(test.features));
  rep.n_features_or_components = test.num_features();
  return rep;
}

}  // namespace hubofs

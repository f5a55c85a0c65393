#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hubofs/dataset.hpp"

namespace hubofs {

/// Same rule as preselect_top_k; kept as a named baseline.
std::vector<std::size_t> select_k_best(std::span<const double> relevance, std::size_t k);

struct PcaModel {
  std::vector<double> mean;
  /// Row r is the r-th principal direction (unit norm, largest-magnitude
  /// entry positive), ordered by decreasing eigenvalue.
  Matrix components;
  std::vector<double> eigenvalues;
  std::vector<double> explained_variance_ratio;
  std::size_t kept_components = 0;
};

/// Eigendecomposition of the sample covariance; keeps the smallest m whose
/// cumulative explained-variance ratio reaches `var_threshold`.
PcaModel pca_fit(const Dataset& d, double var_threshold = 0.95);

/// Centred projection onto the kept components; features "PC1".."PCm".
Dataset pca_transform(const PcaModel& m, const Dataset& d);

/// Maps component scores back to the original feature space.
Matrix pca_inverse_transform(const PcaModel& m, const Matrix& scores);

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;

  double probability(std::span<const double> row) const;
  std::vector<double> predict_proba(const Matrix& x) const;
};

struct LogisticParams {
  double l2 = 1e-3;
  std::size_t iterations = 500;
  double learning_rate = 0.1;
};

/// Mean log-loss plus (l2/2)|w|^2 (bias unpenalised).
double logistic_loss(const LogisticModel& m, const Matrix& x, std::span<const std::uint8_t> y, double l2);

/// Gradient of logistic_loss; the last entry is d/d bias.
std::vector<double> logistic_gradient(const LogisticModel& m, const Matrix& x, std::span<const std::uint8_t> y,
                                      double l2);

/// Full-batch gradient descent from zero initialisation.
LogisticModel logistic_fit(const Dataset& train, const LogisticParams& params = {});

struct EvalReport {
  std::string method_name;
  std::size_t n_features_or_components = 0;
  double accuracy = 0.0;
  double f1 = 0.0;
  double auc = 0.0;
};

/// Mann-Whitney AUC with tied scores counted 1/2; 0.5 if a class is absent.
double roc_auc(std::span<const std::uint8_t> y, std::span<const double> scores);

/// Accuracy at cutoff p > 0.5, F1 of class 1 (0/0 := 0), and AUC.
EvalReport evaluate_scores(std::span<const std::uint8_t> y, std::span<const double> probabilities);

EvalReport evaluate(const LogisticModel& model, const Dataset& test);

}  // namespace hubofs

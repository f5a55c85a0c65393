#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hubofs {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<double> column(std::size_t c) const;

  /// Copy of the listed columns, in the listed order.
  Matrix select_columns(std::span<const std::size_t> cols) const;
  Matrix select_rows(std::span<const std::size_t> rows) const;

  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Tabular binary-classification data.
///
/// Invariants: no missing entries, target in {0,1} with both classes
/// present, unique feature names. When `standardized` is set the column
/// means and stds used for the z-score are kept alongside.
struct Dataset {
  Matrix features;
  std::vector<std::uint8_t> target;
  std::vector<std::string> feature_names;
  bool standardized = false;
  std::vector<double> column_means;
  std::vector<double> column_stds;
  std::size_t dropped_rows = 0;
  /// Raw labels mapped to 0 and 1 respectively.
  std::pair<std::string, std::string> class_labels;

  std::size_t num_samples() const { return features.rows(); }
  std::size_t num_features() const { return features.cols(); }

  /// Sub-dataset restricted to the listed feature columns.
  Dataset with_columns(std::span<const std::size_t> cols) const;
  /// Sub-dataset restricted to the listed rows (order preserved).
  Dataset with_rows(std::span<const std::size_t> rows) const;
  /// Index of a feature by name; throws DataError if absent.
  std::size_t feature_index(const std::string& name) const;
};

/// Integer bin codes per feature for plug-in MI estimation.
struct DiscretizedDataset {
  std::size_t num_samples = 0;
  std::size_t num_features = 0;
  /// Column-major: codes[i] holds the N codes of feature i.
  std::vector<std::vector<std::uint32_t>> codes;
  std::vector<std::uint32_t> bin_counts;
  std::vector<std::uint8_t> target;
  std::vector<std::string> source_names;

  /// Restrict to a subset of features (re-indexed in the given order).
  DiscretizedDataset with_features(std::span<const std::size_t> cols) const;
};

inline constexpr std::size_t kDefaultMaxBins = 8;
inline constexpr double kDefaultTestFraction = 0.2;

/// Loads a headered CSV. Non-numeric feature columns are one-hot encoded
/// ("<col>=<value>", values in lexicographic order); rows with an empty
/// cell are dropped and counted. The lexicographically smaller raw target
/// label becomes class 0.
Dataset load_csv(const std::filesystem::path& path, const std::string& target_column);

/// Same as load_csv but from in-memory text.
Dataset parse_csv(std::string_view text, const std::string& target_column);

/// Z-score with population mean and sample (N-1) std. Constant columns
/// become all zeros.
Dataset standardize(const Dataset& d);

/// Seed-free stratified split. Row r (0-based within its class) goes to
/// test iff floor((r+1)*f) > floor(r*f).
std::pair<Dataset, Dataset> stratified_split(const Dataset& d, double test_fraction);

/// Row indices of the test partition under the same rule.
std::vector<bool> stratified_test_mask(std::span<const std::uint8_t> target,
                                       double test_fraction);

/// Equal-frequency binning of a single column with B = min(max_bins,
/// distinct values). Each tie group lands in bin floor(mid_rank * B / N)
/// (mid_rank = (first + last) / 2 of its sorted positions), then bins are
/// renumbered densely. Returns codes and the number of bins used.
std::pair<std::vector<std::uint32_t>, std::uint32_t> discretize_column(
    std::span<const double> values, std::size_t max_bins);

DiscretizedDataset discretize(const Dataset& d, std::size_t max_bins = kDefaultMaxBins);

}  // namespace hubofs

#include "hubofs/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "hubofs/errors.hpp"

namespace hubofs {

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
  Matrix out(rows_, cols.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols.size(); ++k) out(r, k) = (*this)(r, cols[k]);
  return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), cols_);
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (std::size_t c = 0; c < cols_; ++c) out(k, c) = (*this)(rows[k], c);
  return out;
}

Dataset Dataset::with_columns(std::span<const std::size_t> cols) const {
  Dataset out;
  out.features = features.select_columns(cols);
  out.target = target;
  out.standardized = standardized;
  out.dropped_rows = dropped_rows;
  out.class_labels = class_labels;
  for (std::size_t c : cols) {
    if (c >= num_features()) throw InvalidArgument("column index out of range");
    out.feature_names.push_back(feature_names[c]);
    if (standardized) {
      out.column_means.push_back(column_means[c]);
      out.column_stds.push_back(column_stds[c]);
    }
  }
  return out;
}

Dataset Dataset::with_rows(std::span<const std::size_t> rows) const {
  Dataset out = *this;
  out.features = features.select_rows(rows);
  out.target.clear();
  for (std::size_t r : rows) out.target.push_back(target.at(r));
  return out;
}

std::size_t Dataset::feature_index(const std::string& name) const {
  auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) throw DataError("unknown feature '" + name + "'");
  return static_cast<std::size_t>(it - feature_names.begin());
}

DiscretizedDataset DiscretizedDataset::with_features(std::span<const std::size_t> cols) const {
  DiscretizedDataset out;
  out.num_samples = num_samples;
  out.num_features = cols.size();
  out.target = target;
  for (std::size_t c : cols) {
    if (c >= num_features) throw InvalidArgument("feature index out of range");
    out.codes.push_back(codes[c]);
    out.bin_counts.push_back(bin_counts[c]);
    out.source_names.push_back(source_names[c]);
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// RFC-4180-ish: quoted fields may contain commas, newlines and "" escapes.
std::vector<std::vector<std::string>> split_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool row_has_content = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(ch);
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
      row_has_content = true;
    } else if (ch == ',') {
      row.push_back(std::string(trim(cell)));
      cell.clear();
      row_has_content = true;
    } else if (ch == '\n') {
      if (row_has_content || !trim(cell).empty()) {
        row.push_back(std::string(trim(cell)));
        rows.push_back(std::move(row));
      }
      row.clear();
      cell.clear();
      row_has_content = false;
    } else {
      cell.push_back(ch);
      if (ch != '\r') row_has_content = true;
    }
  }
  if (quoted) throw DataError("unterminated quoted field in CSV");
  if (row_has_content || !trim(cell).empty()) {
    row.push_back(std::string(trim(cell)));
    rows.push_back(std::move(row));
  }
  return rows;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

Dataset parse_csv(std::string_view text, const std::string& target_column) {
  auto rows = split_csv(text);
  if (rows.empty()) throw DataError("CSV has no header row");
  const std::vector<std::string> header = rows.front();
  const std::size_t width = header.size();

  std::size_t target_idx = width;
  for (std::size_t c = 0; c < width; ++c) {
    if (header[c] == target_column) {
      if (target_idx != width)
        throw DataError("target column '" + target_column + "' is ambiguous");
      target_idx = c;
    }
  }
  if (target_idx == width) throw DataError("target column '" + target_column + "' not found");

  std::vector<const std::vector<std::string>*> kept;
  std::size_t dropped = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != width)
      throw DataError("row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                      " cells, expected " + std::to_string(width));
    bool complete = std::none_of(row.begin(), row.end(), [](const std::string& c) { return c.empty(); });
    if (complete) {
      kept.push_back(&row);
    } else {
      ++dropped;
    }
  }
  if (kept.empty()) throw DataError("no usable rows after dropping rows with missing cells");

  std::set<std::string> labels;
  for (const auto* row : kept) labels.insert((*row)[target_idx]);
  if (labels.size() != 2)
    throw DataError("target column must have exactly 2 classes, found " + std::to_string(labels.size()));

  Dataset d;
  d.dropped_rows = dropped;
  d.class_labels = {*labels.begin(), *labels.rbegin()};
  const std::size_t n_rows = kept.size();
  d.target.resize(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r)
    d.target[r] = (*kept[r])[target_idx] == d.class_labels.first ? 0 : 1;

  // Column layout: numeric columns pass through, others expand to one-hot.
  std::vector<std::vector<double>> out_cols;
  for (std::size_t c = 0; c < width; ++c) {
    if (c == target_idx) continue;
    std::vector<double> numeric(n_rows);
    bool is_numeric = true;
    for (std::size_t r = 0; r < n_rows && is_numeric; ++r)
      is_numeric = parse_number((*kept[r])[c], numeric[r]);
    if (is_numeric) {
      d.feature_names.push_back(header[c]);
      out_cols.push_back(std::move(numeric));
      continue;
    }
    std::set<std::string> values;
    for (const auto* row : kept) values.insert((*row)[c]);
    for (const auto& v : values) {
      std::vector<double> indicator(n_rows);
      for (std::size_t r = 0; r < n_rows; ++r) indicator[r] = (*kept[r])[c] == v ? 1.0 : 0.0;
      d.feature_names.push_back(header[c] + "=" + v);
      out_cols.push_back(std::move(indicator));
    }
  }
  std::set<std::string> unique_names(d.feature_names.begin(), d.feature_names.end());
  if (unique_names.size() != d.feature_names.size()) throw DataError("duplicate feature names after encoding");
  if (out_cols.empty()) throw DataError("no feature columns");

  d.features = Matrix(n_rows, out_cols.size());
  for (std::size_t c = 0; c < out_cols.size(); ++c)
    for (std::size_t r = 0; r < n_rows; ++r) d.features(r, c) = out_cols[c][r];

  bool has0 = std::find(d.target.begin(), d.target.end(), 0) != d.target.end();
  bool has1 = std::find(d.target.begin(), d.target.end(), 1) != d.target.end();
  if (!has0 || !has1) throw DataError("both classes must be present");
  return d;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& target_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), target_column);
}

Dataset standardize(const Dataset& d) {
  if (d.standardized) throw InvalidArgument("dataset is already standardized");
  const std::size_t n_rows = d.num_samples();
  if (n_rows < 2) throw InvalidArgument("standardize needs at least 2 samples");
  Dataset out = d;
  out.standardized = true;
  out.column_means.assign(d.num_features(), 0.0);
  out.column_stds.assign(d.num_features(), 0.0);
  for (std::size_t c = 0; c < d.num_features(); ++c) {
    double lo = d.features(0, c);
    double hi = lo;
    double sum = 0.0;
    for (std::size_t r = 0; r < n_rows; ++r) {
      const double v = d.features(r, c);
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double mean = sum / static_cast<double>(n_rows);
    out.column_means[c] = mean;
    if (lo == hi) {
      for (std::size_t r = 0; r < n_rows; ++r) out.features(r, c) = 0.0;
      continue;
    }
    double ss = 0.0;
    for (std::size_t r = 0; r < n_rows; ++r) {
      const double dv = d.features(r, c) - mean;
      ss += dv * dv;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n_rows - 1));
    out.column_stds[c] = sd;
    for (std::size_t r = 0; r < n_rows; ++r) out.features(r, c) = (d.features(r, c) - mean) / sd;
  }
  return out;
}

std::vector<bool> stratified_test_mask(std::span<const std::uint8_t> target, double test_fraction) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw InvalidArgument("test_fraction must lie in (0,1)");
  std::vector<bool> mask(target.size(), false);
  for (std::uint8_t cls : {std::uint8_t{0}, std::uint8_t{1}}) {
    std::size_t within = 0;
    std::size_t n_test = 0;
    for (std::size_t r = 0; r < target.size(); ++r) {
      if (target[r] != cls) continue;
      const auto lo = std::floor(static_cast<double>(within) * test_fraction);
      const auto hi = std::floor(static_cast<double>(within + 1) * test_fraction);
      if (hi > lo) {
        mask[r] = true;
        ++n_test;
      }
      ++within;
    }
    if (within < 2) throw DataError("each class needs at least 2 samples to split");
    if (n_test == 0 || n_test == within)
      throw DataError("class " + std::to_string(cls) + " would get an empty train or test split");
  }
  return mask;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& d, double test_fraction) {
  const auto mask = stratified_test_mask(d.target, test_fraction);
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  for (std::size_t r = 0; r < mask.size(); ++r) (mask[r] ? test_rows : train_rows).push_back(r);
  return {d.with_rows(train_rows), d.with_rows(test_rows)};
}

std::pair<std::vector<std::uint32_t>, std::uint32_t> discretize_column(std::span<const double> values,
                                                                       std::size_t max_bins) {
  if (max_bins < 2) throw InvalidArgument("max_bins must be >= 2");
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::size_t distinct = 0;
  for (std::size_t p = 0; p < n; ++p)
    if (p == 0 || values[order[p]] != values[order[p - 1]]) ++distinct;
  const std::size_t bins = std::min(max_bins, distinct);

  // A tie group takes the bin of its mid-rank (first + last) / 2, so equal
  // values never straddle a quantile edge. Unused bins are compacted away.
  std::vector<std::uint32_t> codes(n, 0);
  std::uint32_t next_code = 0;
  std::size_t last_raw_bin = 0;
  std::size_t first = 0;
  while (first < n) {
    std::size_t last = first;
    while (last + 1 < n && values[order[last + 1]] == values[order[first]]) ++last;
    const std::size_t raw_bin = std::min(bins - 1, (first + last) * bins / (2 * n));
    if (first > 0 && raw_bin != last_raw_bin) ++next_code;
    last_raw_bin = raw_bin;
    for (std::size_t p = first; p <= last; ++p) codes[order[p]] = next_code;
    first = last + 1;
  }
  return {std::move(codes), n == 0 ? 1u : next_code + 1};
}

DiscretizedDataset discretize(const Dataset& d, std::size_t max_bins) {
  DiscretizedDataset out;
  out.num_samples = d.num_samples();
  out.num_features = d.num_features();
  out.target = d.target;
  out.source_names = d.feature_names;
  for (std::size_t c = 0; c < d.num_features(); ++c) {
    const auto col = d.features.column(c);
    auto [codes, count] = discretize_column(col, max_bins);
    out.codes.push_back(std::move(codes));
    out.bin_counts.push_back(count);
  }
  return out;
}

}  // namespace hubofs

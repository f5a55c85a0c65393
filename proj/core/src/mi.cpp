#include "hubofs/mi.hpp"

#include <algorithm>
#include <cmath>

#include "hubofs/errors.hpp"

namespace hubofs {

namespace {

// H = log2(N) - (1/N) * sum c log2 c over non-empty cells. Cells are
// summed in sorted order so a transposed joint table gives identical bits.
double entropy_from_counts(std::span<const std::size_t> counts, std::size_t total) {
  if (total == 0) return 0.0;
  std::vector<std::size_t> cells;
  for (std::size_t c : counts)
    if (c > 1) cells.push_back(c);
  std::sort(cells.begin(), cells.end());
  double acc = 0.0;
  for (std::size_t c : cells) acc += static_cast<double>(c) * std::log2(static_cast<double>(c));
  const double n = static_cast<double>(total);
  const double h = std::log2(n) - acc / n;
  return h > 0.0 ? h : 0.0;
}

// Relabels arbitrary codes to 0..K-1 in order of first appearance; keeps
// the histogram dense regardless of how sparse the raw codes are.
std::vector<std::uint32_t> compact(std::span<const std::uint32_t> codes, std::uint32_t& levels) {
  std::vector<std::uint32_t> sorted(codes.begin(), codes.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::uint32_t> out(codes.size());
  for (std::size_t s = 0; s < codes.size(); ++s)
    out[s] = static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), codes[s]) -
                                        sorted.begin());
  levels = static_cast<std::uint32_t>(sorted.size());
  return out;
}

std::uint32_t max_code(std::span<const std::uint32_t> codes) {
  return codes.empty() ? 0 : *std::max_element(codes.begin(), codes.end());
}

// Codes usable directly as histogram indices; compacts only when the raw
// range is much larger than the sample count.
std::span<const std::uint32_t> dense_codes(std::span<const std::uint32_t> codes,
                                           std::vector<std::uint32_t>& storage,
                                           std::uint32_t& levels) {
  const std::uint32_t top = max_code(codes);
  if (top < 4 * codes.size() + 16) {
    levels = top + 1;
    return codes;
  }
  storage = compact(codes, levels);
  return storage;
}

void check_triple(const DiscretizedDataset& dd, std::size_t i, std::size_t j, std::size_t k) {
  if (i >= dd.num_features || j >= dd.num_features || k >= dd.num_features)
    throw InvalidArgument("feature index out of range");
  if (i == j || i == k || j == k) throw InvalidArgument("feature indices must be distinct");
}

}  // namespace

MiTensors MiTensors::restrict_to(std::span<const std::size_t> features) const {
  std::vector<std::ptrdiff_t> remap(relevance.size(), -1);
  for (std::size_t p = 0; p < features.size(); ++p) {
    if (features[p] >= relevance.size()) throw InvalidArgument("feature index out of range");
    if (p > 0 && features[p] <= features[p - 1])
      throw InvalidArgument("restriction indices must be strictly increasing");
    remap[features[p]] = static_cast<std::ptrdiff_t>(p);
  }
  MiTensors out;
  for (std::size_t f : features) out.relevance.push_back(relevance[f]);
  for (const auto& pv : pairs) {
    if (remap[pv.i] < 0 || remap[pv.j] < 0) continue;
    out.pairs.push_back({static_cast<std::size_t>(remap[pv.i]), static_cast<std::size_t>(remap[pv.j]), pv.value});
  }
  for (const auto& tv : triples) {
    if (remap[tv.i] < 0 || remap[tv.j] < 0 || remap[tv.k] < 0) continue;
    out.triples.push_back({static_cast<std::size_t>(remap[tv.i]), static_cast<std::size_t>(remap[tv.j]),
                           static_cast<std::size_t>(remap[tv.k]), tv.value});
  }
  return out;
}

double entropy(std::span<const std::uint32_t> codes) {
  if (codes.empty()) throw InvalidArgument("entropy of an empty vector");
  std::uint32_t levels = 0;
  std::vector<std::uint32_t> storage;
  const auto use = dense_codes(codes, storage, levels);
  std::vector<std::size_t> counts(levels, 0);
  for (auto c : use) ++counts[c];
  return entropy_from_counts(counts, codes.size());
}

double mi_pair(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  if (a.size() != b.size()) throw InvalidArgument("mi_pair: length mismatch");
  if (a.empty()) throw InvalidArgument("mi_pair: empty input");
  std::uint32_t la = 0;
  std::uint32_t lb = 0;
  std::vector<std::uint32_t> sa;
  std::vector<std::uint32_t> sb;
  const auto ca = dense_codes(a, sa, la);
  const auto cb = dense_codes(b, sb, lb);
  std::vector<std::size_t> count_a(la, 0);
  std::vector<std::size_t> count_b(lb, 0);
  std::vector<std::size_t> joint(static_cast<std::size_t>(la) * lb, 0);
  for (std::size_t s = 0; s < a.size(); ++s) {
    ++count_a[ca[s]];
    ++count_b[cb[s]];
    ++joint[static_cast<std::size_t>(ca[s]) * lb + cb[s]];
  }
  // sum (c/N) log2(c N / (c_a c_b)); the ratio is formed from exact integers
  // so an empirically independent cell contributes exactly 0.
  const std::uint64_t n = a.size();
  std::vector<double> terms;
  for (std::uint32_t x = 0; x < la; ++x)
    for (std::uint32_t y = 0; y < lb; ++y) {
      const std::uint64_t c = joint[static_cast<std::size_t>(x) * lb + y];
      if (c == 0) continue;
      const std::uint64_t num = c * n;
      const std::uint64_t den = static_cast<std::uint64_t>(count_a[x]) * count_b[y];
      if (num == den) continue;
      terms.push_back(static_cast<double>(c) * std::log2(static_cast<double>(num) / static_cast<double>(den)));
    }
  std::sort(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += t;
  const double mi = acc / static_cast<double>(n);
  return mi > 0.0 ? mi : 0.0;
}

double mi_joint_pair_single(const DiscretizedDataset& dd, std::size_t i, std::size_t j, std::size_t k) {
  check_triple(dd, i, j, k);
  const auto& ci = dd.codes[i];
  const auto& cj = dd.codes[j];
  std::vector<std::uint32_t> composite(dd.num_samples);
  for (std::size_t s = 0; s < dd.num_samples; ++s) composite[s] = ci[s] * dd.bin_counts[j] + cj[s];
  return mi_pair(composite, dd.codes[k]);
}

double cyclic_mi(const DiscretizedDataset& dd, std::size_t i, std::size_t j, std::size_t k) {
  // Evaluate on the sorted tuple so every permutation yields the same bits.
  std::size_t t[3] = {i, j, k};
  std::sort(t, t + 3);
  const double a = mi_joint_pair_single(dd, t[0], t[1], t[2]);
  const double b = mi_joint_pair_single(dd, t[0], t[2], t[1]);
  const double c = mi_joint_pair_single(dd, t[1], t[2], t[0]);
  return (a + b + c) / 3.0;
}

std::vector<double> relevance_scores(const DiscretizedDataset& dd) {
  std::vector<std::uint32_t> y(dd.target.begin(), dd.target.end());
  std::vector<double> rel(dd.num_features);
  for (std::size_t f = 0; f < dd.num_features; ++f) rel[f] = mi_pair(dd.codes[f], y);
  return rel;
}

MiTensors compute_tensors(const DiscretizedDataset& dd, const TensorOptions& options) {
  if (dd.num_features == 0) throw InvalidArgument("compute_tensors: no features");
  MiTensors t;
  t.relevance = relevance_scores(dd);
  const std::size_t n = dd.num_features;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) t.pairs.push_back({i, j, mi_pair(dd.codes[i], dd.codes[j])});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) t.triples.push_back({i, j, k, cyclic_mi(dd, i, j, k)});

  if (options.max_triples > 0 && t.triples.size() > options.max_triples) {
    std::stable_sort(t.triples.begin(), t.triples.end(),
                     [](const TripleValue& a, const TripleValue& b) { return a.value > b.value; });
    t.triples.resize(options.max_triples);
    std::sort(t.triples.begin(), t.triples.end(), [](const TripleValue& a, const TripleValue& b) {
      return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
    });
  }
  return t;
}

}  // namespace hubofs

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hubofs/dataset.hpp"

namespace hubofs {

struct PairValue {
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;
};

struct TripleValue {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  double value = 0.0;
};

/// Mutual-information statistics in bits. `pairs` and `triples` are sorted
/// by index tuple with strictly increasing indices inside each tuple.
struct MiTensors {
  std::vector<double> relevance;
  std::vector<PairValue> pairs;
  std::vector<TripleValue> triples;

  std::size_t num_features() const { return relevance.size(); }
  std::size_t num_values() const { return relevance.size() + pairs.size() + triples.size(); }

  /// Re-index onto the listed features (must be strictly increasing);
  /// tuples involving other features are dropped.
  MiTensors restrict_to(std::span<const std::size_t> features) const;
};

/// Shannon entropy (bits) of the empirical distribution of `codes`.
double entropy(std::span<const std::uint32_t> codes);

/// Plug-in MI in bits, sum over cells of p(a,b) log2(p(a,b) / (p(a) p(b))),
/// clamped at zero. Exactly 0 on empirically independent tables.
double mi_pair(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

/// MI between the composite (X_i, X_j) and X_k.
double mi_joint_pair_single(const DiscretizedDataset& dd, std::size_t i, std::size_t j, std::size_t k);

/// Mean of the three ways of grouping {i,j,k} into a pair plus a singleton.
double cyclic_mi(const DiscretizedDataset& dd, std::size_t i, std::size_t j, std::size_t k);

/// MI(X_i, y) for every feature.
std::vector<double> relevance_scores(const DiscretizedDataset& dd);

struct TensorOptions {
  /// Keep only the M largest triadic values (ties to the smaller tuple);
  /// 0 keeps all.
  std::size_t max_triples = 0;
};

MiTensors compute_tensors(const DiscretizedDataset& dd, const TensorOptions& options = {});

}  // namespace hubofs

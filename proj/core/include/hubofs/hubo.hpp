#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hubofs/mi.hpp"

namespace hubofs {

/// Ising configuration. Spin -1 means the feature is selected.
/// Ordering is lexicographic with -1 < +1.
class SpinConfig {
 public:
  SpinConfig() = default;
  explicit SpinConfig(std::vector<std::int8_t> spins);
  /// All spins +1 (nothing selected).
  static SpinConfig unselected(std::size_t n);

  std::size_t size() const { return spins_.size(); }
  std::int8_t operator[](std::size_t i) const { return spins_[i]; }
  void flip(std::size_t i) { spins_[i] = static_cast<std::int8_t>(-spins_[i]); }
  std::span<const std::int8_t> spins() const { return spins_; }

  auto operator<=>(const SpinConfig&) const = default;
  bool operator==(const SpinConfig&) const = default;

 private:
  std::vector<std::int8_t> spins_;
};

/// x_i = (1 - Z_i) / 2.
std::vector<std::uint8_t> to_binary(const SpinConfig& z);
/// Z_i = 1 - 2 x_i.
SpinConfig to_spin(std::span<const std::uint8_t> x);

struct HuboWeights {
  double w1 = 1.0;
  double w2 = 0.5;
  double w3 = 0.3;
};

struct PenaltyParams {
  double lambda = 0.5;
  double tau = 0.2;
  double p = 2.0;
};

using PairTerm = PairValue;
using TripleTerm = TripleValue;

/// Sparse one-, two- and three-body Ising coefficients.
struct HuboCoefficients {
  std::size_t n = 0;
  std::vector<double> h;
  std::vector<PairTerm> j_terms;
  std::vector<TripleTerm> k_terms;
  double constant = 0.0;
  HuboWeights weights;
  PenaltyParams penalty;
  bool penalty_applied = false;

  /// Throws DataError unless sizes agree and tuples are strictly
  /// increasing, in range, sorted and unique.
  void validate() const;
  /// Largest |coefficient| over h, J and K.
  double max_abs_coefficient() const;
};

/// Indices of the k largest values (ties to the smaller index), ascending.
std::vector<std::size_t> preselect_top_k(std::span<const double> relevance, std::size_t k);

struct NormalizedTensors {
  MiTensors tensors;
  double min_value = 0.0;
  double max_value = 0.0;
  /// Set when every value was equal and everything mapped to 0.
  bool degenerate = false;
};

/// Single min-max map over relevance, pair and triple values jointly.
NormalizedTensors normalize_global(const MiTensors& t);

/// h = w1*rel, J = w2*red, K = -w3*tri.
HuboCoefficients build_coefficients(const MiTensors& normalized, const HuboWeights& weights = {});

/// Hinge shift for one feature: -lambda*((tau-c)/tau)^p below tau, else 0.
double penalty_shift(double c, const PenaltyParams& params);

/// h_i += penalty_shift(c_i). Throws if already applied.
HuboCoefficients apply_penalty(const HuboCoefficients& c, std::span<const double> relevance_norm,
                               const PenaltyParams& params = {});

/// H(Z) summed as: h terms, then J, then K (each ascending by tuple), then
/// the constant.
double energy(const HuboCoefficients& c, std::span<const std::int8_t> spins);
double energy(const HuboCoefficients& c, const SpinConfig& z);

/// Energy of the configuration encoded as an x-bitmask, feature 0 in the
/// most significant of the n bits. Bit-identical to energy() for the same
/// configuration.
double energy_of_mask(const HuboCoefficients& c, std::uint64_t mask);

SpinConfig spins_from_mask(std::uint64_t mask, std::size_t n);
std::uint64_t mask_from_spins(const SpinConfig& z);

}  // namespace hubofs

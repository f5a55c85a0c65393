#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hubofs/hubo.hpp"

namespace hubofs {

struct SampleEntry {
  SpinConfig spins;
  std::uint64_t count = 0;
  double energy = 0.0;
};

/// Multiset of configurations with multiplicities and energies.
///
/// Entries are unique by configuration and ordered by (energy, spins).
struct SampleSet {
  std::vector<SampleEntry> entries;
  std::uint64_t total_shots = 0;
  std::string sampler_name;
  std::uint64_t seed = 0;
  /// Free-form key/value metadata written into the sample file header.
  std::vector<std::pair<std::string, std::string>> metadata;

  std::size_t num_features() const { return entries.empty() ? 0 : entries.front().spins.size(); }
  double min_energy() const;
};

/// Builds a SampleSet from raw shots: merges duplicates, evaluates energies
/// and orders entries by (energy, spins).
SampleSet aggregate_shots(const HuboCoefficients& c, std::vector<SpinConfig> shots, std::string sampler_name,
                          std::uint64_t seed);

/// Orders entries by (energy, spins) in place.
void sort_entries(std::vector<SampleEntry>& entries);

inline constexpr std::size_t kMaxExhaustiveSpins = 24;

/// Enumerates all 2^n configurations and keeps the `keep` lowest.
SampleSet exhaustive_solve(const HuboCoefficients& c, std::uint64_t keep);

/// Full spectrum (keep = 2^n); convenient for tests and the probe.
SampleSet exhaustive_spectrum(const HuboCoefficients& c);

struct AnnealingParams {
  std::uint64_t shots = 64;
  std::uint64_t sweeps = 500;
  /// Defaults to 2 * n * max|coefficient| when unset.
  std::optional<double> t_start;
  double t_end = 0.01;
  std::uint64_t seed = 0;
  /// Recomputes the full energy after every accepted flip and throws if the
  /// incremental delta disagrees by more than 1e-10. Small n only.
  bool verify_deltas = false;
};

double default_start_temperature(const HuboCoefficients& c);

/// Independent single-spin Metropolis chains under a geometric schedule.
/// Chain c draws from Xoshiro256(seed + c): n spins for the random start,
/// then one uniform per uphill proposal. Spins are visited 0..n-1 each
/// sweep; the temperature of sweep s is t_start * (t_end/t_start)^(s/(S-1)).
SampleSet simulated_annealing(const HuboCoefficients& c, const AnnealingParams& params);

/// Uniform i.i.d. configurations from a single Xoshiro256(seed) stream.
SampleSet random_sample(const HuboCoefficients& c, std::uint64_t shots, std::uint64_t seed);

}  // namespace hubofs

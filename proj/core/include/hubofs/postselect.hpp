#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hubofs/samplers.hpp"

namespace hubofs {

/// Per-feature selection frequency over the retained low-energy shots.
struct ImportanceScores {
  std::vector<double> scores;
  std::uint64_t retained_count = 0;
  double rho = 1.0;
};

struct SelectionResult {
  std::vector<std::size_t> selected;
  double delta = 0.0;
  ImportanceScores scores;
};

/// Number of shots kept for a retention fraction: max(1, floor(rho * S)).
std::uint64_t retained_shot_count(std::uint64_t total_shots, double rho);

/// Keeps the lowest-energy fraction rho of the shots (multiplicity-expanded,
/// energy ties broken lexicographically on spins with -1 < +1).
SampleSet retain_low_energy(const SampleSet& s, double rho);

/// I_i = count-weighted mean of x_i. Records `rho` as given.
ImportanceScores importance(const SampleSet& retained, double rho = 1.0);

/// selected = { i : I_i >= delta }, ascending.
SelectionResult threshold_select(const ImportanceScores& scores, double delta);

std::vector<SelectionResult> threshold_sweep(const ImportanceScores& scores, std::span<const double> deltas);

}  // namespace hubofs

#include "hubofs/postselect.hpp"

#include <algorithm>
#include <cmath>

#include "hubofs/errors.hpp"

namespace hubofs {

std::uint64_t retained_shot_count(std::uint64_t total_shots, double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw InvalidArgument("rho must lie in (0,1]");
  const auto k = static_cast<std::uint64_t>(std::floor(rho * static_cast<double>(total_shots)));
  return std::max<std::uint64_t>(1, std::min(k, total_shots));
}

SampleSet retain_low_energy(const SampleSet& s, double rho) {
  if (s.total_shots < 1) throw InvalidArgument("sample set has no shots");
  const std::uint64_t keep = retained_shot_count(s.total_shots, rho);
  std::vector<SampleEntry> ordered = s.entries;
  sort_entries(ordered);

  SampleSet out;
  out.sampler_name = s.sampler_name;
  out.seed = s.seed;
  out.metadata = s.metadata;
  std::uint64_t remaining = keep;
  for (const auto& e : ordered) {
    if (remaining == 0) break;
    const std::uint64_t take = std::min(remaining, e.count);
    out.entries.push_back({e.spins, take, e.energy});
    remaining -= take;
  }
  out.total_shots = keep - remaining;
  return out;
}

ImportanceScores importance(const SampleSet& retained, double rho) {
  if (retained.entries.empty() || retained.total_shots == 0) throw InvalidArgument("importance of an empty sample set");
  const std::size_t n = retained.num_features();
  std::vector<std::uint64_t> hits(n, 0);
  std::uint64_t total = 0;
  for (const auto& e : retained.entries) {
    if (e.spins.size() != n) throw InvalidArgument("inconsistent configuration sizes");
    for (std::size_t i = 0; i < n; ++i)
      if (e.spins[i] < 0) hits[i] += e.count;
    total += e.count;
  }
  ImportanceScores out;
  out.retained_count = total;
  out.rho = rho;
  out.scores.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.scores[i] = static_cast<double>(hits[i]) / static_cast<double>(total);
  return out;
}

SelectionResult threshold_select(const ImportanceScores& scores, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw InvalidArgument("delta must lie in [0,1]");
  SelectionResult out;
  out.delta = delta;
  out.scores = scores;
  for (std::size_t i = 0; i < scores.scores.size(); ++i)
    if (scores.scores[i] >= delta) out.selected.push_back(i);
  return out;
}

std::vector<SelectionResult> threshold_sweep(const ImportanceScores& scores, std::span<const double> deltas) {
  if (deltas.empty()) throw InvalidArgument("threshold sweep needs at least one delta");
  std::vector<SelectionResult> out;
  out.reserve(deltas.size());
  for (double d : deltas) out.push_back(threshold_select(scores, d));
  return out;
}

}  // namespace hubofs

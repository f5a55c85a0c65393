#include "hubofs/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "hubofs/errors.hpp"
#include "hubofs/format.hpp"
#include "hubofs/rng.hpp"

namespace hubofs {

double SampleSet::min_energy() const {
  if (entries.empty()) throw InvalidArgument("empty sample set");
  double m = entries.front().energy;
  for (const auto& e : entries) m = std::min(m, e.energy);
  return m;
}

void sort_entries(std::vector<SampleEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const SampleEntry& a, const SampleEntry& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.spins < b.spins;
  });
}

SampleSet aggregate_shots(const HuboCoefficients& c, std::vector<SpinConfig> shots, std::string sampler_name,
                          std::uint64_t seed) {
  std::map<SpinConfig, std::uint64_t> counts;
  for (auto& s : shots) ++counts[std::move(s)];
  SampleSet out;
  out.sampler_name = std::move(sampler_name);
  out.seed = seed;
  out.total_shots = shots.size();
  out.entries.reserve(counts.size());
  for (auto& [spins, count] : counts) {
    const double e = energy(c, spins);
    out.entries.push_back({spins, count, e});
  }
  sort_entries(out.entries);
  return out;
}

namespace {

struct Ranked {
  double energy;
  std::uint64_t mask;
};

// Lexicographic spin order with -1 < +1 is descending x-mask order.
bool ranks_before(const Ranked& a, const Ranked& b) {
  if (a.energy != b.energy) return a.energy < b.energy;
  return a.mask > b.mask;
}

struct Neighbourhood {
  struct Pair {
    std::size_t other;
    double value;
  };
  struct Triple {
    std::size_t a;
    std::size_t b;
    double value;
  };
  std::vector<std::vector<Pair>> pairs;
  std::vector<std::vector<Triple>> triples;

  explicit Neighbourhood(const HuboCoefficients& c) : pairs(c.n), triples(c.n) {
    for (const auto& p : c.j_terms) {
      pairs[p.i].push_back({p.j, p.value});
      pairs[p.j].push_back({p.i, p.value});
    }
    for (const auto& q : c.k_terms) {
      triples[q.i].push_back({q.j, q.k, q.value});
      triples[q.j].push_back({q.i, q.k, q.value});
      triples[q.k].push_back({q.i, q.j, q.value});
    }
  }

  // dE/dZ_i, excluding Z_i itself.
  double local_field(const HuboCoefficients& c, const std::vector<std::int8_t>& z, std::size_t i) const {
    double f = c.h[i];
    for (const auto& p : pairs[i]) f += p.value * z[p.other];
    for (const auto& t : triples[i]) f += t.value * (z[t.a] * z[t.b]);
    return f;
  }
};

}  // namespace

SampleSet exhaustive_solve(const HuboCoefficients& c, std::uint64_t keep) {
  c.validate();
  if (c.n > kMaxExhaustiveSpins)
    throw CapacityError("exhaustive enumeration supports n <= " + std::to_string(kMaxExhaustiveSpins) +
                        ", got n=" + std::to_string(c.n));
  const std::uint64_t space = std::uint64_t{1} << c.n;
  if (keep < 1 || keep > space) throw InvalidArgument("keep must lie in [1, 2^n]");

  std::vector<Ranked> best;
  if (keep == space) {
    best.reserve(space);
    for (std::uint64_t m = 0; m < space; ++m) best.push_back({energy_of_mask(c, m), m});
    std::sort(best.begin(), best.end(), ranks_before);
  } else {
    // Max-heap on rank: the worst kept state sits on top.
    std::priority_queue<Ranked, std::vector<Ranked>, decltype(&ranks_before)> heap(ranks_before);
    for (std::uint64_t m = 0; m < space; ++m) {
      Ranked r{energy_of_mask(c, m), m};
      if (heap.size() < keep) {
        heap.push(r);
      } else if (ranks_before(r, heap.top())) {
        heap.pop();
        heap.push(r);
      }
    }
    while (!heap.empty()) {
      best.push_back(heap.top());
      heap.pop();
    }
    std::reverse(best.begin(), best.end());
  }

  SampleSet out;
  out.sampler_name = "exhaustive";
  out.seed = 0;
  out.total_shots = keep;
  out.entries.reserve(best.size());
  for (const auto& r : best) out.entries.push_back({spins_from_mask(r.mask, c.n), 1, r.energy});
  return out;
}

SampleSet exhaustive_spectrum(const HuboCoefficients& c) {
  if (c.n > kMaxExhaustiveSpins)
    throw CapacityError("exhaustive enumeration supports n <= " + std::to_string(kMaxExhaustiveSpins));
  return exhaustive_solve(c, std::uint64_t{1} << c.n);
}

double default_start_temperature(const HuboCoefficients& c) {
  return 2.0 * static_cast<double>(c.n) * c.max_abs_coefficient();
}

SampleSet simulated_annealing(const HuboCoefficients& c, const AnnealingParams& params) {
  c.validate();
  if (params.shots < 1) throw InvalidArgument("shots must be >= 1");
  if (params.sweeps < 1) throw InvalidArgument("sweeps must be >= 1");
  if (!(params.t_end > 0.0)) throw InvalidArgument("t_end must be > 0");
  const double t_start = params.t_start.value_or(std::max(default_start_temperature(c), params.t_end));
  if (!(t_start > 0.0)) throw InvalidArgument("t_start must be > 0");
  if (t_start < params.t_end) throw InvalidArgument("t_start must be >= t_end");

  const Neighbourhood nb(c);
  const std::size_t n = c.n;
  std::vector<double> temperatures(params.sweeps);
  for (std::uint64_t s = 0; s < params.sweeps; ++s) {
    const double frac = params.sweeps == 1 ? 0.0 : static_cast<double>(s) / static_cast<double>(params.sweeps - 1);
    temperatures[s] = t_start * std::pow(params.t_end / t_start, frac);
  }

  std::vector<SpinConfig> finals;
  finals.reserve(params.shots);
  std::vector<std::int8_t> z(n);
  for (std::uint64_t chain = 0; chain < params.shots; ++chain) {
    Xoshiro256 rng(params.seed + chain);
    for (auto& s : z) s = rng.random_spin();
    double running = params.verify_deltas ? energy(c, z) : 0.0;
    for (double temp : temperatures) {
      for (std::size_t i = 0; i < n; ++i) {
        const double delta = -2.0 * z[i] * nb.local_field(c, z, i);
        bool accept = delta <= 0.0;
        if (!accept) accept = rng.uniform() < std::exp(-delta / temp);
        if (!accept) continue;
        z[i] = static_cast<std::int8_t>(-z[i]);
        if (params.verify_deltas) {
          const double fresh = energy(c, z);
          if (std::abs((fresh - running) - delta) > 1e-10)
            throw Error("incremental delta mismatch at spin " + std::to_string(i));
          running = fresh;
        }
      }
    }
    finals.emplace_back(z);
  }
  auto out = aggregate_shots(c, std::move(finals), "sa", params.seed);
  out.metadata = {{"sweeps", std::to_string(params.sweeps)},
                  {"t_start", format_g(t_start)},
                  {"t_end", format_g(params.t_end)}};
  return out;
}

SampleSet random_sample(const HuboCoefficients& c, std::uint64_t shots, std::uint64_t seed) {
  c.validate();
  if (shots < 1) throw InvalidArgument("shots must be >= 1");
  Xoshiro256 rng(seed);
  std::vector<SpinConfig> draws;
  draws.reserve(shots);
  std::vector<std::int8_t> z(c.n);
  for (std::uint64_t s = 0; s < shots; ++s) {
    for (auto& v : z) v = rng.random_spin();
    draws.emplace_back(z);
  }
  return aggregate_shots(c, std::move(draws), "random", seed);
}

}  // namespace hubofs

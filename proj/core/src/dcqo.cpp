#include "hubofs/dcqo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "hubofs/errors.hpp"
#include "hubofs/format.hpp"
#include "hubofs/rng.hpp"

namespace hubofs {

namespace {

using cplx = std::complex<double>;

constexpr double kNormTolerance = 1e-9;

void check_size(std::size_t n) {
  if (n > kMaxStatevectorQubits)
    throw CapacityError("statevector simulation supports n <= " + std::to_string(kMaxStatevectorQubits) +
                        ", got n=" + std::to_string(n));
}

std::size_t bit_of(std::size_t n, std::size_t qubit) { return std::size_t{1} << (n - 1 - qubit); }

// exp(+i phi X_q): the driver is -sum X, so exp(-i dt (1-lambda) H_0).
void apply_driver(Statevector& s, std::size_t q, double phi) {
  const std::size_t bit = bit_of(s.n, q);
  const double c = std::cos(phi);
  const cplx is(0.0, std::sin(phi));
  for (std::size_t idx = 0; idx < s.amplitudes.size(); ++idx) {
    if (idx & bit) continue;
    const cplx a0 = s.amplitudes[idx];
    const cplx a1 = s.amplitudes[idx | bit];
    s.amplitudes[idx] = c * a0 + is * a1;
    s.amplitudes[idx | bit] = is * a0 + c * a1;
  }
}

// exp(-i scale Y_q F_q) with F_q(x) = (E(Z_q=+1) - E(Z_q=-1)) / 2 read off
// the energy table for the two partners of each pair.
void apply_cd_qubit(Statevector& s, std::span<const double> energies, std::size_t q, double scale) {
  const std::size_t bit = bit_of(s.n, q);
  for (std::size_t idx = 0; idx < s.amplitudes.size(); ++idx) {
    if (idx & bit) continue;
    const double field = 0.5 * (energies[idx] - energies[idx | bit]);
    const double theta = scale * field;
    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    const cplx a0 = s.amplitudes[idx];
    const cplx a1 = s.amplitudes[idx | bit];
    s.amplitudes[idx] = c * a0 - sn * a1;
    s.amplitudes[idx | bit] = sn * a0 + c * a1;
  }
}

// Sum of squared coefficients of F_q^2 expanded in Z-strings over the other
// qubits; equals tr(F_q^4) / 2^n.
double quartic_trace(const HuboCoefficients& c, std::size_t q) {
  std::vector<std::pair<std::uint64_t, double>> terms;
  terms.push_back({0, c.h[q]});
  for (const auto& p : c.j_terms) {
    if (p.i == q) terms.push_back({std::uint64_t{1} << p.j, p.value});
    if (p.j == q) terms.push_back({std::uint64_t{1} << p.i, p.value});
  }
  for (const auto& t : c.k_terms) {
    if (t.i == q) terms.push_back({(std::uint64_t{1} << t.j) | (std::uint64_t{1} << t.k), t.value});
    if (t.j == q) terms.push_back({(std::uint64_t{1} << t.i) | (std::uint64_t{1} << t.k), t.value});
    if (t.k == q) terms.push_back({(std::uint64_t{1} << t.i) | (std::uint64_t{1} << t.j), t.value});
  }
  std::unordered_map<std::uint64_t, double> square;
  for (const auto& [ma, va] : terms)
    for (const auto& [mb, vb] : terms) square[ma ^ mb] += va * vb;
  double total = 0.0;
  for (const auto& [mask, v] : square) total += v * v;
  return total;
}

GateCounts count_gates(const HuboCoefficients& c, const CdSchedule& sched, CdMode mode) {
  std::uint64_t h_terms = 0;
  for (double v : c.h)
    if (v != 0.0) ++h_terms;
  std::uint64_t j_terms = 0;
  for (const auto& p : c.j_terms)
    if (p.value != 0.0) ++j_terms;
  std::uint64_t k_terms = 0;
  for (const auto& t : c.k_terms)
    if (t.value != 0.0) ++k_terms;

  GateCounts per_step;
  // CD layer: Y_i (h), Y_i Z_j + Z_i Y_j (J), three placements of Y (K).
  per_step.one_qubit = h_terms;
  per_step.two_qubit = 2 * j_terms;
  per_step.three_qubit = 3 * k_terms;
  if (mode == CdMode::full) {
    per_step.one_qubit += c.n + h_terms;
    per_step.two_qubit += j_terms;
    per_step.three_qubit += k_terms;
  }
  GateCounts total;
  total.one_qubit = per_step.one_qubit * sched.steps;
  total.two_qubit = per_step.two_qubit * sched.steps;
  total.three_qubit = per_step.three_qubit * sched.steps;
  total.cnot_estimate = 2 * total.two_qubit + 4 * total.three_qubit;
  return total;
}

}  // namespace

Statevector Statevector::uniform(std::size_t n) {
  check_size(n);
  Statevector s;
  s.n = n;
  const std::size_t dim = std::size_t{1} << n;
  s.amplitudes.assign(dim, cplx(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
  return s;
}

double Statevector::norm_squared() const {
  double acc = 0.0;
  for (const auto& a : amplitudes) acc += std::norm(a);
  return acc;
}

std::vector<double> Statevector::probabilities() const {
  std::vector<double> p(amplitudes.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(amplitudes[i]);
  return p;
}

double schedule_lambda(double t, double total_time) {
  const double v = std::sin(std::numbers::pi * t / (2.0 * total_time));
  const double s = std::sin(0.5 * std::numbers::pi * v * v);
  return s * s;
}

double schedule_lambda_dot(double t, double total_time) {
  const double v = std::numbers::pi * t / (2.0 * total_time);
  const double u = 0.5 * std::numbers::pi * std::sin(v) * std::sin(v);
  // d/dt sin^2(u) = sin(2u) u', u' = (pi/2) sin(2v) (pi / 2T)
  return std::sin(2.0 * u) * 0.5 * std::numbers::pi * std::sin(2.0 * v) * std::numbers::pi / (2.0 * total_time);
}

CdSchedule build_schedule(std::size_t steps, double total_time) {
  if (steps < 1) throw InvalidArgument("steps must be >= 1");
  if (!(total_time > 0.0)) throw InvalidArgument("total_time must be > 0");
  CdSchedule s;
  s.steps = steps;
  s.total_time = total_time;
  for (std::size_t m = 0; m < steps; ++m) {
    const double t = (static_cast<double>(m) + 0.5) * total_time / static_cast<double>(steps);
    s.times.push_back(t);
    s.lambda_values.push_back(schedule_lambda(t, total_time));
    s.lambda_dot_values.push_back(schedule_lambda_dot(t, total_time));
  }
  return s;
}

const char* to_string(CdMode mode) { return mode == CdMode::full ? "full" : "cd_only"; }

CdMode cd_mode_from_string(const std::string& s) {
  if (s == "full") return CdMode::full;
  if (s == "cd_only") return CdMode::cd_only;
  throw InvalidArgument("unknown mode '" + s + "' (expected full or cd_only)");
}

CdTraceSums cd_trace_sums(const HuboCoefficients& c) {
  double h2 = 0.0;
  double j2 = 0.0;
  double k2 = 0.0;
  for (double v : c.h) h2 += v * v;
  for (const auto& p : c.j_terms) j2 += p.value * p.value;
  for (const auto& t : c.k_terms) k2 += t.value * t.value;
  CdTraceSums sums;
  sums.s = h2 + 2.0 * j2 + 3.0 * k2;
  sums.a = h2 + 8.0 * j2 + 21.0 * k2;
  for (std::size_t q = 0; q < c.n; ++q) sums.g += quartic_trace(c, q);
  return sums;
}

double cd_alpha(const CdTraceSums& sums, double lambda) {
  const double denom = 4.0 * (1.0 - lambda) * (1.0 - lambda) * sums.a + 4.0 * lambda * lambda * sums.g;
  if (denom <= 0.0) return 0.0;
  return 2.0 * sums.s / denom;
}

std::vector<double> diagonal_energies(const HuboCoefficients& c) {
  check_size(c.n);
  std::vector<double> e(std::size_t{1} << c.n);
  for (std::uint64_t m = 0; m < e.size(); ++m) e[m] = energy_of_mask(c, m);
  return e;
}

std::vector<DiagonalTerm> diagonal_terms(const HuboCoefficients& c) {
  std::vector<DiagonalTerm> out;
  for (std::size_t i = 0; i < c.n; ++i) out.push_back({{i}, c.h[i]});
  for (const auto& p : c.j_terms) out.push_back({{p.i, p.j}, p.value});
  for (const auto& t : c.k_terms) out.push_back({{t.i, t.j, t.k}, t.value});
  return out;
}

void apply_phase_term(Statevector& state, const DiagonalTerm& term, double angle) {
  std::size_t mask = 0;
  for (std::size_t q : term.qubits) mask |= bit_of(state.n, q);
  const cplx plus = std::polar(1.0, -angle * term.value);
  const cplx minus = std::conj(plus);
  for (std::size_t idx = 0; idx < state.amplitudes.size(); ++idx) {
    // Z-string eigenvalue is -1 for an odd number of set bits.
    const bool odd = (std::popcount(idx & mask) & 1) != 0;
    state.amplitudes[idx] *= odd ? minus : plus;
  }
}

void apply_diagonal_phase(Statevector& state, std::span<const double> energies, double angle) {
  for (std::size_t idx = 0; idx < state.amplitudes.size(); ++idx)
    state.amplitudes[idx] *= std::polar(1.0, -angle * energies[idx]);
}

EvolutionResult evolve(const HuboCoefficients& c, const CdSchedule& sched, CdMode mode,
                       const Statevector& initial, bool adjoint) {
  c.validate();
  check_size(c.n);
  if (initial.n != c.n || initial.amplitudes.size() != (std::size_t{1} << c.n))
    throw InvalidArgument("initial state does not match n");
  if (sched.steps == 0 || sched.lambda_values.size() != sched.steps || sched.lambda_dot_values.size() != sched.steps)
    throw InvalidArgument("malformed schedule");

  // The constant only contributes a global phase.
  HuboCoefficients shifted = c;
  shifted.constant = 0.0;
  const auto energies = diagonal_energies(shifted);
  const auto sums = cd_trace_sums(c);
  const double dt = sched.dt();
  const double sign = adjoint ? -1.0 : 1.0;

  EvolutionResult out;
  out.state = initial;
  out.gates = count_gates(c, sched, mode);
  auto& s = out.state;
  auto check_norm = [&] {
    const double dev = std::abs(s.norm_squared() - 1.0);
    out.max_norm_deviation = std::max(out.max_norm_deviation, dev);
    if (dev > kNormTolerance) throw Error("internal: statevector norm drifted by " + format_g(dev, 3));
  };
  check_norm();

  auto driver = [&](double lam) {
    for (std::size_t k = 0; k < c.n; ++k) apply_driver(s, adjoint ? c.n - 1 - k : k, sign * dt * (1.0 - lam));
    check_norm();
  };
  auto phase = [&](double lam) {
    apply_diagonal_phase(s, energies, sign * dt * lam);
    check_norm();
  };
  auto cd = [&](double lam, double lam_dot) {
    const double scale = sign * dt * lam_dot * cd_alpha(sums, lam);
    for (std::size_t k = 0; k < c.n; ++k) apply_cd_qubit(s, energies, adjoint ? c.n - 1 - k : k, scale);
    check_norm();
  };

  for (std::size_t k = 0; k < sched.steps; ++k) {
    const std::size_t m = adjoint ? sched.steps - 1 - k : k;
    const double lam = sched.lambda_values[m];
    const double lam_dot = sched.lambda_dot_values[m];
    if (adjoint) {
      cd(lam, lam_dot);
      if (mode == CdMode::full) {
        phase(lam);
        driver(lam);
      }
    } else {
      if (mode == CdMode::full) {
        driver(lam);
        phase(lam);
      }
      cd(lam, lam_dot);
    }
  }
  return out;
}

EvolutionResult evolve(const HuboCoefficients& c, const CdSchedule& sched, CdMode mode) {
  check_size(c.n);
  return evolve(c, sched, mode, Statevector::uniform(c.n));
}

SampleSet evolve_and_sample(const HuboCoefficients& c, const CdSchedule& sched, std::uint64_t shots,
                            std::uint64_t seed, CdMode mode) {
  check_size(c.n);
  if (shots < 1) throw InvalidArgument("shots must be >= 1");
  const auto result = evolve(c, sched, mode);
  const auto probs = result.state.probabilities();
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
  }
  Xoshiro256 rng(seed);
  std::vector<SpinConfig> draws;
  draws.reserve(shots);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    draws.push_back(spins_from_mask(static_cast<std::uint64_t>(it - cdf.begin()), c.n));
  }
  auto out = aggregate_shots(c, std::move(draws), "dcqo", seed);
  out.metadata = {{"steps", std::to_string(sched.steps)},
                  {"total_time", format_g(sched.total_time)},
                  {"mode", to_string(mode)},
                  {"gates_1q", std::to_string(result.gates.one_qubit)},
                  {"gates_2q", std::to_string(result.gates.two_qubit)},
                  {"gates_3q", std::to_string(result.gates.three_qubit)},
                  {"cnot_estimate", std::to_string(result.gates.cnot_estimate)}};
  return out;
}

ProbeResult statevector_probe(const HuboCoefficients& c, const CdSchedule& sched, CdMode mode) {
  check_size(c.n);
  const auto result = evolve(c, sched, mode);
  const auto energies = diagonal_energies(c);
  const auto probs = result.state.probabilities();
  ProbeResult out;
  out.ground_energy = *std::min_element(energies.begin(), energies.end());
  const double tol = 1e-9 * std::max(1.0, std::abs(out.ground_energy));
  for (std::size_t i = 0; i < probs.size(); ++i) {
    out.energy_expectation += probs[i] * energies[i];
    if (energies[i] <= out.ground_energy + tol) out.ground_overlap += probs[i];
  }
  return out;
}

}  // namespace hubofs

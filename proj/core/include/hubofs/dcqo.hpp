#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hubofs/hubo.hpp"
#include "hubofs/samplers.hpp"

namespace hubofs {

inline constexpr std::size_t kMaxStatevectorQubits = 20;

/// 2^n amplitudes indexed by the x-bitstring value, feature 0 in the most
/// significant bit (so x_i = 1, i.e. Z_i = -1, sets bit n-1-i).
struct Statevector {
  std::size_t n = 0;
  std::vector<std::complex<double>> amplitudes;

  /// |+>^n, the ground state of the transverse-field driver -sum X_i.
  static Statevector uniform(std::size_t n);
  double norm_squared() const;
  std::vector<double> probabilities() const;
};

/// lambda(t) = sin^2((pi/2) sin^2(pi t / 2T)).
double schedule_lambda(double t, double total_time);
/// d lambda / dt of the same schedule; vanishes at t = 0 and t = T.
double schedule_lambda_dot(double t, double total_time);

/// Schedule sampled at step midpoints t_m = (m + 1/2) T / steps.
struct CdSchedule {
  std::size_t steps = 0;
  double total_time = 0.0;
  std::vector<double> times;
  std::vector<double> lambda_values;
  std::vector<double> lambda_dot_values;

  double dt() const { return total_time / static_cast<double>(steps); }
};

CdSchedule build_schedule(std::size_t steps, double total_time);

enum class CdMode { full, cd_only };

const char* to_string(CdMode mode);
CdMode cd_mode_from_string(const std::string& s);

/// Trace sums that fix the variational first-order nested-commutator
/// coefficient alpha(lambda) for H(lambda) = -(1-lambda) sum X + lambda H_p.
///
/// With F_q = dH_p/dZ_q and the gauge potential A = alpha * sum_q Y_q F_q:
///   alpha = 2 S / (4 (1-lambda)^2 A + 4 lambda^2 G)
///   S = sum h^2 + 2 sum J^2 + 3 sum K^2
///   A = sum h^2 + 8 sum J^2 + 21 sum K^2
///   G = sum_q tr(F_q^4) / 2^n
struct CdTraceSums {
  double s = 0.0;
  double a = 0.0;
  double g = 0.0;
};

CdTraceSums cd_trace_sums(const HuboCoefficients& c);
double cd_alpha(const CdTraceSums& sums, double lambda);

struct GateCounts {
  std::uint64_t one_qubit = 0;
  std::uint64_t two_qubit = 0;
  std::uint64_t three_qubit = 0;
  /// Hardware-style estimate: 2 CNOTs per two-body and 4 per three-body gate.
  std::uint64_t cnot_estimate = 0;
};

struct EvolutionResult {
  Statevector state;
  GateCounts gates;
  double max_norm_deviation = 0.0;
};

/// Per-step first-order Trotter layers: driver x-rotations weighted
/// (1-lambda), the diagonal target phase weighted lambda, then the CD
/// layer weighted lambda_dot * alpha(lambda). cd_only keeps the CD layer.
///
/// Each CD layer applies, for q = 0..n-1, exp(-i theta Y_q F_q); all the
/// Y_q-carrying terms of one qubit commute, so this equals applying the
/// individual h, J and K rotations of that qubit in any order.
///
/// With `adjoint` set the exact inverse circuit is applied (reverse order,
/// negated angles). Throws Error if the norm drifts by more than 1e-9.
EvolutionResult evolve(const HuboCoefficients& c, const CdSchedule& sched, CdMode mode,
                       const Statevector& initial, bool adjoint = false);

EvolutionResult evolve(const HuboCoefficients& c, const CdSchedule& sched, CdMode mode);

/// Energy of every basis state (constant included), indexed as Statevector.
std::vector<double> diagonal_energies(const HuboCoefficients& c);

/// One diagonal Z-string term of the target Hamiltonian.
struct DiagonalTerm {
  std::vector<std::size_t> qubits;
  double value = 0.0;
};

std::vector<DiagonalTerm> diagonal_terms(const HuboCoefficients& c);

/// Multiplies amplitudes by exp(-i angle * value * Z_S).
void apply_phase_term(Statevector& state, const DiagonalTerm& term, double angle);

/// Multiplies amplitudes by exp(-i angle * E(x)) using a precomputed table.
void apply_diagonal_phase(Statevector& state, std::span<const double> energies, double angle);

/// Samples `shots` basis states from |amplitude|^2 with Xoshiro256(seed)
/// (one uniform per shot, inverse-CDF over basis order). Metadata carries
/// the schedule, mode and gate counts.
SampleSet evolve_and_sample(const HuboCoefficients& c, const CdSchedule& sched, std::uint64_t shots,
                            std::uint64_t seed, CdMode mode = CdMode::full);

struct ProbeResult {
  double ground_overlap = 0.0;
  double energy_expectation = 0.0;
  double ground_energy = 0.0;
};

/// Exact final-state diagnostics: probability mass on the (possibly
/// degenerate) ground manifold and <H>.
ProbeResult statevector_probe(const HuboCoefficients& c, const CdSchedule& sched, CdMode mode = CdMode::full);

}  // namespace hubofs

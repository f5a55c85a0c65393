#include "hubofs/hubo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "hubofs/errors.hpp"

namespace hubofs {

SpinConfig::SpinConfig(std::vector<std::int8_t> spins) : spins_(std::move(spins)) {
  for (auto s : spins_)
    if (s != 1 && s != -1) throw InvalidArgument("spin values must be -1 or +1");
}

SpinConfig SpinConfig::unselected(std::size_t n) {
  return SpinConfig(std::vector<std::int8_t>(n, 1));
}

std::vector<std::uint8_t> to_binary(const SpinConfig& z) {
  std::vector<std::uint8_t> x(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) x[i] = static_cast<std::uint8_t>((1 - z[i]) / 2);
  return x;
}

SpinConfig to_spin(std::span<const std::uint8_t> x) {
  std::vector<std::int8_t> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 1) throw InvalidArgument("binary values must be 0 or 1");
    z[i] = static_cast<std::int8_t>(1 - 2 * x[i]);
  }
  return SpinConfig(std::move(z));
}

void HuboCoefficients::validate() const {
  if (h.size() != n) throw DataError("h has " + std::to_string(h.size()) + " entries, expected n=" + std::to_string(n));
  for (std::size_t t = 0; t < j_terms.size(); ++t) {
    const auto& p = j_terms[t];
    if (!(p.i < p.j && p.j < n)) throw DataError("invalid J index tuple");
    if (t > 0 && std::tie(j_terms[t - 1].i, j_terms[t - 1].j) >= std::tie(p.i, p.j))
      throw DataError("J terms must be sorted and unique");
  }
  for (std::size_t t = 0; t < k_terms.size(); ++t) {
    const auto& q = k_terms[t];
    if (!(q.i < q.j && q.j < q.k && q.k < n)) throw DataError("invalid K index tuple");
    if (t > 0 && std::tie(k_terms[t - 1].i, k_terms[t - 1].j, k_terms[t - 1].k) >= std::tie(q.i, q.j, q.k))
      throw DataError("K terms must be sorted and unique");
  }
}

double HuboCoefficients::max_abs_coefficient() const {
  double m = 0.0;
  for (double v : h) m = std::max(m, std::abs(v));
  for (const auto& p : j_terms) m = std::max(m, std::abs(p.value));
  for (const auto& q : k_terms) m = std::max(m, std::abs(q.value));
  return m;
}

std::vector<std::size_t> preselect_top_k(std::span<const double> relevance, std::size_t k) {
  if (k < 1 || k > relevance.size()) throw InvalidArgument("k must lie in [1, n]");
  std::vector<std::size_t> order(relevance.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return relevance[a] > relevance[b]; });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

NormalizedTensors normalize_global(const MiTensors& t) {
  if (t.num_values() == 0) throw InvalidArgument("normalize_global: empty tensors");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  auto see = [&](double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  for (double v : t.relevance) see(v);
  for (const auto& p : t.pairs) see(p.value);
  for (const auto& q : t.triples) see(q.value);

  NormalizedTensors out{t, lo, hi, hi == lo};
  const double span = hi - lo;
  auto map = [&](double v) {
    if (out.degenerate) return 0.0;
    return std::clamp((v - lo) / span, 0.0, 1.0);
  };
  for (double& v : out.tensors.relevance) v = map(v);
  for (auto& p : out.tensors.pairs) p.value = map(p.value);
  for (auto& q : out.tensors.triples) q.value = map(q.value);
  return out;
}

HuboCoefficients build_coefficients(const MiTensors& normalized, const HuboWeights& weights) {
  if (!(weights.w1 > 0.0 && weights.w2 > 0.0 && weights.w3 > 0.0))
    throw InvalidArgument("weights w1, w2, w3 must be positive");
  HuboCoefficients c;
  c.n = normalized.num_features();
  c.weights = weights;
  c.h.reserve(c.n);
  for (double r : normalized.relevance) c.h.push_back(weights.w1 * r);
  for (const auto& p : normalized.pairs) c.j_terms.push_back({p.i, p.j, weights.w2 * p.value});
  for (const auto& q : normalized.triples) c.k_terms.push_back({q.i, q.j, q.k, -weights.w3 * q.value});
  c.validate();
  return c;
}

double penalty_shift(double c, const PenaltyParams& params) {
  if (c >= params.tau) return 0.0;
  return -params.lambda * std::pow((params.tau - c) / params.tau, params.p);
}

HuboCoefficients apply_penalty(const HuboCoefficients& c, std::span<const double> relevance_norm,
                               const PenaltyParams& params) {
  if (c.penalty_applied) throw InvalidArgument("penalty already applied");
  if (!(params.lambda >= 0.0)) throw InvalidArgument("lambda must be >= 0");
  if (!(params.tau > 0.0 && params.tau <= 1.0)) throw InvalidArgument("tau must lie in (0,1]");
  if (!(params.p >= 1.0)) throw InvalidArgument("p must be >= 1");
  if (relevance_norm.size() != c.n) throw InvalidArgument("relevance size does not match n");
  HuboCoefficients out = c;
  for (std::size_t i = 0; i < c.n; ++i) out.h[i] += penalty_shift(relevance_norm[i], params);
  out.penalty = params;
  out.penalty_applied = true;
  return out;
}

double energy(const HuboCoefficients& c, std::span<const std::int8_t> z) {
  if (z.size() != c.n) throw InvalidArgument("configuration size does not match n");
  double e = 0.0;
  for (std::size_t i = 0; i < c.n; ++i) e += c.h[i] * z[i];
  for (const auto& p : c.j_terms) e += p.value * (z[p.i] * z[p.j]);
  for (const auto& q : c.k_terms) e += q.value * (z[q.i] * z[q.j] * z[q.k]);
  return e + c.constant;
}

double energy(const HuboCoefficients& c, const SpinConfig& z) { return energy(c, z.spins()); }

double energy_of_mask(const HuboCoefficients& c, std::uint64_t mask) {
  const std::size_t n = c.n;
  auto sign = [&](std::size_t i) { return ((mask >> (n - 1 - i)) & 1u) != 0 ? -1 : 1; };
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) e += c.h[i] * sign(i);
  for (const auto& p : c.j_terms) e += p.value * (sign(p.i) * sign(p.j));
  for (const auto& q : c.k_terms) e += q.value * (sign(q.i) * sign(q.j) * sign(q.k));
  return e + c.constant;
}

SpinConfig spins_from_mask(std::uint64_t mask, std::size_t n) {
  std::vector<std::int8_t> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = ((mask >> (n - 1 - i)) & 1u) != 0 ? -1 : 1;
  return SpinConfig(std::move(z));
}

std::uint64_t mask_from_spins(const SpinConfig& z) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < z.size(); ++i) m = (m << 1) | (z[i] < 0 ? 1u : 0u);
  return m;
}

}  // namespace hubofs

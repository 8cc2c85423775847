#pragma once

// Exact outage probability conditioned on the normalized powers, for
// Nakagami fading with an integer desired-link parameter m0 and arbitrary
// interferer parameters m_i, duty factors p_i and thermal noise.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "gzsim/channel.hpp"
#include "gzsim/errors.hpp"

namespace gzsim {

struct OutageParams {
  /// SINR threshold, linear.
  double beta = 1.0;
  /// Normalized SNR, linear. +infinity means no noise.
  double snr = 10.0;
  unsigned m0 = 3;

  void validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
    if (!(snr > 0.0)) throw DomainError("snr must be positive");
    if (m0 < 1) throw DomainError("m0 must be a positive integer");
  }

  /// Noise term z = 1/snr; exactly 0 at infinite SNR.
  double noise() const { return std::isinf(snr) ? 0.0 : 1.0 / snr; }
};

/// One interferer as seen by the closed form.
struct PsiEntry {
  double psi = 1.0;
  double omega = 0.0;
  double m = 1.0;
  double p = 0.0;
};

/// Psi_i = (beta0 * Omega_i / m_i + 1)^-1 with beta0 = beta * m0 / Omega_0.
inline PsiEntry make_psi(double beta0, double omega, double m, double p) {
  return {1.0 / (beta0 * omega / m + 1.0), omega, m, p};
}

inline std::vector<PsiEntry> psi_vector(const NormalizedPowers& powers, double beta0) {
  std::vector<PsiEntry> out;
  out.reserve(powers.size());
  for (std::size_t i = 0; i < powers.size(); ++i)
    out.push_back(make_psi(beta0, powers.interference[i], powers.nakagami_m[i], powers.duty[i]));
  return out;
}

/// G_l(Psi_i). For l > 0 the ratio Gamma(l + m) / (l! Gamma(m)) is built as
/// the product of (m + k) / (k + 1) over k < l, which cannot overflow for
/// the modest l the formula needs.
inline double g_ell(unsigned ell, const PsiEntry& e) {
  if (ell == 0) return 1.0 - e.p * (1.0 - std::pow(e.psi, e.m));
  if (e.p == 0.0 || e.omega == 0.0) return 0.0;
  double ratio = 1.0;
  for (unsigned k = 0; k < ell; ++k) ratio *= (e.m + k) / (k + 1.0);
  return e.p * ratio * std::pow(e.omega / e.m, ell) * std::pow(e.psi, e.m + ell);
}

/// H_0 .. H_{degree-1}: the coefficients of prod_i sum_l G_l(Psi_i) x^l,
/// truncated at x^(degree-1). Each interferer costs one truncated
/// convolution, so the whole vector is O(M * degree^2).
inline std::vector<double> h_coefficients(std::span<const PsiEntry> psis, unsigned degree) {
  std::vector<double> c(degree, 0.0);
  if (degree == 0) return c;
  c[0] = 1.0;
  std::vector<double> g(degree);
  std::vector<double> next(degree);
  for (const PsiEntry& e : psis) {
    for (unsigned l = 0; l < degree; ++l) g[l] = g_ell(l, e);
    for (unsigned t = 0; t < degree; ++t) {
      double acc = 0.0;
      for (unsigned l = 0; l <= t; ++l) acc += c[t - l] * g[l];
      next[t] = acc;
    }
    c.swap(next);
  }
  return c;
}

/// H_t alone. Requires t < m0 of the caller; here, any t is accepted.
inline double h_t(unsigned t, std::span<const PsiEntry> psis) {
  return h_coefficients(psis, t + 1)[t];
}

namespace detail {

/// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace detail

/// eps = 1 - exp(-beta0 z) sum_{s<m0} sum_{t<=s} beta0^s z^(s-t) H_t / (s-t)!
/// with z = 1/snr. The power of z is always the nonnegative s - t, so
/// z = 0 is exact.
inline double conditional_outage(const NormalizedPowers& powers, const OutageParams& params) {
  if (!(powers.desired > 0.0)) throw DomainError("desired power must be positive");
  if (params.m0 < 1) throw DomainError("m0 must be a positive integer");
  const double beta0 = params.beta * params.m0 / powers.desired;
  const double z = params.noise();
  const unsigned m0 = params.m0;

  const std::vector<PsiEntry> psis = psi_vector(powers, beta0);
  const std::vector<double> h = h_coefficients(psis, m0);

  std::vector<double> z_over_fact(m0);  // z^k / k!
  z_over_fact[0] = 1.0;
  for (unsigned k = 1; k < m0; ++k) z_over_fact[k] = z_over_fact[k - 1] * z / k;

  detail::CompensatedSum total;
  double beta_pow = 1.0;
  for (unsigned s = 0; s < m0; ++s) {
    detail::CompensatedSum inner;
    for (unsigned t = 0; t <= s; ++t) inner.add(z_over_fact[s - t] * h[t]);
    total.add(beta_pow * inner.value());
    beta_pow *= beta0;
  }
  const double eps = 1.0 - std::exp(-beta0 * z) * total.value();
  constexpr double slack = 1e-12;
  if (!(eps >= -slack && eps <= 1.0 + slack))
    throw NumericalInconsistency("conditional outage evaluated to " + std::to_string(eps));
  return std::clamp(eps, 0.0, 1.0);
}

}  // namespace gzsim

#pragma once

// Independent reference computations used by the tests. None of these share
// code with the library beyond plain data types.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "gzsim/channel.hpp"
#include "gzsim/outage.hpp"
#include "gzsim/spatial.hpp"

namespace gzsim::testing_support {

/// G_l straight from the gamma-function form.
inline double reference_g(unsigned ell, double psi, double omega, double m, double p) {
  if (ell == 0) return 1.0 - p * (1.0 - std::pow(psi, m));
  const double ratio = std::exp(std::lgamma(ell + m) - std::lgamma(ell + 1.0) - std::lgamma(m));
  return p * ratio * std::pow(omega / m, ell) * std::pow(psi, m + ell);
}

/// H_t by enumerating every index vector (l_1..l_M) with sum t.
inline double brute_force_h(unsigned t, const std::vector<PsiEntry>& psis) {
  const std::size_t m = psis.size();
  std::vector<unsigned> idx(m, 0);
  double total = 0.0;
  std::function<void(std::size_t, unsigned)> walk = [&](std::size_t i, unsigned remaining) {
    if (i + 1 == m) {
      idx[i] = remaining;
      double prod = 1.0;
      for (std::size_t k = 0; k < m; ++k)
        prod *= reference_g(idx[k], psis[k].psi, psis[k].omega, psis[k].m, psis[k].p);
      total += prod;
      return;
    }
    for (unsigned l = 0; l <= remaining; ++l) {
      idx[i] = l;
      walk(i + 1, remaining - l);
    }
  };
  if (m == 0) return t == 0 ? 1.0 : 0.0;
  walk(0, t);
  return total;
}

/// Active flags from a plain rescan: interferer i is on unless some earlier
/// active mobile (x0 first) is strictly closer than rg.
inline std::vector<bool> rescan_active(const NetworkRealization& net, double rg) {
  const std::size_t m = net.interferers.size();
  std::vector<bool> on(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    const Point p = net.interferers[i];
    bool blocked = std::hypot(p.x - net.transmitter.x, p.y - net.transmitter.y) < rg;
    for (std::size_t j = 0; j < i && !blocked; ++j)
      if (on[j]) blocked = std::hypot(p.x - net.interferers[j].x, p.y - net.interferers[j].y) < rg;
    on[i] = !blocked;
  }
  return on;
}

/// A random interference instance in the ranges the oracle cross-checks use.
struct Instance {
  NormalizedPowers powers;
  OutageParams params;
};

inline Instance random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(0, 10);
  std::uniform_int_distribution<int> pick3(0, 2);
  std::uniform_int_distribution<unsigned> m0(1, 4);
  std::uniform_real_distribution<double> log_omega(-1.5, 0.5);
  Instance inst;
  const double ms[] = {0.5, 1.0, 2.0};
  const double ps[] = {0.0, 0.5, 1.0};
  const int n = count(rng);
  for (int i = 0; i < n; ++i)
    inst.powers.push_back(std::pow(10.0, log_omega(rng)), ms[pick3(rng)], ps[pick3(rng)]);
  inst.powers.desired = 1.0;
  inst.params.m0 = m0(rng);
  inst.params.beta = 1.0;
  inst.params.snr = (rng() & 1) ? 10.0 : std::numeric_limits<double>::infinity();
  return inst;
}

}  // namespace gzsim::testing_support

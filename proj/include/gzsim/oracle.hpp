#pragma once

// Brute-force outage estimate: sample fading, activity and noise directly
// and count SINR <= beta. Shares no code with the closed form beyond the
// NormalizedPowers input.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "gzsim/channel.hpp"
#include "gzsim/outage.hpp"
#include "gzsim/parallel.hpp"
#include "gzsim/random.hpp"

namespace gzsim {

struct OracleConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  /// Samples per substream. Fixes the sample -> stream mapping, so the
  /// estimate does not depend on `workers`.
  std::uint64_t block = 1u << 16;
};

struct OracleEstimate {
  double probability = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

/// Unit-mean Gamma(shape m) sampler with exact fast paths for the shapes the
/// experiments use most.
class UnitGammaSampler {
 public:
  explicit UnitGammaSampler(double m) : m_(m), general_(m, 1.0 / m) {
    const double r = std::round(m);
    if (m == 0.5)
      kind_ = Kind::half;
    else if (r == m && m <= 8.0)
      kind_ = Kind::erlang;
    else
      kind_ = Kind::general;
    shape_int_ = static_cast<int>(r);
  }

  double operator()(RandomStream& rng) {
    switch (kind_) {
      case Kind::half: {
        // Z^2 is Gamma(1/2, scale 2): unit mean.
        const double z = normal_(rng);
        return z * z;
      }
      case Kind::erlang: {
        double s = 0.0;
        for (int k = 0; k < shape_int_; ++k) s -= std::log1p(-uniform01(rng));
        return s / m_;
      }
      case Kind::general:
        return general_(rng);
    }
    return 0.0;
  }

 private:
  enum class Kind { half, erlang, general };
  double m_;
  int shape_int_ = 1;
  Kind kind_ = Kind::general;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::gamma_distribution<double> general_;
};

/// Fraction of sampled SINRs at or below beta, with its binomial standard
/// error sqrt(p (1 - p) / n).
inline OracleEstimate empirical_outage(const NormalizedPowers& powers, const OutageParams& params,
                                       const OracleConfig& cfg) {
  params.validate();
  const std::uint64_t n = std::max<std::uint64_t>(cfg.samples, 1);
  const std::uint64_t block = std::max<std::uint64_t>(cfg.block, 1);
  const std::uint64_t blocks = (n + block - 1) / block;
  const double noise = params.noise();
  std::vector<std::uint64_t> outages(blocks, 0);

  parallel_for(blocks, cfg.workers, [&](std::size_t b) {
    RandomStream rng = substream(cfg.seed, b, StreamPurpose::oracle);
    UnitGammaSampler desired(static_cast<double>(params.m0));
    std::vector<UnitGammaSampler> fading;
    fading.reserve(powers.size());
    for (double m : powers.nakagami_m) fading.emplace_back(m);
    const std::uint64_t begin = b * block;
    const std::uint64_t end = std::min(n, begin + block);
    std::uint64_t count = 0;
    for (std::uint64_t s = begin; s < end; ++s) {
      const double signal = desired(rng) * powers.desired;
      double interference = noise;
      for (std::size_t i = 0; i < powers.size(); ++i) {
        const bool on = uniform01(rng) < powers.duty[i];
        if (on) interference += fading[i](rng) * powers.interference[i];
      }
      // gamma <= beta, written without dividing by a possibly-zero denominator.
      if (signal <= params.beta * interference) ++count;
    }
    outages[b] = count;
  });

  std::uint64_t total = 0;
  for (auto c : outages) total += c;
  OracleEstimate est;
  est.samples = n;
  est.probability = static_cast<double>(total) / static_cast<double>(n);
  est.std_error = std::sqrt(est.probability * (1.0 - est.probability) / static_cast<double>(n));
  return est;
}

}  // namespace gzsim

#pragma once

// Despreading, path loss and shadowing: everything that turns a placed
// network into the normalized power vector consumed by the outage formula.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <vector>

#include "gzsim/errors.hpp"
#include "gzsim/random.hpp"
#include "gzsim/spatial.hpp"

namespace gzsim {

enum class SpreadingMode {
  /// Every interferer is attenuated by the same effective gain G_e.
  fixed_effective_gain,
  /// G_i = G / h(tau_i) with tau_i uniform over a chip (rectangular chips).
  random_chip_offset,
};

/// Per-interferer quantities default to the scalar; the vectors, when
/// non-empty, override them and must have one entry per interferer.
struct ChannelConfig {
  double path_loss_exponent = 3.5;
  double shadowing_db = 0.0;
  /// Far-field reference distance d0. Distances below it are clamped to it.
  /// Zero disables the clamp.
  double reference_distance = 0.0;
  SpreadingMode spreading = SpreadingMode::fixed_effective_gain;
  double effective_gain = 1.0;
  double processing_gain = 32.0;
  double power_ratio = 1.0;
  double duty_factor = 0.5;
  double nakagami_m = 1.0;
  std::vector<double> power_ratios;
  std::vector<double> duty_factors;
  std::vector<double> nakagami_ms;

  double power_ratio_of(std::size_t i) const {
    return power_ratios.empty() ? power_ratio : power_ratios[i];
  }
  double duty_factor_of(std::size_t i) const {
    return duty_factors.empty() ? duty_factor : duty_factors[i];
  }
  double nakagami_m_of(std::size_t i) const {
    return nakagami_ms.empty() ? nakagami_m : nakagami_ms[i];
  }

  void validate(std::size_t interferers) const {
    if (!(path_loss_exponent >= 2.0)) throw DomainError("path_loss_exponent must be >= 2");
    if (!(shadowing_db >= 0.0)) throw DomainError("shadowing_db must be >= 0");
    if (!(reference_distance >= 0.0)) throw DomainError("reference_distance must be >= 0");
    if (spreading == SpreadingMode::fixed_effective_gain && !(effective_gain > 0.0))
      throw DomainError("effective_gain must be positive");
    if (spreading == SpreadingMode::random_chip_offset && !(processing_gain > 0.0))
      throw DomainError("processing_gain must be positive");
    auto check_size = [interferers](const std::vector<double>& v, const char* name) {
      if (!v.empty() && v.size() != interferers)
        throw DomainError(std::string(name) + " must have one entry per interferer");
    };
    check_size(power_ratios, "power_ratios");
    check_size(duty_factors, "duty_factors");
    check_size(nakagami_ms, "nakagami_ms");
    for (std::size_t i = 0; i < interferers; ++i) {
      const double p = duty_factor_of(i);
      if (!(p >= 0.0 && p <= 1.0)) throw DomainError("duty factor must lie in [0, 1]");
      if (!(nakagami_m_of(i) > 0.0)) throw DomainError("nakagami m must be positive");
      if (!(power_ratio_of(i) >= 0.0)) throw DomainError("power ratio must be nonnegative");
    }
  }
};

/// Normalized powers of one realization, with the fading parameter and
/// duty factor of each interferer kept alongside. A silenced interferer
/// keeps its power but carries duty factor 0.
struct NormalizedPowers {
  double desired = 1.0;
  std::vector<double> interference;
  std::vector<double> nakagami_m;
  std::vector<double> duty;

  std::size_t size() const { return interference.size(); }

  void push_back(double omega, double m, double p) {
    interference.push_back(omega);
    nakagami_m.push_back(m);
    duty.push_back(p);
  }

  /// Copy without interferer i.
  NormalizedPowers without(std::size_t i) const {
    NormalizedPowers out = *this;
    out.interference.erase(out.interference.begin() + static_cast<std::ptrdiff_t>(i));
    out.nakagami_m.erase(out.nakagami_m.begin() + static_cast<std::ptrdiff_t>(i));
    out.duty.erase(out.duty.begin() + static_cast<std::ptrdiff_t>(i));
    return out;
  }
};

/// (d/d0)^-alpha, held at 1 inside the reference distance.
inline double path_loss(double d, double alpha, double d0) {
  if (!(d > 0.0)) throw DomainError("path_loss: distance must be positive");
  if (!(d0 > 0.0)) throw DomainError("path_loss: reference distance must be positive");
  if (d <= d0) return 1.0;
  return std::pow(d / d0, -alpha);
}

/// Despreading attenuation of an asynchronous interferer with rectangular
/// chips: h(tau) = (tau^2 + (Tc - tau)^2) / Tc^2, which lies in [1/2, 1].
inline double chip_function(double tau, double chip_duration = 1.0) {
  if (!(chip_duration > 0.0)) throw DomainError("chip_function: chip duration must be positive");
  if (!(tau >= 0.0 && tau < chip_duration))
    throw DomainError("chip_function: offset must lie in [0, Tc)");
  const double a = tau / chip_duration;
  const double b = 1.0 - a;
  return a * a + b * b;
}

/// Random quantities of one realization that are not geometry: the shadowing
/// normals (index 0 is the desired link) and the chip phases tau/Tc.
/// Both are stored unscaled so one draw can be reused across sigma and G.
struct ChannelDraw {
  std::vector<double> shadow_normal;
  std::vector<double> chip_phase;
};

inline ChannelDraw draw_channel(std::size_t interferers, RandomStream& rng) {
  ChannelDraw d;
  std::normal_distribution<double> normal(0.0, 1.0);
  d.shadow_normal.resize(interferers + 1);
  for (double& z : d.shadow_normal) z = normal(rng);
  d.chip_phase.resize(interferers);
  for (double& u : d.chip_phase) u = uniform01(rng);
  return d;
}

/// Gain G_i for interferer i given the chip phase drawn for it.
inline double interferer_gain(const ChannelConfig& config, double chip_phase) {
  if (config.spreading == SpreadingMode::fixed_effective_gain) return config.effective_gain;
  return config.processing_gain / chip_function(chip_phase);
}

/// Per-interferer gains G_i for `interferers` mobiles, drawing fresh chip
/// offsets in random mode.
inline std::vector<double> effective_gain(const ChannelConfig& config, std::size_t interferers,
                                          RandomStream& rng) {
  std::vector<double> gains(interferers);
  for (double& g : gains) {
    g = config.spreading == SpreadingMode::fixed_effective_gain
            ? config.effective_gain
            : interferer_gain(config, uniform01(rng));
  }
  return gains;
}

/// Received power scale for a link of length d: max(d, d0)^-alpha.
inline double link_attenuation(double d, const ChannelConfig& config) {
  if (!(d > 0.0)) throw DomainError("link distance must be positive");
  return std::pow(std::max(d, config.reference_distance), -config.path_loss_exponent);
}

inline double shadow_factor(double normal, double sigma_db) {
  return sigma_db == 0.0 ? 1.0 : std::pow(10.0, sigma_db * normal / 10.0);
}

/// Normalized powers for a placed (and possibly thinned) network using a
/// pre-drawn channel state.
inline NormalizedPowers normalized_powers(const NetworkRealization& net,
                                          const ChannelConfig& config,
                                          const ChannelDraw& draw) {
  const std::size_t m = net.interferers.size();
  NormalizedPowers out;
  out.interference.reserve(m);
  out.nakagami_m.reserve(m);
  out.duty.reserve(m);
  const double sigma = config.shadowing_db;
  out.desired = shadow_factor(draw.shadow_normal[0], sigma) *
                link_attenuation(net.geometry.tx_distance, config);
  for (std::size_t i = 0; i < m; ++i) {
    const double gain = interferer_gain(config, draw.chip_phase[i]);
    const double omega = config.power_ratio_of(i) / gain *
                         shadow_factor(draw.shadow_normal[i + 1], sigma) *
                         link_attenuation(net.interferer_distance(i), config);
    const double p = net.active[i] ? config.duty_factor_of(i) : 0.0;
    out.push_back(omega, config.nakagami_m_of(i), p);
  }
  return out;
}

/// Normalized powers with a fresh shadowing and chip-offset draw.
inline NormalizedPowers normalized_powers(const NetworkRealization& net,
                                          const ChannelConfig& config, RandomStream& rng) {
  return normalized_powers(net, config, draw_channel(net.interferers.size(), rng));
}

}  // namespace gzsim

#pragma once

// Spatial averaging over Monte Carlo ensembles and the network-level
// metrics derived from it.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "gzsim/channel.hpp"
#include "gzsim/errors.hpp"
#include "gzsim/outage.hpp"
#include "gzsim/parallel.hpp"
#include "gzsim/random.hpp"
#include "gzsim/spatial.hpp"

namespace gzsim {

enum class TcEstimator {
  /// (1 - mean eps) * mean density.
  product_of_means,
  /// mean over realizations of (1 - eps_n) * density_n.
  mean_of_products,
};

enum class LatencyModel {
  /// Ts [N/(1-e) - (1-e)(N-1)].
  closed_form,
  /// Ts [1 + N e / (1-e)]: the mean slot index of first success when a
  /// failed attempt is repeated N slots later.
  renewal,
};

/// Average latency in units of the slot duration `slot`.
inline double latency(double eps_bar, double slot, unsigned arq_interval,
                      LatencyModel model = LatencyModel::closed_form) {
  if (!(eps_bar >= 0.0 && eps_bar < 1.0))
    throw DomainError("latency: average outage must lie in [0, 1)");
  if (arq_interval < 1) throw DomainError("latency: ARQ interval must be at least 1 slot");
  const double n = arq_interval;
  const double success = 1.0 - eps_bar;
  if (model == LatencyModel::renewal) return slot * (1.0 + n * eps_bar / success);
  return slot * (n / success - success * (n - 1.0));
}

/// A fixed set of placed networks plus their channel draws. Evaluating many
/// channel or guard-zone settings on one ensemble gives common random
/// numbers across the settings.
struct Ensemble {
  NetworkGeometry geometry;
  std::vector<NetworkRealization> networks;
  std::vector<ChannelDraw> draws;

  std::size_t size() const { return networks.size(); }
};

/// Realization n uses substream n of `seed`: placement first, then the
/// channel draw.
inline Ensemble generate_ensemble(const NetworkGeometry& geometry, std::size_t count,
                                  std::uint64_t seed, unsigned workers = 1) {
  if (count < 1) throw DomainError("ensemble needs at least one network");
  geometry.validate();
  Ensemble ens;
  ens.geometry = geometry;
  ens.networks.resize(count);
  ens.draws.resize(count);
  parallel_for(count, workers, [&](std::size_t n) {
    RandomStream rng = substream(seed, n);
    ens.networks[n] = place_network(geometry, rng);
    ens.draws[n] = draw_channel(geometry.interferers, rng);
  });
  return ens;
}

struct EvaluationOptions {
  /// Guard radius for CSMA thinning; nullopt leaves every interferer active.
  std::optional<double> guard_radius;
  TcEstimator tc_estimator = TcEstimator::product_of_means;
  LatencyModel latency_model = LatencyModel::closed_form;
  unsigned arq_interval = 6;
  bool retain_samples = false;
  unsigned workers = 1;
};

struct ExperimentResult {
  double eps_bar = 0.0;
  double eps_std_err = 0.0;
  /// Mean number of active interferers (the reference transmitter excluded).
  double mean_active = 0.0;
  /// Active mobiles per unit area, the reference transmitter included.
  double density = 0.0;
  /// Transmission capacity over link throughput, tau / b.
  double tc_over_b = 0.0;
  /// Average latency in slots; +inf when every realization is in outage.
  double latency_slots = 1.0;
  std::size_t networks = 0;
  std::vector<double> samples;
};

inline double network_area(const NetworkGeometry& g) {
  return std::numbers::pi * g.net_radius * g.net_radius;
}

/// Outage of every realization of `ens` under the given channel and
/// thinning, reduced in index order.
inline ExperimentResult evaluate(const Ensemble& ens, const ChannelConfig& channel,
                                 const OutageParams& outage, const EvaluationOptions& opts = {}) {
  channel.validate(ens.geometry.interferers);
  outage.validate();
  if (opts.guard_radius && *opts.guard_radius < ens.geometry.exclusion_radius)
    throw DomainError("guard radius must be at least the exclusion radius");
  const std::size_t count = ens.size();
  std::vector<double> eps(count);
  std::vector<double> active(count);
  parallel_for(count, opts.workers, [&](std::size_t n) {
    const NetworkRealization& base = ens.networks[n];
    if (opts.guard_radius) {
      const NetworkRealization thinned = apply_guard_zones(base, *opts.guard_radius);
      eps[n] = conditional_outage(normalized_powers(thinned, channel, ens.draws[n]), outage);
      active[n] = static_cast<double>(thinned.active_count());
    } else {
      eps[n] = conditional_outage(normalized_powers(base, channel, ens.draws[n]), outage);
      active[n] = static_cast<double>(base.active_count());
    }
  });

  const double area = network_area(ens.geometry);
  detail::CompensatedSum eps_sum, active_sum, product_sum;
  for (std::size_t n = 0; n < count; ++n) {
    eps_sum.add(eps[n]);
    active_sum.add(active[n]);
    product_sum.add((1.0 - eps[n]) * (active[n] + 1.0));
  }
  const double cnt = static_cast<double>(count);
  ExperimentResult r;
  r.networks = count;
  r.eps_bar = std::clamp(eps_sum.value() / cnt, 0.0, 1.0);
  detail::CompensatedSum sq;
  for (double e : eps) sq.add((e - r.eps_bar) * (e - r.eps_bar));
  r.eps_std_err = count > 1 ? std::sqrt(sq.value() / (cnt - 1.0) / cnt) : 0.0;
  r.mean_active = active_sum.value() / cnt;
  r.density = (r.mean_active + 1.0) / area;
  r.tc_over_b = opts.tc_estimator == TcEstimator::product_of_means
                    ? (1.0 - r.eps_bar) * r.density
                    : product_sum.value() / cnt / area;
  r.latency_slots = r.eps_bar < 1.0
                        ? latency(r.eps_bar, 1.0, opts.arq_interval, opts.latency_model)
                        : std::numeric_limits<double>::infinity();
  if (opts.retain_samples) r.samples = std::move(eps);
  return r;
}

struct MonteCarloSpec {
  std::size_t networks = 10000;
  NetworkGeometry geometry;
  ChannelConfig channel;
  OutageParams outage;
  bool thinning = true;
  std::uint64_t seed = 1;
  EvaluationOptions options;
};

/// Place, thin (optionally), shadow and evaluate `spec.networks` networks.
inline ExperimentResult average_outage(const MonteCarloSpec& spec) {
  const Ensemble ens =
      generate_ensemble(spec.geometry, spec.networks, spec.seed, spec.options.workers);
  EvaluationOptions opts = spec.options;
  opts.guard_radius = spec.thinning ? std::optional<double>(spec.geometry.guard_radius)
                                    : std::nullopt;
  return evaluate(ens, spec.channel, spec.outage, opts);
}

/// tau = (1 - eps_bar) * lambda * b, lambda counting the reference
/// transmitter and every active interferer.
inline double transmission_capacity(const ExperimentResult& result,
                                    const NetworkGeometry& geometry, double link_throughput = 1.0) {
  const double lambda = (result.mean_active + 1.0) / network_area(geometry);
  return (1.0 - result.eps_bar) * lambda * link_throughput;
}

enum class SearchMethod { grid, bisection };

struct GuardSearchOptions {
  SearchMethod method = SearchMethod::grid;
  /// Candidate radii for grid search; ascending. Empty means 200 equal steps
  /// from the exclusion radius to `upper`.
  std::vector<double> grid;
  /// Largest radius tried. Zero means the network radius.
  double upper = 0.0;
  /// Bisection stops once the bracket is narrower than this.
  double resolution = 1e-3;
  /// Bisection also stops as soon as a midpoint lands in
  /// [target - below, target + above].
  double band_below = 1e-4;
  double band_above = 1e-3;
};

/// Smallest guard radius whose average outage on `ens` is at most `target`.
inline double min_guard_radius(double target, const Ensemble& ens, const ChannelConfig& channel,
                               const OutageParams& outage, GuardSearchOptions search = {},
                               EvaluationOptions opts = {}) {
  const double lower = ens.geometry.exclusion_radius;
  const double upper = search.upper > 0.0 ? search.upper : ens.geometry.net_radius;
  auto eps_at = [&](double rg) {
    opts.guard_radius = rg;
    return evaluate(ens, channel, outage, opts).eps_bar;
  };
  if (eps_at(lower) <= target) return lower;

  if (search.method == SearchMethod::grid) {
    std::vector<double> grid = search.grid;
    if (grid.empty()) {
      constexpr int steps = 200;
      for (int k = 1; k <= steps; ++k) grid.push_back(lower + (upper - lower) * k / steps);
    }
    for (double rg : grid) {
      if (rg < lower) continue;
      if (eps_at(rg) <= target) return rg;
    }
    throw TargetUnachievable("average outage target " + std::to_string(target) +
                             " not met on the guard-radius grid");
  }

  if (eps_at(upper) > target)
    throw TargetUnachievable("average outage target " + std::to_string(target) +
                             " not met even at guard radius " + std::to_string(upper));
  double lo = lower;
  double hi = upper;
  while (hi - lo > search.resolution) {
    const double mid = 0.5 * (lo + hi);
    const double e = eps_at(mid);
    if (e >= target - search.band_below && e <= target + search.band_above) return mid;
    if (e <= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

struct GainSearchOptions {
  double max_gain = 1e6;
  /// Relative width of the final bracket.
  double relative_resolution = 1e-3;
};

/// Smallest effective spreading gain G_e >= 1 whose transmission capacity
/// (over b) on `ens` with guard radius `guard` (nullopt: no CSMA) reaches
/// `target`. Transmission capacity is nondecreasing in G_e on a fixed
/// ensemble, so bisection on log G_e is exact up to the resolution.
inline double min_spreading_gain(double target, const Ensemble& ens, ChannelConfig channel,
                                 const OutageParams& outage, std::optional<double> guard,
                                 GainSearchOptions search = {}, EvaluationOptions opts = {}) {
  channel.spreading = SpreadingMode::fixed_effective_gain;
  opts.guard_radius = guard;
  auto tc_at = [&](double gain) {
    channel.effective_gain = gain;
    return evaluate(ens, channel, outage, opts).tc_over_b;
  };
  if (tc_at(1.0) >= target) return 1.0;
  if (tc_at(search.max_gain) < target)
    throw TargetUnachievable("transmission capacity target " + std::to_string(target) +
                             " not reachable with gain up to " + std::to_string(search.max_gain));
  double lo = 1.0;
  double hi = search.max_gain;
  while (hi / lo > 1.0 + search.relative_resolution) {
    const double mid = std::sqrt(lo * hi);
    if (tc_at(mid) >= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace gzsim

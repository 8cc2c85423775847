#pragma once

// Network realizations: uniform clustering with exclusion zones, and
// order-of-placement CSMA guard-zone deactivation.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "gzsim/errors.hpp"
#include "gzsim/random.hpp"

namespace gzsim {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline double norm(Point p) { return std::hypot(p.x, p.y); }

/// Geometry of a circular network of radius `net_radius` centred on the
/// origin. Lengths may be in any unit, but the channel model reads them
/// literally (see ChannelConfig), so the unit also fixes what SNR means.
struct NetworkGeometry {
  double net_radius = 1.0;
  double exclusion_radius = 0.0;
  double guard_radius = 0.0;
  Point receiver{};
  double tx_distance = 1.0 / 6.0;
  std::size_t interferers = 30;
  /// Redraws allowed per mobile before placement is declared infeasible.
  std::size_t max_redraws = 10000;

  /// Receiver on the rim at (net_radius, 0).
  static Point perimeter_receiver(double net_radius) { return {net_radius, 0.0}; }

  bool receiver_at_center() const { return receiver.x == 0.0 && receiver.y == 0.0; }

  /// Throws DomainError naming the first violated constraint.
  void validate() const {
    if (!(net_radius > 0.0) || !std::isfinite(net_radius))
      throw DomainError("net_radius must be positive and finite");
    if (!(exclusion_radius >= 0.0))
      throw DomainError("exclusion_radius must be nonnegative");
    if (!(guard_radius >= exclusion_radius))
      throw DomainError("guard_radius must be at least exclusion_radius");
    if (!(tx_distance > 0.0))
      throw DomainError("tx_distance must be positive");
    if (tx_distance < exclusion_radius)
      throw DomainError("tx_distance must be at least exclusion_radius");
    if (!std::isfinite(receiver.x) || !std::isfinite(receiver.y) ||
        norm(receiver) > net_radius * (1.0 + 1e-12))
      throw DomainError("receiver must lie inside the network");
    if (!receiver_at_center() && tx_distance > norm(receiver) + net_radius)
      throw DomainError("tx_distance places the transmitter outside the network");
    if (receiver_at_center() && tx_distance > net_radius)
      throw DomainError("tx_distance places the transmitter outside the network");
  }
};

/// One placed network. `interferers` is in placement order, which is also
/// the order in which guard zones are resolved.
struct NetworkRealization {
  NetworkGeometry geometry;
  Point transmitter;
  std::vector<Point> interferers;
  std::vector<bool> active;

  std::size_t active_count() const {
    std::size_t n = 0;
    for (bool a : active) n += a ? 1 : 0;
    return n;
  }

  /// Distance from interferer i to the reference receiver.
  double interferer_distance(std::size_t i) const {
    return distance(interferers[i], geometry.receiver);
  }
};

namespace detail {

inline Point uniform_in_disk(double radius, RandomStream& rng) {
  const double r = radius * std::sqrt(uniform01(rng));
  const double theta = 2.0 * std::numbers::pi * uniform01(rng);
  return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace detail

/// Uniform clustering. The reference transmitter is placed first: toward
/// the centre when the receiver is off-centre, in a uniform direction when
/// it sits at the centre. Each interferer is then drawn uniformly in the
/// disk and redrawn until it clears the exclusion zone of every mobile
/// already placed, the receiver and transmitter included.
inline NetworkRealization place_network(const NetworkGeometry& geometry, RandomStream& rng) {
  geometry.validate();
  NetworkRealization net;
  net.geometry = geometry;

  const Point rx = geometry.receiver;
  if (geometry.receiver_at_center()) {
    const double theta = 2.0 * std::numbers::pi * uniform01(rng);
    net.transmitter = {geometry.tx_distance * std::cos(theta),
                       geometry.tx_distance * std::sin(theta)};
  } else {
    const double scale = 1.0 - geometry.tx_distance / norm(rx);
    net.transmitter = {rx.x * scale, rx.y * scale};
  }

  const double rex = geometry.exclusion_radius;
  const double rex2 = rex * rex;
  auto clear_of = [rex2](Point a, Point b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy >= rex2;
  };

  net.interferers.reserve(geometry.interferers);
  for (std::size_t i = 0; i < geometry.interferers; ++i) {
    std::size_t attempts = 0;
    for (;;) {
      const Point candidate = detail::uniform_in_disk(geometry.net_radius, rng);
      bool ok = true;
      if (rex > 0.0) {
        ok = clear_of(candidate, rx) && clear_of(candidate, net.transmitter);
        for (std::size_t j = 0; ok && j < net.interferers.size(); ++j)
          ok = clear_of(candidate, net.interferers[j]);
      }
      if (ok) {
        net.interferers.push_back(candidate);
        break;
      }
      if (++attempts >= geometry.max_redraws) throw PlacementInfeasible(i + 1, attempts);
    }
  }
  net.active.assign(geometry.interferers, true);
  return net;
}

/// CSMA deactivation with an explicit guard radius. The transmitter is
/// active first; interferer i is silenced iff it lies strictly inside the
/// guard radius of an active mobile placed before it. The receiver has no
/// guard zone. Incoming flags are ignored, so the result is idempotent.
inline NetworkRealization apply_guard_zones(NetworkRealization net, double guard_radius) {
  const double rg2 = guard_radius * guard_radius;
  auto inside = [rg2](Point a, Point b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy < rg2;
  };
  net.geometry.guard_radius = guard_radius;
  std::vector<Point> active_points;
  active_points.reserve(net.interferers.size() + 1);
  active_points.push_back(net.transmitter);
  net.active.assign(net.interferers.size(), false);
  for (std::size_t i = 0; i < net.interferers.size(); ++i) {
    bool silenced = false;
    for (const Point& a : active_points) {
      if (inside(net.interferers[i], a)) {
        silenced = true;
        break;
      }
    }
    if (!silenced) {
      net.active[i] = true;
      active_points.push_back(net.interferers[i]);
    }
  }
  return net;
}

/// Deactivation using the realization's own guard radius.
inline NetworkRealization apply_guard_zones(NetworkRealization net) {
  const double rg = net.geometry.guard_radius;
  return apply_guard_zones(std::move(net), rg);
}

}  // namespace gzsim

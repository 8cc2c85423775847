#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "gzsim/random.hpp"
#include "gzsim/spatial.hpp"
#include "support.hpp"

using namespace gzsim;

namespace {

NetworkGeometry unit_disk(double rex, std::size_t m = 30) {
  NetworkGeometry g;
  g.net_radius = 1.0;
  g.tx_distance = 1.0 / 6.0;
  g.exclusion_radius = rex;
  g.guard_radius = rex;
  g.interferers = m;
  return g;
}

std::vector<Point> all_mobiles(const NetworkRealization& net) {
  std::vector<Point> pts{net.geometry.receiver, net.transmitter};
  pts.insert(pts.end(), net.interferers.begin(), net.interferers.end());
  return pts;
}

}  // namespace

TEST(Placement, EmptyInterfererSet) {
  auto rng = substream(3, 0);
  const auto net = place_network(unit_disk(0.0, 0), rng);
  EXPECT_TRUE(net.interferers.empty());
  EXPECT_NEAR(distance(net.transmitter, net.geometry.receiver), 1.0 / 6.0, 1e-15);
}

TEST(Placement, HardCoreSpacingHoldsInEveryDraw) {
  const auto g = unit_disk(1.0 / 12.0);
  for (std::uint64_t n = 0; n < 10000; ++n) {
    auto rng = substream(11, n);
    const auto net = place_network(g, rng);
    ASSERT_EQ(net.interferers.size(), 30u);
    const auto pts = all_mobiles(net);
    double min_d = INFINITY;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      EXPECT_LE(norm(pts[i]), 1.0 + 1e-12);
      for (std::size_t j = i + 1; j < pts.size(); ++j) min_d = std::min(min_d, distance(pts[i], pts[j]));
    }
    ASSERT_GE(min_d, 1.0 / 12.0) << "draw " << n;
  }
}

TEST(Placement, PerimeterReceiverPutsTransmitterTowardCentre) {
  NetworkGeometry g = unit_disk(0.0);
  g.receiver = NetworkGeometry::perimeter_receiver(1.0);
  auto rng = substream(5, 0);
  const auto net = place_network(g, rng);
  EXPECT_NEAR(net.transmitter.x, 1.0 - 1.0 / 6.0, 1e-15);
  EXPECT_EQ(net.transmitter.y, 0.0);
}

TEST(Placement, InfeasibleSpacingNamesTheMobile) {
  NetworkGeometry g = unit_disk(0.9, 5);
  g.tx_distance = 0.9;
  g.max_redraws = 50;
  auto rng = substream(1, 0);
  try {
    place_network(g, rng);
    FAIL() << "expected PlacementInfeasible";
  } catch (const PlacementInfeasible& e) {
    EXPECT_GE(e.mobile(), 1u);
  }
}

TEST(Placement, GeometryValidation) {
  NetworkGeometry g = unit_disk(0.0);
  g.tx_distance = 2.0;
  auto rng = substream(1, 0);
  EXPECT_THROW(place_network(g, rng), DomainError);
  g = unit_disk(0.0);
  g.net_radius = -1.0;
  EXPECT_THROW(place_network(g, rng), DomainError);
}

// Annular-sector occupancy with 5 equal-area rings by 8 sectors; the 1%
// critical value of chi-square with 39 degrees of freedom is 62.43.
TEST(Placement, UniformAtZeroExclusion) {
  constexpr int rings = 5;
  constexpr int sectors = 8;
  std::array<int, rings * sectors> cells{};
  int total = 0;
  for (std::uint64_t n = 0; n < 2000; ++n) {
    auto rng = substream(21, n);
    const auto net = place_network(unit_disk(0.0), rng);
    for (const Point& p : net.interferers) {
      const double r2 = p.x * p.x + p.y * p.y;
      const int ring = std::min(rings - 1, static_cast<int>(r2 * rings));
      double theta = std::atan2(p.y, p.x);
      if (theta < 0) theta += 2 * std::numbers::pi;
      const int sector = std::min(sectors - 1, static_cast<int>(theta / (2 * std::numbers::pi) * sectors));
      ++cells[ring * sectors + sector];
      ++total;
    }
  }
  const double expected = static_cast<double>(total) / cells.size();
  double chi2 = 0.0;
  for (int c : cells) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 62.43);
}

TEST(GuardZones, FarApartStayActive) {
  NetworkRealization net;
  net.geometry = unit_disk(0.0, 3);
  net.transmitter = {0.1, 0.0};
  net.interferers = {{0.9, 0.0}, {-0.9, 0.0}, {0.0, 0.9}};
  net.active = {false, false, false};
  const auto out = apply_guard_zones(net, 0.25);
  EXPECT_EQ(out.active, (std::vector<bool>{true, true, true}));
}

TEST(GuardZones, DominatedByTransmitter) {
  NetworkRealization net;
  net.geometry = unit_disk(0.0, 3);
  net.transmitter = {0.0, 0.0};
  net.interferers = {{0.1, 0.0}, {-0.1, 0.0}, {0.0, 0.1}};
  net.active.assign(3, true);
  EXPECT_EQ(apply_guard_zones(net, 0.5).active_count(), 0u);
}

TEST(GuardZones, BoundaryDistanceIsNotInside) {
  NetworkRealization net;
  net.geometry = unit_disk(0.0, 1);
  net.transmitter = {0.0, 0.0};
  net.interferers = {{0.5, 0.0}};
  net.active = {true};
  EXPECT_TRUE(apply_guard_zones(net, 0.5).active[0]);
}

TEST(GuardZones, ReceiverHasNoGuardZone) {
  NetworkRealization net;
  net.geometry = unit_disk(0.0, 1);
  net.transmitter = {0.9, 0.0};
  net.interferers = {{0.01, 0.0}};
  net.active = {true};
  EXPECT_TRUE(apply_guard_zones(net, 0.5).active[0]);
}

TEST(GuardZones, InvariantsOverRandomNetworks) {
  const auto g = unit_disk(1.0 / 12.0);
  for (double rg : {1.0 / 12.0, 0.25, 0.5}) {
    double mean_active = 0.0;
    double mean_rescan = 0.0;
    for (std::uint64_t n = 0; n < 2000; ++n) {
      auto rng = substream(31, n);
      const auto base = place_network(g, rng);
      const auto net = apply_guard_zones(base, rg);

      // Independent rescan agrees flag for flag.
      const auto oracle = testing_support::rescan_active(base, rg);
      ASSERT_EQ(net.active, oracle);
      mean_active += net.active_count();
      for (bool b : oracle) mean_rescan += b;

      // Soundness: active mobiles, x0 included, are pairwise at least rg apart.
      std::vector<Point> on{net.transmitter};
      for (std::size_t i = 0; i < net.interferers.size(); ++i)
        if (net.active[i]) on.push_back(net.interferers[i]);
      for (std::size_t i = 0; i < on.size(); ++i)
        for (std::size_t j = i + 1; j < on.size(); ++j) ASSERT_GE(distance(on[i], on[j]), rg);

      // Maximality in order: each silenced mobile sits inside an earlier active one's zone.
      for (std::size_t i = 0; i < net.interferers.size(); ++i) {
        if (net.active[i]) continue;
        bool covered = distance(net.interferers[i], net.transmitter) < rg;
        for (std::size_t j = 0; j < i && !covered; ++j)
          covered = net.active[j] && distance(net.interferers[i], net.interferers[j]) < rg;
        ASSERT_TRUE(covered);
      }

      // Idempotence.
      ASSERT_EQ(apply_guard_zones(net, rg).active, net.active);

      if (rg == g.exclusion_radius) {
        ASSERT_EQ(net.active_count(), net.interferers.size());
      }
    }
    EXPECT_EQ(mean_active, mean_rescan);
  }
}

TEST(GuardZones, ZeroRadiusKeepsEveryone) {
  auto rng = substream(2, 0);
  const auto net = place_network(unit_disk(0.0), rng);
  EXPECT_EQ(apply_guard_zones(net, 0.0).active_count(), 30u);
}

#include <cmath>
#include <complex>
#include <set>

#include "doctest.h"
#include "risread/constellation.hpp"

using namespace risread;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("ring layout for M=16") {
  const auto rings = ring_layout(16);
  REQUIRE(rings.size() == 2);
  CHECK(rings[0].phase_count == 4);
  CHECK(rings[1].phase_count == 12);
  CHECK(rings[0].initial_offset == doctest::Approx(kPi / 8).epsilon(1e-15));
  CHECK(rings[1].initial_offset == doctest::Approx(kPi / 24).epsilon(1e-15));
  // On-levels K/4 and K.
  CHECK(rings[0].on_fraction == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(rings[1].on_fraction == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("ring layout for M=64 matches the (7r-4)/24 rule") {
  const auto rings = ring_layout(64);
  REQUIRE(rings.size() == 4);
  for (int r = 1; r <= 4; ++r) {
    CHECK(rings[r - 1].phase_count == 4 * (2 * r - 1));
    CHECK(rings[r - 1].on_fraction ==
          doctest::Approx((7.0 * r - 4.0) / 24.0).epsilon(1e-15));
  }
  // K_1 for K=80: (7-4)*80/24 = 10.
  CHECK(rings[0].on_fraction * 80 == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("ring layout for M=256 matches the (15r-8)/112 rule") {
  const auto rings = ring_layout(256);
  REQUIRE(rings.size() == 8);
  int total_phases = 0;
  for (int r = 1; r <= 8; ++r) {
    CHECK(rings[r - 1].on_fraction ==
          doctest::Approx((15.0 * r - 8.0) / 112.0).epsilon(1e-15));
    total_phases += rings[r - 1].phase_count;
  }
  CHECK(total_phases == 256);  // 4*(1+3+...+15)
}

TEST_CASE("ring layout accepts any 4R^2 and rejects the rest") {
  CHECK(ring_layout(4).size() == 1);
  CHECK(ring_layout(4)[0].on_fraction == doctest::Approx(1.0));
  const auto r36 = ring_layout(36);  // R=3: (5r-3)/12
  REQUIRE(r36.size() == 3);
  CHECK(r36[0].on_fraction == doctest::Approx(2.0 / 12).epsilon(1e-15));
  CHECK(r36[1].on_fraction == doctest::Approx(7.0 / 12).epsilon(1e-15));
  CHECK(r36[2].on_fraction == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(ring_layout(8), std::invalid_argument);
  CHECK_THROWS_AS(ring_layout(20), std::invalid_argument);
  CHECK_THROWS_AS(ring_layout(0), std::invalid_argument);
  CHECK_THROWS_AS(ring_layout(-16), std::invalid_argument);
}

TEST_CASE("ris constellation amplitudes, amplitude-level convention") {
  const Constellation c = ris_constellation(16, 80, 1.0, RingLevel::Amplitude);
  REQUIRE(c.symbols.size() == 16);
  CHECK(c.order == 16);
  CHECK(c.element_count == 80);
  // Inner ring K_r=20: |alpha| = 20/sqrt(80); outer K_r=80: sqrt(80).
  const double inner = 20.0 / std::sqrt(80.0);
  const double outer = std::sqrt(80.0);
  for (int m = 0; m < 4; ++m)
    CHECK(std::abs(c.symbols[m]) == doctest::Approx(inner).epsilon(1e-13));
  for (int m = 4; m < 16; ++m)
    CHECK(std::abs(c.symbols[m]) == doctest::Approx(outer).epsilon(1e-13));
}

TEST_CASE("ris constellation amplitudes, intensity-level convention") {
  const Constellation c = ris_constellation(16, 80, 1.0, RingLevel::Intensity);
  // |alpha| = sqrt(K_r): sqrt(20) inner, sqrt(80) outer.
  CHECK(std::abs(c.symbols[0]) ==
        doctest::Approx(std::sqrt(20.0)).epsilon(1e-13));
  CHECK(std::abs(c.symbols[15]) ==
        doctest::Approx(std::sqrt(80.0)).epsilon(1e-13));
}

TEST_CASE("ris constellation phases and ordering") {
  const Constellation c = ris_constellation(16, 80, 2.0, RingLevel::Amplitude);
  // Ring-major ordering: symbols 1..4 on ring 1, 5..16 on ring 2.
  CHECK(c.ring_of[0] == 1);
  CHECK(c.ring_of[3] == 1);
  CHECK(c.ring_of[4] == 2);
  CHECK(c.phase_slot_of[4] == 1);
  CHECK(std::arg(c.symbols[0]) == doctest::Approx(kPi / 8).epsilon(1e-13));
  CHECK(std::arg(c.symbols[1]) ==
        doctest::Approx(kPi / 8 + kPi / 2).epsilon(1e-13));
  CHECK(std::arg(c.symbols[4]) == doctest::Approx(kPi / 24).epsilon(1e-13));
  CHECK(std::arg(c.symbols[5]) ==
        doctest::Approx(kPi / 24 + 2 * kPi / 12).epsilon(1e-13));
  // Scaling alpha0 scales every amplitude linearly.
  const Constellation half = ris_constellation(16, 80, 1.0,
                                               RingLevel::Amplitude);
  for (int m = 0; m < 16; ++m)
    CHECK(std::abs(c.symbols[m]) ==
          doctest::Approx(2 * std::abs(half.symbols[m])).epsilon(1e-13));
}

TEST_CASE("all symbols distinct for supported orders") {
  for (int order : {16, 64, 256}) {
    const Constellation c =
        ris_constellation(order, 4 * order, 1.0, RingLevel::Intensity);
    REQUIRE(static_cast<int>(c.symbols.size()) == order);
    std::set<std::pair<double, double>> seen;
    for (const auto& s : c.symbols) seen.insert({s.real(), s.imag()});
    CHECK(static_cast<int>(seen.size()) == order);
  }
}

TEST_CASE("psk constellation") {
  const Constellation b = psk_constellation(2, 1.0);
  REQUIRE(b.symbols.size() == 2);
  CHECK(b.symbols[0].real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b.symbols[1].real() == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(b.symbols[1].imag()) < 1e-15);

  const Constellation q = psk_constellation(4, 2.5);
  for (int m = 0; m < 4; ++m) {
    CHECK(std::abs(q.symbols[m]) == doctest::Approx(2.5).epsilon(1e-15));
    const double want = 2 * kPi * m / 4;
    const double got = std::arg(q.symbols[m]);
    CHECK(std::abs(std::remainder(got - want, 2 * kPi)) < 1e-13);
  }

  // Minimum pairwise distance of unit 16-PSK: 2 sin(pi/16).
  const Constellation p16 = psk_constellation(16, 1.0);
  double min_dist = 1e300;
  for (int a = 0; a < 16; ++a)
    for (int b2 = a + 1; b2 < 16; ++b2)
      min_dist = std::min(min_dist, std::abs(p16.symbols[a] - p16.symbols[b2]));
  CHECK(min_dist == doctest::Approx(2 * std::sin(kPi / 16)).epsilon(1e-12));

  CHECK_THROWS_AS(psk_constellation(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(psk_constellation(4, -1.0), std::invalid_argument);
}

TEST_CASE("ris constellation rejects bad inputs") {
  CHECK_THROWS_AS(ris_constellation(16, 0, 1.0, RingLevel::Amplitude),
                  std::invalid_argument);
  CHECK_THROWS_AS(ris_constellation(16, 80, 0.0, RingLevel::Amplitude),
                  std::invalid_argument);
  CHECK_THROWS_AS(ris_constellation(12, 80, 1.0, RingLevel::Amplitude),
                  std::invalid_argument);
}

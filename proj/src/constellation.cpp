#include "risread/constellation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace risread {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

int ring_count_for(int order) {
  if (order < 4) throw std::invalid_argument("order must be at least 4");
  const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order)) / 2.0));
  if (r < 1 || 4 * r * r != order)
    throw std::invalid_argument("order " + std::to_string(order) +
                                " is not 4*R^2 for a positive integer R");
  return r;
}

}  // namespace

std::vector<RingLayout> ring_layout(int order) {
  const int rings = ring_count_for(order);
  std::vector<RingLayout> out;
  out.reserve(rings);
  for (int r = 1; r <= rings; ++r) {
    RingLayout ring;
    ring.ring_index = r;
    ring.phase_count = 4 * (2 * r - 1);
    ring.initial_offset = kPi / (2.0 * ring.phase_count);
    // Linear ramp in r that lands on the published levels: {1/4, 1} for two
    // rings, (7r-4)/24 for four, (15r-8)/112 for eight. A single ring is
    // fully ON.
    ring.on_fraction =
        rings == 1 ? 1.0
                   : (static_cast<double>((2 * rings - 1) * r - rings)) /
                         (2.0 * rings * (rings - 1));
    out.push_back(ring);
  }
  return out;
}

Constellation ris_constellation(int order, int element_count,
                                double source_amplitude, RingLevel level) {
  if (element_count <= 0)
    throw std::invalid_argument("element count must be positive");
  if (source_amplitude <= 0)
    throw std::invalid_argument("source amplitude must be positive");

  Constellation c;
  c.order = order;
  c.element_count = element_count;
  c.source_amplitude = source_amplitude;
  c.level = level;
  c.rings = ring_layout(order);
  c.symbols.reserve(order);
  c.ring_of.reserve(order);
  c.phase_slot_of.reserve(order);

  const double k = static_cast<double>(element_count);
  for (const RingLayout& ring : c.rings) {
    const double k_r = ring.on_fraction * k;
    const double mag = level == RingLevel::Amplitude
                           ? (k_r / std::sqrt(k)) * source_amplitude
                           : std::sqrt(k_r) * source_amplitude;
    for (int slot = 1; slot <= ring.phase_count; ++slot) {
      const double phase =
          ring.initial_offset + 2.0 * kPi * (slot - 1) / ring.phase_count;
      c.symbols.push_back(std::polar(mag, phase));
      c.ring_of.push_back(ring.ring_index);
      c.phase_slot_of.push_back(slot);
    }
  }
  return c;
}

Constellation psk_constellation(int order, double amplitude) {
  if (order < 2) throw std::invalid_argument("order must be at least 2");
  if (amplitude <= 0)
    throw std::invalid_argument("amplitude must be positive");

  Constellation c;
  c.order = order;
  c.element_count = 0;
  c.source_amplitude = amplitude;
  c.symbols.reserve(order);
  c.ring_of.reserve(order);
  c.phase_slot_of.reserve(order);
  for (int m = 0; m < order; ++m) {
    c.symbols.push_back(std::polar(amplitude, 2.0 * kPi * m / order));
    c.ring_of.push_back(1);
    c.phase_slot_of.push_back(m + 1);
  }
  return c;
}

}  // namespace risread

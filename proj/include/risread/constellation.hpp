#pragma once

#include <complex>
#include <vector>

namespace risread {

// One amplitude ring of the RIS constellation. Rings are indexed from 1
// outward; ring r carries 4(2r-1) phase slots so M = 4R^2 symbols total.
struct RingLayout {
  int ring_index = 0;          // r, 1-based
  int phase_count = 0;         // l_r = 4(2r-1)
  double initial_offset = 0;   // psi_{0,r} = pi / (2 l_r)
  double on_fraction = 0;      // K_r / K, in (0,1]; outermost ring is 1
};

// How the per-ring ON level K_r maps to the symbol amplitude.
//   Amplitude: |alpha| = (K_r / sqrt(K)) * alpha_0   (coherent-gain reading)
//   Intensity: |alpha| = sqrt(K_r) * alpha_0         (|alpha|^2 proportional to K_r)
enum class RingLevel { Amplitude, Intensity };

struct Constellation {
  int order = 0;          // M
  int element_count = 0;  // K; 0 for PSK
  double source_amplitude = 0;
  RingLevel level = RingLevel::Amplitude;
  std::vector<std::complex<double>> symbols;  // ring-major, phase-minor
  std::vector<RingLayout> rings;              // empty for PSK
  std::vector<int> ring_of;                   // per symbol, 1-based
  std::vector<int> phase_slot_of;             // per symbol, 1-based
};

// Ring decomposition for order M = 4R^2. Throws std::invalid_argument when
// sqrt(M)/2 is not a positive integer.
std::vector<RingLayout> ring_layout(int order);

// Ring constellation driven by a K-element surface. on_fraction * K gives the
// continuous ON level K_r; no rounding is applied.
Constellation ris_constellation(int order, int element_count,
                                double source_amplitude,
                                RingLevel level = RingLevel::Amplitude);

// Equal-amplitude phase-shift-keying reference at phases 2*pi*m/M.
Constellation psk_constellation(int order, double amplitude);

}  // namespace risread

#pragma once

#include <complex>
#include <cstdint>

#include "risread/constellation.hpp"
#include "risread/rng.hpp"

namespace risread {

struct PeEstimate {
  double p_e = 0;
  uint64_t trials = 0;
  uint64_t errors = 0;
  double ci_low = 0;   // Wilson score interval, 95%
  double ci_high = 0;
};

// Wilson score interval around errors/trials; always contains the point
// estimate and stays inside [0,1].
PeEstimate wilson_estimate(uint64_t errors, uint64_t trials);

// One heterodyne outcome: attenuated symbol plus the supplied noise draw.
// The noise convention is circularly symmetric with unit total variance
// (1/2 per quadrature); pass 0 for a noiseless probe.
inline std::complex<double> heterodyne_sample(std::complex<double> symbol,
                                              double efficiency,
                                              std::complex<double> noise) {
  return std::sqrt(efficiency) * symbol + noise;
}

// Unit-total-variance circular Gaussian draw.
inline std::complex<double> circular_gaussian(rng::Stream& stream) {
  double z0, z1;
  stream.gaussian_pair(z0, z1);
  constexpr double kHalfSqrt2 = 0.70710678118654752440;  // sqrt(1/2)
  return {z0 * kHalfSqrt2, z1 * kHalfSqrt2};
}

// Minimum-distance rule over the attenuated constellation; ties resolve to
// the lowest symbol index.
int min_distance_decide(std::complex<double> outcome, const Constellation& c,
                        double efficiency);

// Monte Carlo symbol error probability of the heterodyne receiver under a
// uniform symbol prior. Deterministic in (seed, trials); worker_count only
// shards the loop.
PeEstimate sql_error_probability(const Constellation& c, double efficiency,
                                 uint64_t trials, uint64_t seed,
                                 int workers = 1, bool noiseless = false);

}  // namespace risread

#include "risread/classical_rx.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "risread/util.hpp"

namespace risread {

PeEstimate wilson_estimate(uint64_t errors, uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  if (errors > trials) throw std::invalid_argument("errors exceed trials");
  constexpr double z = 1.959963984540054;  // two-sided 95%
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double rad =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  PeEstimate est;
  est.p_e = p;
  est.trials = trials;
  est.errors = errors;
  // center - rad is 0 (resp. 1) in exact arithmetic at the boundary counts;
  // pin them so roundoff cannot leak a spurious open interval.
  est.ci_low = errors == 0 ? 0.0 : std::max(0.0, center - rad);
  est.ci_high = errors == trials ? 1.0 : std::min(1.0, center + rad);
  return est;
}

int min_distance_decide(std::complex<double> outcome, const Constellation& c,
                        double efficiency) {
  if (c.symbols.empty()) throw std::invalid_argument("empty constellation");
  const double root = std::sqrt(efficiency);
  int best = 0;
  double best_d2 = 0;
  for (size_t m = 0; m < c.symbols.size(); ++m) {
    const std::complex<double> diff = outcome - root * c.symbols[m];
    const double d2 = diff.real() * diff.real() + diff.imag() * diff.imag();
    if (m == 0 || d2 < best_d2) {
      best = static_cast<int>(m);
      best_d2 = d2;
    }
  }
  return best;
}

PeEstimate sql_error_probability(const Constellation& c, double efficiency,
                                 uint64_t trials, uint64_t seed, int workers,
                                 bool noiseless) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  if (efficiency <= 0 || efficiency > 1)
    throw std::invalid_argument("efficiency must lie in (0,1]");

  const uint64_t m_count = c.symbols.size();
  std::vector<uint8_t> wrong(trials, 0);
  parallel_for(trials, workers, [&](uint64_t i) {
    rng::Stream pick(rng::stream_seed(seed, 0, i, rng::kLaneSymbol));
    const int truth = static_cast<int>(pick.bounded(m_count));
    std::complex<double> noise{0.0, 0.0};
    if (!noiseless) {
      rng::Stream det(rng::stream_seed(seed, 0, i, rng::kLaneNoise));
      noise = circular_gaussian(det);
    }
    const auto outcome =
        heterodyne_sample(c.symbols[truth], efficiency, noise);
    wrong[i] = min_distance_decide(outcome, c, efficiency) != truth ? 1 : 0;
  });

  uint64_t errors = 0;
  for (uint64_t i = 0; i < trials; ++i) errors += wrong[i];
  return wilson_estimate(errors, trials);
}

}  // namespace risread

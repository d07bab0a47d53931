#include "risread/optics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace risread {

double geometric_efficiency(const ChannelGeometry& g, double wavelength) {
  if (g.l_ris <= 0 || g.a_tx <= 0 || g.a_rx <= 0 || g.z0 <= 0 || g.z1 <= 0 ||
      wavelength <= 0)
    throw std::invalid_argument("geometry values must all be positive");
  const double l2 = g.l_ris * g.l_ris;
  const double numer = l2 * l2 * g.a_tx * g.a_rx;
  const double lam2 = wavelength * wavelength;
  const double denom = lam2 * lam2 * (g.z0 * g.z0) * (g.z1 * g.z1);
  return std::min(1.0, numer / denom);
}

std::vector<double> default_efficiencies(int count, double central,
                                         double other) {
  if (count < 1) throw std::invalid_argument("mode count must be at least 1");
  std::vector<double> out(count, other);
  out[0] = central;
  return out;
}

std::vector<ModeSpec> mode_set(int count, double total_photons,
                               const std::vector<double>& efficiencies) {
  if (count < 1) throw std::invalid_argument("mode count must be at least 1");
  if (total_photons <= 0)
    throw std::invalid_argument("total photon number must be positive");
  if (static_cast<int>(efficiencies.size()) < count)
    throw std::invalid_argument("efficiency table shorter than mode count");

  const double amp = std::sqrt(total_photons / count);
  std::vector<ModeSpec> modes(count);
  for (int s = 0; s < count; ++s) {
    if (efficiencies[s] <= 0 || efficiencies[s] > 1)
      throw std::invalid_argument("efficiency must lie in (0,1]");
    modes[s].mode_index = s + 1;
    modes[s].source_amplitude = amp;
    modes[s].efficiency = efficiencies[s];
  }
  return modes;
}

namespace {

// |a|^2 + |b|^2 - 2 V |a||b| cos(arg a - arg b), computed with a dot product
// so that a == b under V = 1 cancels to exactly zero in floating point.
double interference_bracket(std::complex<double> a, std::complex<double> b,
                            double visibility) {
  const double na = a.real() * a.real() + a.imag() * a.imag();
  const double nb = b.real() * b.real() + b.imag() * b.imag();
  const double dot = a.real() * b.real() + a.imag() * b.imag();
  return std::max(0.0, na + nb - 2.0 * visibility * dot);
}

}  // namespace

double displaced_rate(std::complex<double> symbol, std::complex<double> lo,
                      double visibility, double efficiency,
                      double symbol_duration) {
  if (visibility < 0 || visibility > 1)
    throw std::invalid_argument("visibility must lie in [0,1]");
  if (efficiency <= 0 || efficiency > 1)
    throw std::invalid_argument("efficiency must lie in (0,1]");
  if (symbol_duration <= 0)
    throw std::invalid_argument("symbol duration must be positive");
  return efficiency / symbol_duration *
         interference_bracket(symbol, lo, visibility);
}

double deviation_metric(std::complex<double> symbol, std::complex<double> lo,
                        double visibility, int mode_count,
                        double symbol_duration) {
  if (mode_count < 1) throw std::invalid_argument("mode count must be at least 1");
  if (symbol_duration <= 0)
    throw std::invalid_argument("symbol duration must be positive");
  return static_cast<double>(mode_count) / symbol_duration *
         interference_bracket(symbol, lo, visibility);
}

}  // namespace risread

#pragma once

#include <complex>
#include <vector>

namespace risread {

// One spectral mode of the probe. efficiency is the end-to-end xi*eta product
// actually applied to the detected rate; wavelength is carried for the
// geometry path and is 0 when efficiencies are specified directly.
struct ModeSpec {
  int mode_index = 0;  // 1-based
  double wavelength = 0;
  double source_amplitude = 0;  // alpha_0 = sqrt(n_0 / S)
  double efficiency = 0;        // xi * eta, in (0,1]
};

struct ChannelGeometry {
  double l_ris = 0;  // RIS side length (m)
  double a_tx = 0;   // transmitter aperture area (m^2)
  double a_rx = 0;   // receiver aperture area (m^2)
  double z0 = 0;     // source-to-RIS range (m)
  double z1 = 0;     // RIS-to-receiver range (m)
};

// Free-space collection efficiency, clamped to 1 in the near-field regime.
double geometric_efficiency(const ChannelGeometry& geometry, double wavelength);

// Per-mode xi*eta table: the central mode gets `central`, the rest `other`.
std::vector<double> default_efficiencies(int count, double central = 0.66,
                                         double other = 0.46);

// Equal-power split of n_0 total photons across `count` modes.
std::vector<ModeSpec> mode_set(int count, double total_photons,
                               const std::vector<double>& efficiencies);

// Mean photon count per symbol slot, divided by T: the detector click rate
// after displacing the incoming symbol by the local oscillator guess.
// visibility models imperfect mode overlap of the interference.
double displaced_rate(std::complex<double> symbol, std::complex<double> lo,
                      double visibility, double efficiency,
                      double symbol_duration);

// Residual mean photon number between the estimate and the true symbol,
// normalized by the per-mode time share T/S; diagnostic for trajectories.
double deviation_metric(std::complex<double> symbol, std::complex<double> lo,
                        double visibility, int mode_count,
                        double symbol_duration);

}  // namespace risread

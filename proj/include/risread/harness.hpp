#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "risread/classical_rx.hpp"
#include "risread/constellation.hpp"
#include "risread/optics.hpp"
#include "risread/quantum_rx.hpp"

namespace risread {

enum class Scheme { RisQuantum, RisSql, PskSql };

// What the n0 axis means: the source intensity before the RIS redirection
// (default), or the mean photon number of the constellation after it.
enum class NConvention { Source, PostRis };

// One experiment: fixed receiver configuration plus four parameter grids, of
// which at most one may hold more than a single value.
struct ExperimentSpec {
  Scheme scheme = Scheme::RisQuantum;
  int order = 16;                      // M
  int mode_count = 1;                  // S (singleton of s_grid)
  int element_count = 80;              // K (singleton of k_grid)
  double visibility = 0.997;
  RingLevel ring_level = RingLevel::Intensity;
  NConvention n_convention = NConvention::Source;
  double efficiency_central = 0.66;
  double efficiency_other = 0.46;
  double time_bin_divisor = 10;        // tau_bar = T / divisor
  double feedback_delay_us = 1;
  int max_steps = 200;
  double accel_threshold = 0.99;
  Retention retention = Retention::WholePosterior;
  // Durations are stored in microseconds, exactly as configured, so that a
  // manifest echo reparses to bit-identical values; they are converted to
  // seconds once at the simulation boundary.
  std::vector<double> n0_grid{1.5};
  std::vector<int> k_grid;             // empty: use element_count
  std::vector<double> t_grid_us{1000};
  std::vector<int> s_grid;             // empty: use mode_count
  uint64_t trials = 1000;
  uint64_t master_seed = 1;
  int trajectory_trials = 0;           // per-trial step logs kept for this many
  double heatmap_bin_us = 1;

  size_t grid_size() const;
  void validate() const;  // throws std::invalid_argument
};

// Fully resolved scalar parameters of one grid point.
struct RunPoint {
  Scheme scheme;
  int order, mode_count, element_count;
  double visibility, n0, t_us;
  double symbol_duration() const { return t_us * 1e-6; }
};

RunPoint resolve_point(const ExperimentSpec& spec, size_t grid_index);

// Signal constellation seen by the receiver at one grid point.
Constellation build_signal_constellation(const ExperimentSpec& spec,
                                         const RunPoint& pt);

struct SweepRow {
  Scheme scheme;
  int order = 0, mode_count = 0, element_count = 0;
  double visibility = 0, n0 = 0, t_us = 0;
  uint64_t trials = 0, errors = 0;
  double p_e = 0, ci_low = 0, ci_high = 0;
  double data_rate_bps = 0;
  double mean_steps = 0;
  double wall_seconds = 0;  // excluded from CSV output; see manifest
};

struct TrajectoryCurves {
  size_t trials = 0;
  std::vector<double> mean_max_pr, mean_true_pr, mean_deviation;
};

struct HeatmapCell {
  int step = 0;
  double bin_low = 0;  // seconds, low edge
  uint64_t count = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<TrialRecord> trajectories;  // only when trajectory_trials > 0
  TrajectoryCurves curves;
  std::vector<HeatmapCell> heatmap;
};

// (1 - p_e) * log2(M) / T, bits per second.
double data_rate(double p_e, int order, double symbol_duration);

// Monte Carlo error probability at one grid point. Bit-deterministic in
// (spec, grid_index); the worker count only shards the trial loop.
SweepRow estimate_pe(const ExperimentSpec& spec, size_t grid_index,
                     int workers,
                     std::vector<TrialRecord>* trajectories = nullptr);

SweepResult sweep(const ExperimentSpec& spec, int workers);

// Per-step means across trials; shorter trials carry their terminal values
// forward so every curve spans the longest trial.
TrajectoryCurves aggregate_trajectories(const std::vector<TrialRecord>& recs);

// Per-step histogram of shot durations (observation span plus feedback
// delay), from trials that kept step logs.
std::vector<HeatmapCell> elapsed_histogram(const std::vector<TrialRecord>& recs,
                                           double bin_width);

std::string scheme_name(Scheme s);

}  // namespace risread

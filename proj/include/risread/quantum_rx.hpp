#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "risread/constellation.hpp"
#include "risread/optics.hpp"
#include "risread/rng.hpp"

namespace risread {

// Thrown when every hypothesis ends up with zero posterior weight. Cannot
// happen with visibility < 1 (all rates stay positive); with visibility = 1
// it flags a genuinely contradictory click instead of silently renormalizing.
class degenerate_evidence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Which posterior survives a step as the next prior: the full posterior of
// the selected mode (default), or an element-wise max across modes
// (renormalized), kept for comparison runs.
enum class Retention { WholePosterior, ElementwiseMax };

struct ReceiverParams {
  double symbol_duration = 0;    // T, seconds
  double time_bin = 0;           // tau_bar; <= 0 means T/10
  double feedback_delay = 1e-6;  // detector-blind dead time after each shot
  int max_steps = 200;
  double visibility = 1.0;
  double accel_threshold = 0.99;  // past this fraction of T, first-photon mode
  Retention retention = Retention::WholePosterior;

  double resolved_time_bin() const {
    return time_bin > 0 ? time_bin : symbol_duration / 10.0;
  }
};

// First-photon outcome of one mode over one shot.
struct DetectionEvent {
  int mode_index = 0;   // 1-based
  bool clicked = false;
  double click_time = 0;  // in (0, window] when clicked
  double window = 0;      // observed span when not clicked
};

struct StepLog {
  double t = 0;            // elapsed after the shot, clamped to T
  int lo_index = 0;        // symbol driving the next shot
  double max_pr = 0;       // retained posterior maximum
  double true_pr = 0;      // retained posterior at the true symbol
  double deviation = 0;    // residual rate between next LO and the truth
  double shot_elapsed = 0; // observation span plus feedback delay
  int clicks = 0;          // across modes in this shot
};

struct ClickLog {
  int step = 0;
  int mode_index = 0;  // 1-based
  double click_time = 0;
};

struct TrialRecord {
  int true_index = 0;
  int decision = 0;
  bool correct = false;
  int steps_used = 0;
  int total_clicks = 0;
  uint64_t likelihood_evals = 0;
  std::vector<double> final_posterior;
  std::vector<StepLog> steps;    // filled only when trajectories are kept
  std::vector<ClickLog> clicks;  // likewise
};

struct PosteriorState {
  std::vector<std::vector<double>> per_mode;  // S rows of M probabilities
  std::vector<double> retained;               // prior for the next shot
  std::complex<double> lo;
  int lo_symbol = 0;
  int lo_mode = 0;
  double elapsed = 0;
  int step = 0;
};

// First click of a Poisson process at `rate` watched for `window` seconds;
// no draw is consumed when the rate is zero (never clicks).
std::optional<double> sample_first_click(double rate, double window,
                                         rng::Stream& stream);

// Arrival-time likelihood of one event for one candidate symbol.
double click_likelihood(std::complex<double> candidate,
                        std::complex<double> lo, const ModeSpec& mode,
                        const DetectionEvent& event,
                        const ReceiverParams& params);

// Bayes update, computed in log space and renormalized once. Entries of
// `likelihoods` may be zero; throws degenerate_evidence_error when the
// prior-likelihood product vanishes everywhere.
std::vector<double> posterior_update(const std::vector<double>& prior,
                                     const std::vector<double>& likelihoods);

struct LoChoice {
  std::complex<double> lo;
  int symbol_index = 0;
  int mode_index = 0;              // 0-based
  std::vector<double> retained;    // full posterior of the selected mode
};

// Picks the next displacement: per-mode MAP symbol, then the mode with the
// highest MAP weight. Ties resolve to the lowest index.
LoChoice select_lo(const std::vector<std::vector<double>>& per_mode,
                   const Constellation& c);

// One full symbol slot of the adaptive receiver. `mode_streams` holds one
// detector stream per mode. Per-step logs are recorded only when
// keep_trajectory is set; decisions are unaffected.
TrialRecord run_symbol(int true_index, const Constellation& c,
                       const std::vector<ModeSpec>& modes,
                       const ReceiverParams& params,
                       std::span<rng::Stream> mode_streams,
                       bool keep_trajectory = false);

// Non-adaptive single-mode variant: a fixed LO per shot, full windows, and
// optional quantization of click times into sub-bins. Small instances of
// this receiver admit exhaustive enumeration, which the tests exploit.
struct FixedSchedule {
  std::vector<int> lo_indices;  // symbol index per shot
  double window = 0;            // each shot observes exactly this span
  int quantize_bins = 0;        // 0 keeps continuous click times
};

struct ScheduledResult {
  std::vector<double> posterior;
  std::vector<int> outcomes;  // per shot: 0 = no click, else 1-based sub-bin
};

ScheduledResult run_symbol_scheduled(int true_index, const Constellation& c,
                                     const ModeSpec& mode,
                                     const FixedSchedule& schedule,
                                     double visibility, double symbol_duration,
                                     rng::Stream& stream);

// Log probability that the first click of a Poisson process at `rate` falls
// in sub-bin `bin` (1-based) of `bins` equal slices of `window`; bin 0 is the
// no-click outcome. Shared by the scheduled receiver and its tests.
double log_bin_probability(double rate, int bin, int bins, double window);

}  // namespace risread

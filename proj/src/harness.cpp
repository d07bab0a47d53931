#include "risread/harness.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>

#include "risread/util.hpp"

namespace risread {

namespace {

size_t axis_len(const std::vector<double>& g) { return g.empty() ? 1 : g.size(); }
size_t axis_len(const std::vector<int>& g) { return g.empty() ? 1 : g.size(); }

}  // namespace

size_t ExperimentSpec::grid_size() const {
  return std::max(
      {axis_len(n0_grid), axis_len(k_grid), axis_len(t_grid_us),
       axis_len(s_grid)});
}

void ExperimentSpec::validate() const {
  int wide = 0;
  wide += axis_len(n0_grid) > 1;
  wide += axis_len(k_grid) > 1;
  wide += axis_len(t_grid_us) > 1;
  wide += axis_len(s_grid) > 1;
  if (wide > 1)
    throw std::invalid_argument("at most one sweep axis may hold several values");
  if (scheme != Scheme::RisQuantum) {
    const bool single_mode =
        (s_grid.empty() && mode_count == 1) ||
        (s_grid.size() == 1 && s_grid[0] == 1);
    if (!single_mode)
      throw std::invalid_argument("heterodyne baselines are single-mode only");
  }
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  if (visibility < 0 || visibility > 1)
    throw std::invalid_argument("visibility must lie in [0,1]");
  if (efficiency_central <= 0 || efficiency_central > 1 ||
      efficiency_other <= 0 || efficiency_other > 1)
    throw std::invalid_argument("efficiencies must lie in (0,1]");
  if (time_bin_divisor <= 0)
    throw std::invalid_argument("time bin divisor must be positive");
  if (feedback_delay_us < 0)
    throw std::invalid_argument("feedback delay must be nonnegative");
  if (max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
  if (accel_threshold <= 0 || accel_threshold > 1)
    throw std::invalid_argument("accel threshold must lie in (0,1]");
  if (heatmap_bin_us <= 0)
    throw std::invalid_argument("heatmap bin width must be positive");
  if (trajectory_trials < 0)
    throw std::invalid_argument("trajectory trial count must be nonnegative");
  for (double v : n0_grid)
    if (v <= 0) throw std::invalid_argument("n0 must be positive");
  for (double v : t_grid_us)
    if (v <= 0) throw std::invalid_argument("symbol duration must be positive");
  for (int v : k_grid)
    if (v <= 0) throw std::invalid_argument("element count must be positive");
  for (int v : s_grid)
    if (v < 1) throw std::invalid_argument("mode count must be at least 1");
  if (scheme == Scheme::PskSql) {
    if (order < 2) throw std::invalid_argument("order must be at least 2");
  } else {
    ring_layout(order);  // rejects orders that are not 4*R^2
  }
}

RunPoint resolve_point(const ExperimentSpec& spec, size_t grid_index) {
  if (grid_index >= spec.grid_size())
    throw std::out_of_range("grid index out of range");
  auto pick_d = [&](const std::vector<double>& g, double scalar) {
    if (g.empty()) return scalar;
    return g.size() == 1 ? g[0] : g[grid_index];
  };
  auto pick_i = [&](const std::vector<int>& g, int scalar) {
    if (g.empty()) return scalar;
    return g.size() == 1 ? g[0] : g[grid_index];
  };
  RunPoint pt;
  pt.scheme = spec.scheme;
  pt.order = spec.order;
  pt.visibility = spec.visibility;
  pt.n0 = pick_d(spec.n0_grid, 1.5);
  pt.t_us = pick_d(spec.t_grid_us, 1000.0);
  pt.element_count = pick_i(spec.k_grid, spec.element_count);
  pt.mode_count = pick_i(spec.s_grid, spec.mode_count);
  return pt;
}

Constellation build_signal_constellation(const ExperimentSpec& spec,
                                         const RunPoint& pt) {
  const double per_mode_photons = pt.n0 / pt.mode_count;
  if (pt.scheme == Scheme::PskSql)
    return psk_constellation(pt.order, std::sqrt(per_mode_photons));

  double alpha0 = std::sqrt(per_mode_photons);
  if (spec.n_convention == NConvention::PostRis) {
    const Constellation unit =
        ris_constellation(pt.order, pt.element_count, 1.0, spec.ring_level);
    double mean2 = 0;
    for (const auto& s : unit.symbols)
      mean2 += s.real() * s.real() + s.imag() * s.imag();
    mean2 /= unit.symbols.size();
    alpha0 = std::sqrt(per_mode_photons / mean2);
  }
  return ris_constellation(pt.order, pt.element_count, alpha0, spec.ring_level);
}

double data_rate(double p_e, int order, double symbol_duration) {
  if (symbol_duration <= 0)
    throw std::invalid_argument("symbol duration must be positive");
  if (p_e < 0 || p_e > 1) throw std::invalid_argument("p_e must lie in [0,1]");
  return (1.0 - p_e) * std::log2(static_cast<double>(order)) / symbol_duration;
}

SweepRow estimate_pe(const ExperimentSpec& spec, size_t grid_index,
                     int workers, std::vector<TrialRecord>* trajectories) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunPoint pt = resolve_point(spec, grid_index);
  const Constellation c = build_signal_constellation(spec, pt);
  const uint64_t point_seed = rng::derive(spec.master_seed, grid_index);

  SweepRow row;
  row.scheme = pt.scheme;
  row.order = pt.order;
  row.mode_count = pt.mode_count;
  row.element_count = pt.scheme == Scheme::PskSql ? 0 : pt.element_count;
  row.visibility = pt.visibility;
  row.n0 = pt.n0;
  row.t_us = pt.t_us;
  row.trials = spec.trials;

  if (pt.scheme != Scheme::RisQuantum) {
    const PeEstimate est = sql_error_probability(
        c, spec.efficiency_central, spec.trials, point_seed, workers);
    row.errors = est.errors;
    row.p_e = est.p_e;
    row.ci_low = est.ci_low;
    row.ci_high = est.ci_high;
    row.mean_steps = 1;
  } else {
    ReceiverParams params;
    params.symbol_duration = pt.symbol_duration();
    params.time_bin = params.symbol_duration / spec.time_bin_divisor;
    params.feedback_delay = spec.feedback_delay_us * 1e-6;
    params.max_steps = spec.max_steps;
    params.visibility = pt.visibility;
    params.accel_threshold = spec.accel_threshold;
    params.retention = spec.retention;

    const auto modes = mode_set(
        pt.mode_count, pt.n0,
        default_efficiencies(pt.mode_count, spec.efficiency_central,
                             spec.efficiency_other));

    const uint64_t keep = trajectories
                              ? std::min<uint64_t>(spec.trajectory_trials,
                                                   spec.trials)
                              : 0;
    if (trajectories) trajectories->resize(keep);

    std::vector<uint8_t> wrong(spec.trials, 0);
    std::vector<uint32_t> steps(spec.trials, 0);
    parallel_for(spec.trials, workers, [&](uint64_t i) {
      rng::Stream pick(rng::stream_seed(point_seed, 0, i, rng::kLaneSymbol));
      const int truth = static_cast<int>(pick.bounded(c.symbols.size()));
      std::vector<rng::Stream> streams;
      streams.reserve(pt.mode_count);
      for (int s = 0; s < pt.mode_count; ++s)
        streams.emplace_back(
            rng::stream_seed(point_seed, 0, i, rng::kLaneMode0 + s));
      const bool keep_this = i < keep;
      TrialRecord rec =
          run_symbol(truth, c, modes, params, streams, keep_this);
      wrong[i] = rec.correct ? 0 : 1;
      steps[i] = rec.steps_used;
      if (keep_this) (*trajectories)[i] = std::move(rec);
    });

    uint64_t errors = 0;
    uint64_t total_steps = 0;
    for (uint64_t i = 0; i < spec.trials; ++i) {
      errors += wrong[i];
      total_steps += steps[i];
    }
    const PeEstimate est = wilson_estimate(errors, spec.trials);
    row.errors = est.errors;
    row.p_e = est.p_e;
    row.ci_low = est.ci_low;
    row.ci_high = est.ci_high;
    row.mean_steps =
        static_cast<double>(total_steps) / static_cast<double>(spec.trials);
  }

  row.data_rate_bps = data_rate(row.p_e, pt.order, pt.symbol_duration());
  row.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return row;
}

SweepResult sweep(const ExperimentSpec& spec, int workers) {
  spec.validate();
  if (spec.trajectory_trials > 0 && spec.grid_size() > 1)
    throw std::invalid_argument(
        "trajectory capture requires a single-point grid");

  SweepResult result;
  result.rows.reserve(spec.grid_size());
  for (size_t g = 0; g < spec.grid_size(); ++g) {
    std::vector<TrialRecord>* sink =
        (spec.trajectory_trials > 0 && g == 0) ? &result.trajectories : nullptr;
    result.rows.push_back(estimate_pe(spec, g, workers, sink));
  }
  if (!result.trajectories.empty()) {
    result.curves = aggregate_trajectories(result.trajectories);
    result.heatmap =
        elapsed_histogram(result.trajectories, spec.heatmap_bin_us * 1e-6);
  }
  return result;
}

TrajectoryCurves aggregate_trajectories(const std::vector<TrialRecord>& recs) {
  if (recs.empty())
    throw std::invalid_argument("no trajectories to aggregate");
  TrajectoryCurves out;
  out.trials = recs.size();
  size_t longest = 0;
  for (const auto& r : recs) longest = std::max(longest, r.steps.size());
  if (longest == 0) return out;
  out.mean_max_pr.assign(longest, 0);
  out.mean_true_pr.assign(longest, 0);
  out.mean_deviation.assign(longest, 0);
  for (const auto& r : recs) {
    if (r.steps.empty())
      throw std::invalid_argument("trajectory aggregation needs step logs");
    for (size_t i = 0; i < longest; ++i) {
      const StepLog& s = i < r.steps.size() ? r.steps[i] : r.steps.back();
      out.mean_max_pr[i] += s.max_pr;
      out.mean_true_pr[i] += s.true_pr;
      out.mean_deviation[i] += s.deviation;
    }
  }
  const double n = static_cast<double>(recs.size());
  for (size_t i = 0; i < longest; ++i) {
    out.mean_max_pr[i] /= n;
    out.mean_true_pr[i] /= n;
    out.mean_deviation[i] /= n;
  }
  return out;
}

std::vector<HeatmapCell> elapsed_histogram(const std::vector<TrialRecord>& recs,
                                           double bin_width) {
  if (bin_width <= 0)
    throw std::invalid_argument("bin width must be positive");
  std::map<std::pair<int, int64_t>, uint64_t> cells;
  for (const auto& r : recs)
    for (size_t i = 0; i < r.steps.size(); ++i) {
      const int64_t bin =
          static_cast<int64_t>(std::floor(r.steps[i].shot_elapsed / bin_width));
      ++cells[{static_cast<int>(i), bin}];
    }
  std::vector<HeatmapCell> out;
  out.reserve(cells.size());
  for (const auto& [key, count] : cells)
    out.push_back({key.first, key.second * bin_width, count});
  return out;
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::RisQuantum: return "ris-quantum";
    case Scheme::RisSql: return "ris-sql";
    case Scheme::PskSql: return "psk-sql";
  }
  return "unknown";
}

}  // namespace risread

#include "risread/presets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "risread/io.hpp"
#include "risread/util.hpp"

namespace risread {

namespace {

std::vector<double> linspace(double lo, double step, int count) {
  std::vector<double> out;
  out.reserve(count);
  // Snap to 9 decimals so accumulated steps echo as clean grid values.
  for (int i = 0; i < count; ++i)
    out.push_back(std::round((lo + step * i) * 1e9) / 1e9);
  return out;
}

// Per-order defaults used throughout: visibility, trial count and the
// element counts at which the symbol-period studies saturate.
struct OrderDefaults {
  int order;
  double visibility;
  uint64_t trials;
  int elements_small;  // photon-number sweeps
  int elements_large;  // symbol-period sweeps
};

OrderDefaults order_defaults(int order) {
  switch (order) {
    case 16:
      return {16, 0.997, 20000, 80, 80 * 1000};
    case 64:
      return {64, 0.998, 20000, 80, 80 * 2000};
    default:
      return {256, 0.9995, 10000, 160, 160 * 4000};
  }
}

ExperimentSpec quantum_base(const OrderDefaults& d) {
  ExperimentSpec sp;
  sp.scheme = Scheme::RisQuantum;
  sp.order = d.order;
  sp.element_count = d.elements_small;
  sp.visibility = d.visibility;
  sp.trials = d.trials;
  return sp;
}

Preset photon_sweep(const std::string& name, int order,
                    std::vector<double> n0_grid) {
  const OrderDefaults d = order_defaults(order);
  Preset p;
  p.name = name;
  p.summary = "P_e vs mean photon number, M=" + std::to_string(order) +
              ", S=1, quantum (V<1 and V=1) against classical baselines";

  ExperimentSpec q = quantum_base(d);
  q.n0_grid = n0_grid;
  p.parts.push_back({"", q});

  ExperimentSpec q1 = q;
  q1.visibility = 1;
  p.parts.push_back({"", q1});

  ExperimentSpec sr = q;
  sr.scheme = Scheme::RisSql;
  p.parts.push_back({"", sr});

  ExperimentSpec sp = sr;
  sp.scheme = Scheme::PskSql;
  p.parts.push_back({"", sp});
  return p;
}

Preset element_sweep(const std::string& name, int order, double t_us,
                     std::vector<int> k_grid) {
  const OrderDefaults d = order_defaults(order);
  Preset p;
  p.name = name;
  p.summary = "P_e vs RIS element count, M=" + std::to_string(order) +
              ", T=" + format_double(t_us) + "us, S in {1,2,3,7}";
  for (int s : {1, 2, 3, 7}) {
    ExperimentSpec sp = quantum_base(d);
    sp.mode_count = s;
    sp.k_grid = k_grid;
    sp.t_grid_us = {t_us};
    p.parts.push_back({"", sp});
  }
  return p;
}

Preset period_sweep(const std::string& name, int order,
                    std::vector<double> t_grid_us) {
  const OrderDefaults d = order_defaults(order);
  Preset p;
  p.name = name;
  p.summary = "P_e vs symbol period, M=" + std::to_string(order) +
              ", K=" + std::to_string(d.elements_large) + ", S in {1,2,3,7}";
  for (int s : {1, 2, 3, 7}) {
    ExperimentSpec sp = quantum_base(d);
    sp.mode_count = s;
    sp.element_count = d.elements_large;
    sp.t_grid_us = t_grid_us;
    p.parts.push_back({"", sp});
  }
  return p;
}

Preset trajectory_study(const std::string& name, int order, double t_us,
                        bool final_hist, bool heatmap) {
  const OrderDefaults d = order_defaults(order);
  Preset p;
  p.name = name;
  p.summary = "Per-step posterior trajectories, M=" + std::to_string(order) +
              ", T=" + format_double(t_us) + "us, S in {1,2,3,7}";
  p.final_step_histogram = final_hist;
  p.elapsed_heatmap = heatmap;
  for (int s : {1, 2, 3, 7}) {
    ExperimentSpec sp = quantum_base(d);
    sp.mode_count = s;
    sp.element_count = d.elements_large;
    sp.t_grid_us = {t_us};
    sp.trials = 1000;
    sp.trajectory_trials = 1000;
    sp.heatmap_bin_us = 0.5;
    p.parts.push_back({"s" + std::to_string(s), sp});
  }
  return p;
}

Preset min_photon_table() {
  Preset p;
  p.name = "table1";
  p.summary =
      "Minimum mean photon number reaching the per-order target error "
      "probability, classical vs quantum readout";
  p.min_photon_target = 1;  // per-order targets resolved at render time
  const struct {
    int order;
    std::vector<double> grid;
  } spans[] = {
      {16, linspace(0.3, 0.15, 11)},   // 0.3 .. 1.8
      {64, linspace(0.75, 0.15, 7)},   // 0.75 .. 1.65
      {256, linspace(3.0, 1.5, 9)},    // 3 .. 15
  };
  for (const auto& span : spans) {
    const OrderDefaults d = order_defaults(span.order);
    ExperimentSpec q = quantum_base(d);
    q.n0_grid = span.grid;
    p.parts.push_back({"", q});
    ExperimentSpec q1 = q;
    q1.visibility = 1;
    p.parts.push_back({"", q1});
    ExperimentSpec sr = q;
    sr.scheme = Scheme::RisSql;
    p.parts.push_back({"", sr});
  }
  return p;
}

Preset rate_table() {
  Preset p;
  p.name = "table2";
  p.summary =
      "Data rate of the quantum receiver across modulation orders, S in "
      "{1,2}, imperfect and perfect visibility";
  p.rate_table = true;
  const struct {
    int order;
    double visibility, t_us;
  } rows[] = {
      {16, 0.997, 15}, {64, 0.998, 23}, {256, 0.9995, 30},
      {16, 1, 13},     {64, 1, 19},     {256, 1, 27},
  };
  for (const auto& row : rows) {
    const OrderDefaults d = order_defaults(row.order);
    ExperimentSpec sp = quantum_base(d);
    sp.visibility = row.visibility;
    sp.element_count = d.elements_large;
    sp.t_grid_us = {row.t_us};
    sp.s_grid = {1, 2};
    p.parts.push_back({"", sp});
  }
  return p;
}

std::vector<Preset> build_presets() {
  std::vector<Preset> out;
  out.push_back(photon_sweep("fig3a", 16, linspace(0.15, 0.15, 9)));
  out.push_back(photon_sweep("fig3b", 64, linspace(0.5, 0.5, 10)));
  out.push_back(photon_sweep("fig3c", 256, linspace(1.5, 1.5, 10)));
  out.push_back(min_photon_table());
  out.push_back(
      element_sweep("fig5a", 16, 7, {20, 40, 80, 160, 320, 640, 1280}));
  out.push_back(
      element_sweep("fig5b", 64, 15, {20, 40, 80, 160, 320, 640, 1280}));
  out.push_back(
      element_sweep("fig5c", 256, 30, {40, 80, 160, 320, 640, 1280, 2560}));
  out.push_back(period_sweep("fig6a", 16, {1, 3, 5, 7, 9, 11, 13}));
  out.push_back(period_sweep("fig6b", 64, {3, 7, 11, 15, 19, 23}));
  out.push_back(period_sweep("fig6c", 256, {5, 10, 15, 20, 25, 30}));
  out.push_back(trajectory_study("fig7a", 16, 13, false, false));
  out.push_back(trajectory_study("fig7b", 64, 23, false, false));
  out.push_back(trajectory_study("fig7c", 256, 30, false, false));
  out.push_back(trajectory_study("fig8", 16, 13, true, false));
  out.push_back(trajectory_study("fig10", 16, 13, false, true));
  out.push_back(rate_table());
  return out;
}

uint64_t scaled(uint64_t trials, double scale) {
  const auto n = static_cast<uint64_t>(std::llround(trials * scale));
  return std::max<uint64_t>(1, n);
}

double order_target(int order) {
  if (order == 16) return 0.003;
  if (order == 64) return 0.3;
  return 0.03;
}

std::string min_photon_csv(const std::vector<SweepRow>& rows) {
  // Scan each (scheme, order, visibility) group for the smallest n0 whose
  // estimate reaches the per-order target.
  std::string out =
      csv_line({"m", "scheme", "v", "target_pe", "min_n0", "pe_at_min"});
  std::map<std::tuple<int, int, double>, const SweepRow*> best;
  for (const auto& r : rows) {
    const double target = order_target(r.order);
    if (r.p_e > target) continue;
    auto key = std::make_tuple(r.order, static_cast<int>(r.scheme),
                               r.visibility);
    auto it = best.find(key);
    if (it == best.end() || r.n0 < it->second->n0) best[key] = &r;
  }
  // Preserve first-appearance order of the groups.
  std::vector<std::tuple<int, int, double>> seen;
  for (const auto& r : rows) {
    auto key = std::make_tuple(r.order, static_cast<int>(r.scheme),
                               r.visibility);
    if (std::find(seen.begin(), seen.end(), key) == seen.end())
      seen.push_back(key);
  }
  for (const auto& key : seen) {
    const auto& [order, scheme, v] = key;
    auto it = best.find(key);
    out += csv_line(
        {std::to_string(order), scheme_name(static_cast<Scheme>(scheme)),
         format_double(v), format_double(order_target(order)),
         it == best.end() ? "nan" : format_double(it->second->n0),
         it == best.end() ? "nan" : format_double(it->second->p_e)});
  }
  return out;
}

std::string rate_table_csv(const std::vector<SweepRow>& rows) {
  std::string out = csv_line({"v", "m", "t_us", "s", "trials", "errors", "pe",
                              "data_rate_mbps", "data_rate_per_mode_mbps"});
  for (const auto& r : rows) {
    const double mbps = r.data_rate_bps * 1e-6;
    out += csv_line({format_double(r.visibility), std::to_string(r.order),
                     format_double(r.t_us), std::to_string(r.mode_count),
                     std::to_string(r.trials), std::to_string(r.errors),
                     format_double(r.p_e), format_double(mbps),
                     format_double(mbps / r.mode_count)});
  }
  return out;
}

std::string final_step_csv(const std::vector<TrialRecord>& recs) {
  // 20 equal-width bins over [0,1] of the last step's posterior summary.
  constexpr int kBins = 20;
  uint64_t true_pr[kBins] = {};
  uint64_t max_pr[kBins] = {};
  auto slot = [](double p) {
    int b = static_cast<int>(p * kBins);
    return std::clamp(b, 0, kBins - 1);
  };
  for (const auto& rec : recs) {
    if (rec.steps.empty()) continue;
    const StepLog& last = rec.steps.back();
    ++true_pr[slot(last.true_pr)];
    ++max_pr[slot(last.max_pr)];
  }
  std::string out = csv_line({"bin_low", "bin_high", "true_pr", "max_pr"});
  for (int b = 0; b < kBins; ++b)
    out += csv_line({format_double(static_cast<double>(b) / kBins),
                     format_double(static_cast<double>(b + 1) / kBins),
                     std::to_string(true_pr[b]), std::to_string(max_pr[b])});
  return out;
}

}  // namespace

const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> presets = build_presets();
  return presets;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : all_presets())
    if (p.name == name) return p;
  std::string known;
  for (const auto& p : all_presets()) {
    if (!known.empty()) known += ", ";
    known += p.name;
  }
  throw unknown_preset_error("unknown preset '" + name + "' (known: " + known +
                             ")");
}

std::vector<NamedCsv> run_preset(const Preset& preset, double scale,
                                 int workers, std::optional<uint64_t> seed) {
  std::vector<NamedCsv> files;
  std::vector<SweepRow> all_rows;
  for (const auto& part : preset.parts) {
    ExperimentSpec spec = part.spec;
    if (seed) spec.master_seed = *seed;
    spec.trials = scaled(spec.trials, scale);
    if (spec.trajectory_trials > 0) {
      spec.trajectory_trials = static_cast<int>(
          std::min<uint64_t>(scaled(spec.trajectory_trials, scale),
                             spec.trials));
    }
    SweepResult res = sweep(spec, workers);
    all_rows.insert(all_rows.end(), res.rows.begin(), res.rows.end());
    if (part.label.empty()) continue;
    if (!res.trajectories.empty()) {
      files.push_back({"curves_" + part.label + ".csv",
                       curves_csv(res.curves)});
      if (preset.final_step_histogram)
        files.push_back({"final_step_" + part.label + ".csv",
                         final_step_csv(res.trajectories)});
      if (preset.elapsed_heatmap)
        files.push_back({"heatmap_" + part.label + ".csv",
                         heatmap_csv(res.heatmap)});
    }
  }
  files.insert(files.begin(), {"pe_sweep.csv", pe_sweep_csv(all_rows)});
  if (preset.min_photon_target > 0)
    files.push_back({"min_photon.csv", min_photon_csv(all_rows)});
  if (preset.rate_table)
    files.push_back({"data_rate.csv", rate_table_csv(all_rows)});
  return files;
}

}  // namespace risread

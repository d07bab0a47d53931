#include "risread/io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "risread/util.hpp"

namespace risread {

namespace {

std::string us(double seconds) { return format_double(seconds * 1e6); }

}  // namespace

std::string constellation_csv(const Constellation& c) {
  std::string out = "index,ring,phase_slot,re,im,abs,arg\n";
  for (size_t m = 0; m < c.symbols.size(); ++m) {
    const auto& s = c.symbols[m];
    out += csv_line({std::to_string(m + 1), std::to_string(c.ring_of[m]),
                     std::to_string(c.phase_slot_of[m]),
                     format_double(s.real()), format_double(s.imag()),
                     format_double(std::abs(s)), format_double(std::arg(s))});
  }
  return out;
}

std::string pe_sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "scheme,m,s,k,v,n0,t_us,trials,errors,pe,ci_low,ci_high,data_rate_bps,"
      "mean_steps\n";
  for (const auto& r : rows) {
    out += csv_line({scheme_name(r.scheme), std::to_string(r.order),
                     std::to_string(r.mode_count),
                     std::to_string(r.element_count),
                     format_double(r.visibility), format_double(r.n0),
                     format_double(r.t_us), std::to_string(r.trials),
                     std::to_string(r.errors), format_double(r.p_e),
                     format_double(r.ci_low), format_double(r.ci_high),
                     format_double(r.data_rate_bps),
                     format_double(r.mean_steps)});
  }
  return out;
}

std::string baseline_csv(const std::vector<SweepRow>& rows,
                         double efficiency) {
  std::string out = "m,scheme,n0,xi_eta,trials,pe,ci_low,ci_high\n";
  for (const auto& row : rows)
    out += csv_line({std::to_string(row.order), scheme_name(row.scheme),
                     format_double(row.n0), format_double(efficiency),
                     std::to_string(row.trials), format_double(row.p_e),
                     format_double(row.ci_low), format_double(row.ci_high)});
  return out;
}

std::string trajectory_csv(const std::vector<TrialRecord>& recs) {
  std::string out =
      "trial,step,t_us,lo_index,max_pr,true_pr,deviation,shot_elapsed_us,"
      "clicks\n";
  for (size_t trial = 0; trial < recs.size(); ++trial) {
    const auto& steps = recs[trial].steps;
    for (size_t i = 0; i < steps.size(); ++i) {
      const StepLog& s = steps[i];
      out += csv_line({std::to_string(trial + 1), std::to_string(i + 1),
                       us(s.t), std::to_string(s.lo_index + 1),
                       format_double(s.max_pr), format_double(s.true_pr),
                       format_double(s.deviation), us(s.shot_elapsed),
                       std::to_string(s.clicks)});
    }
  }
  return out;
}

std::string curves_csv(const TrajectoryCurves& curves) {
  std::string out = "step,mean_max_pr,mean_true_pr,mean_deviation\n";
  for (size_t i = 0; i < curves.mean_max_pr.size(); ++i)
    out += csv_line({std::to_string(i + 1), format_double(curves.mean_max_pr[i]),
                     format_double(curves.mean_true_pr[i]),
                     format_double(curves.mean_deviation[i])});
  return out;
}

std::string heatmap_csv(const std::vector<HeatmapCell>& cells) {
  std::string out = "step,elapsed_bin_us,count\n";
  for (const auto& cell : cells)
    out += csv_line({std::to_string(cell.step + 1), us(cell.bin_low),
                     std::to_string(cell.count)});
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << contents;
  if (!f) throw std::runtime_error("failed writing " + path);
}

}  // namespace risread

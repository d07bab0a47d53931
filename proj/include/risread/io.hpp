#pragma once

#include <string>
#include <vector>

#include "risread/constellation.hpp"
#include "risread/harness.hpp"
#include "risread/quantum_rx.hpp"

namespace risread {

// CSV emitters. Numeric fields use shortest round-trip formatting; symbol
// indices are 1-based in files (the C++ API is 0-based). Durations are in
// microseconds in files, seconds in the API.

std::string constellation_csv(const Constellation& c);
std::string pe_sweep_csv(const std::vector<SweepRow>& rows);
std::string baseline_csv(const std::vector<SweepRow>& rows, double efficiency);
std::string trajectory_csv(const std::vector<TrialRecord>& recs);
std::string curves_csv(const TrajectoryCurves& curves);
std::string heatmap_csv(const std::vector<HeatmapCell>& cells);

void write_file(const std::string& path, const std::string& contents);

}  // namespace risread

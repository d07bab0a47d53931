#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "risread/harness.hpp"

namespace risread {

class unknown_preset_error : public std::runtime_error {
 public:
  explicit unknown_preset_error(const std::string& msg)
      : std::runtime_error(msg) {}
};

// One independently swept experiment inside a preset. Parts with a nonempty
// label additionally emit per-part files (trajectory curves, final-step
// histograms, elapsed-time heatmaps) named after the label.
struct PresetPart {
  std::string label;
  ExperimentSpec spec;
};

struct Preset {
  std::string name;
  std::string summary;
  std::vector<PresetPart> parts;
  double min_photon_target = 0;  // >0: emit min_photon.csv for this target
  bool rate_table = false;       // emit data_rate.csv
  bool final_step_histogram = false;  // per-part final posterior histogram
  bool elapsed_heatmap = false;       // per-part elapsed-time heatmap
};

const std::vector<Preset>& all_presets();
const Preset& find_preset(const std::string& name);  // unknown_preset_error

struct NamedCsv {
  std::string filename;
  std::string content;
};

// Runs every part and renders the preset's files. `scale` multiplies trial
// counts only; physics parameters are never touched.
std::vector<NamedCsv> run_preset(const Preset& preset, double scale,
                                 int workers,
                                 std::optional<uint64_t> seed = {});

}  // namespace risread

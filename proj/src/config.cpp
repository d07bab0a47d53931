#include "risread/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "risread/util.hpp"

namespace risread {

namespace {

[[noreturn]] void fail(ConfigErrorKind kind, const std::string& msg) {
  throw ConfigError(kind, msg);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  std::from_chars_result res;
  if constexpr (std::is_floating_point_v<T>)
    res = std::from_chars(first, last, out);
  else
    res = std::from_chars(first, last, out, 10);
  if (res.ec != std::errc{} || res.ptr != last)
    fail(ConfigErrorKind::TypeMismatch,
         "key '" + key + "': cannot parse '" + value + "'");
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
  std::vector<T> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      fail(ConfigErrorKind::TypeMismatch, "key '" + key + "': empty list item");
    out.push_back(parse_number<T>(key, item));
  }
  if (out.empty())
    fail(ConfigErrorKind::TypeMismatch, "key '" + key + "': empty list");
  return out;
}

void check(bool ok, const std::string& key, const std::string& why) {
  if (!ok)
    fail(ConfigErrorKind::TypeMismatch, "key '" + key + "': " + why);
}

// Geometry inputs are collected separately and folded into the efficiencies
// once everything is parsed.
struct GeometryInput {
  std::map<std::string, double> known;
};

struct Setter {
  std::function<void(ExperimentSpec&, GeometryInput&, const std::string&,
                     const std::string&)>
      set;
  std::function<std::string(const ExperimentSpec&)> get;  // null: not echoed
};

const std::map<std::string, Setter>& schema() {
  static const std::map<std::string, Setter> s = [] {
    std::map<std::string, Setter> m;

    m["scheme"] = {[](ExperimentSpec& sp, GeometryInput&, const std::string& k,
                      const std::string& v) {
                     if (v == "ris-quantum") sp.scheme = Scheme::RisQuantum;
                     else if (v == "ris-sql") sp.scheme = Scheme::RisSql;
                     else if (v == "psk-sql") sp.scheme = Scheme::PskSql;
                     else check(false, k, "expected ris-quantum|ris-sql|psk-sql");
                   },
                   [](const ExperimentSpec& sp) { return scheme_name(sp.scheme); }};

    m["m"] = {[](ExperimentSpec& sp, GeometryInput&, const std::string& k,
                 const std::string& v) {
                sp.order = parse_number<int>(k, v);
                check(sp.order >= 2, k, "order must be at least 2");
              },
              [](const ExperimentSpec& sp) { return std::to_string(sp.order); }};

    m["k"] = {[](ExperimentSpec& sp, GeometryInput&, const std::string& k,
                 const std::string& v) {
                sp.element_count = parse_number<int>(k, v);
                check(sp.element_count > 0, k, "element count must be positive");
                sp.k_grid.clear();
              },
              nullptr};

    m["modes"] = {[](ExperimentSpec& sp, GeometryInput&, const std::string& k,
                     const std::string& v) {
                    sp.mode_count = parse_number<int>(k, v);
                    check(sp.mode_count >= 1, k, "mode count must be at least 1");
                    sp.s_grid.clear();
                  },
                  nullptr};

    m["n0"] = {[](ExperimentSpec& sp, GeometryInput&, const std::string& k,
                  const std::string& v) {
                 const double x = parse_number<double>(k, v);
                 check(x > 0, k, "n0 must be positive");
                 sp.n0_grid = {x};
               },
               nullptr};

    m["visibility"] = {
        [](ExperimentSpec& sp, GeometryInput&, const std::string& k,
           const std::string& v) {
          sp.visibility = parse_number<double>(k, v);
          check(sp.visibility >= 0 && sp.visibility <= 1, k,
                "visibility must lie in [0,1]");
        },
        [](const ExperimentSpec& sp) { return format_double(sp.visibility); }};

    m["symbol_duration_us"] = {
        [](ExperimentSpec& sp, GeometryInput&, const std::string& k,
           const std::string& v) {
          const double x = parse_number<double>(k, v);
          check(x > 0, k, "symbol duration must be positive");
          sp.t_grid_us = {x};
        },
        nullptr};

    m["time_bin_divisor"] = {
        [](ExperimentSpec& sp, GeometryInput&, const std::string& k,
           const std::string& v) {
          sp.time_bin_divisor = parse_number<double>(k, v);
          check(sp.time_bin_divisor > 0, k, "divisor must be positive");
        },
        [](const ExperimentSpec& sp) {
          return format_double(sp.time_bin_divisor);
        }};

    m["feedback_delay_us"] = {
        [](ExperimentSpec& sp, GeometryInput&, const std::string& k,
           const std::string& v) {
          sp.feedback_delay_us = parse_number<double>(k, v);
          check(sp.feedback_delay_us >= 0, k,
                "feedback delay must be nonnegative");
        },
        [](const ExperimentSpec& sp) {
          return format_double(sp.feedback_delay_us);
        }};

    m["max_steps"] = {
        [](ExperimentSpec& sp, GeometryInput&, const std::string& k,
           const std::string& v) {
          sp.max_steps = parse_number<int>(k, v);
          check(sp.max_steps >= 1, k, "max_steps must be at least 1");
        },
        [](const ExperimentSpec& sp) { return std::to_string(sp.max_steps); }};

    m["accel_threshold"] = {
        [](ExperimentSpec& sp, GeometryInput&, const std::string& k,
           const std::string& v) {
          sp.accel_threshold = parse_number<double>(k, v);
          check(sp.accel_threshold > 0 && sp.accel_threshold <= 1, k,
                "accel threshold must lie in (0,1]");
        },
        [](const ExperimentSpec& sp) {
          return format_double(sp.accel_threshold);
        }};

    m["efficiency_central"] = {
        [](ExperimentSpec& sp, GeometryInput&, const std::string& k,
           const std::string& v) {
          sp.efficiency_central = parse_number<double>(k, v);
          check(sp.efficiency_central > 0 && sp.efficiency_central <= 1, k,
                "efficiency must lie in (0,1]");
        },
        [](const ExperimentSpec& sp) {
          return format_double(sp.efficiency_central);
        }};

    m["efficiency_other"] = {
        [](ExperimentSpec& sp, GeometryInput&, const std::string& k,
           const std::string& v) {
          sp.efficiency_other = parse_number<double>(k, v);
          check(sp.efficiency_other > 0 && sp.efficiency_other <= 1, k,
                "efficiency must lie in (0,1]");
        },
        [](const ExperimentSpec& sp) {
          return format_double(sp.efficiency_other);
        }};

    m["trials"] = {
        [](ExperimentSpec& sp, GeometryInput&, const std::string& k,
           const std::string& v) {
          sp.trials = parse_number<uint64_t>(k, v);
          check(sp.trials > 0, k, "trials must be positive");
        },
        [](const ExperimentSpec& sp) { return std::to_string(sp.trials); }};

    m["seed"] = {[](ExperimentSpec& sp, GeometryInput&, const std::string& k,
                    const std::string& v) {
                   sp.master_seed = parse_number<uint64_t>(k, v);
                 },
                 [](const ExperimentSpec& sp) {
                   return std::to_string(sp.master_seed);
                 }};

    m["n0_grid"] = {[](ExperimentSpec& sp, GeometryInput&, const std::string& k,
                       const std::string& v) {
                      sp.n0_grid = parse_list<double>(k, v);
                      for (double x : sp.n0_grid)
                        check(x > 0, k, "n0 must be positive");
                    },
                    [](const ExperimentSpec& sp) {
                      std::string out;
                      for (size_t i = 0; i < sp.n0_grid.size(); ++i) {
                        if (i) out += ',';
                        out += format_double(sp.n0_grid[i]);
                      }
                      return out;
                    }};

    m["k_grid"] = {[](ExperimentSpec& sp, GeometryInput&, const std::string& k,
                      const std::string& v) {
                     sp.k_grid = parse_list<int>(k, v);
                     for (int x : sp.k_grid)
                       check(x > 0, k, "element count must be positive");
                   },
                   [](const ExperimentSpec& sp) {
                     if (sp.k_grid.empty())
                       return std::to_string(sp.element_count);
                     std::string out;
                     for (size_t i = 0; i < sp.k_grid.size(); ++i) {
                       if (i) out += ',';
                       out += std::to_string(sp.k_grid[i]);
                     }
                     return out;
                   }};

    m["t_grid_us"] = {[](ExperimentSpec& sp, GeometryInput&,
                         const std::string& k, const std::string& v) {
                        sp.t_grid_us = parse_list<double>(k, v);
                        for (double x : sp.t_grid_us)
                          check(x > 0, k, "symbol duration must be positive");
                      },
                      [](const ExperimentSpec& sp) {
                        std::string out;
                        for (size_t i = 0; i < sp.t_grid_us.size(); ++i) {
                          if (i) out += ',';
                          out += format_double(sp.t_grid_us[i]);
                        }
                        return out;
                      }};

    m["s_grid"] = {[](ExperimentSpec& sp, GeometryInput&, const std::string& k,
                      const std::string& v) {
                     sp.s_grid = parse_list<int>(k, v);
                     for (int x : sp.s_grid)
                       check(x >= 1, k, "mode count must be at least 1");
                   },
                   [](const ExperimentSpec& sp) {
                     if (sp.s_grid.empty())
                       return std::to_string(sp.mode_count);
                     std::string out;
                     for (size_t i = 0; i < sp.s_grid.size(); ++i) {
                       if (i) out += ',';
                       out += std::to_string(sp.s_grid[i]);
                     }
                     return out;
                   }};

    m["trajectory_trials"] = {
        [](ExperimentSpec& sp, GeometryInput&, const std::string& k,
           const std::string& v) {
          sp.trajectory_trials = parse_number<int>(k, v);
          check(sp.trajectory_trials >= 0, k, "must be nonnegative");
        },
        [](const ExperimentSpec& sp) {
          return std::to_string(sp.trajectory_trials);
        }};

    m["heatmap_bin_us"] = {
        [](ExperimentSpec& sp, GeometryInput&, const std::string& k,
           const std::string& v) {
          sp.heatmap_bin_us = parse_number<double>(k, v);
          check(sp.heatmap_bin_us > 0, k, "bin width must be positive");
        },
        [](const ExperimentSpec& sp) {
          return format_double(sp.heatmap_bin_us);
        }};

    m["ring_level"] = {
        [](ExperimentSpec& sp, GeometryInput&, const std::string& k,
           const std::string& v) {
          if (v == "amplitude") sp.ring_level = RingLevel::Amplitude;
          else if (v == "intensity") sp.ring_level = RingLevel::Intensity;
          else check(false, k, "expected amplitude|intensity");
        },
        [](const ExperimentSpec& sp) {
          return std::string(sp.ring_level == RingLevel::Amplitude
                                 ? "amplitude"
                                 : "intensity");
        }};

    m["n_convention"] = {
        [](ExperimentSpec& sp, GeometryInput&, const std::string& k,
           const std::string& v) {
          if (v == "source") sp.n_convention = NConvention::Source;
          else if (v == "post-ris") sp.n_convention = NConvention::PostRis;
          else check(false, k, "expected source|post-ris");
        },
        [](const ExperimentSpec& sp) {
          return std::string(sp.n_convention == NConvention::Source
                                 ? "source"
                                 : "post-ris");
        }};

    m["retention_rule"] = {
        [](ExperimentSpec& sp, GeometryInput&, const std::string& k,
           const std::string& v) {
          if (v == "map-mode") sp.retention = Retention::WholePosterior;
          else if (v == "elementwise-max")
            sp.retention = Retention::ElementwiseMax;
          else check(false, k, "expected map-mode|elementwise-max");
        },
        [](const ExperimentSpec& sp) {
          return std::string(sp.retention == Retention::WholePosterior
                                 ? "map-mode"
                                 : "elementwise-max");
        }};

    for (const char* gk :
         {"geometry.l_ris", "geometry.a_tx", "geometry.a_rx", "geometry.z0",
          "geometry.z1", "geometry.lambda"}) {
      m[gk] = {[](ExperimentSpec&, GeometryInput& g, const std::string& k,
                  const std::string& v) {
                 const double x = parse_number<double>(k, v);
                 check(x > 0, k, "geometry values must be positive");
                 g.known[k] = x;
               },
               nullptr};
    }
    return m;
  }();
  return s;
}

void apply(ExperimentSpec& spec, GeometryInput& geom, const std::string& key,
           const std::string& value) {
  const auto it = schema().find(key);
  if (it == schema().end())
    fail(ConfigErrorKind::UnknownKey, "unknown key '" + key + "'");
  it->second.set(spec, geom, key, value);
}

std::string env_name(const std::string& key) {
  std::string out = "RISREAD_";
  for (char c : key)
    out += (c == '.' || c == '-') ? '_' : static_cast<char>(std::toupper(c));
  return out;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [k, _] : schema()) out.push_back(k);
    return out;
  }();
  return keys;
}

RunConfig parse_config(
    const std::optional<std::string>& path,
    const std::vector<std::pair<std::string, std::string>>& overrides,
    bool apply_env) {
  ExperimentSpec spec;
  GeometryInput geom;

  if (path) {
    std::ifstream f(*path);
    if (!f)
      fail(ConfigErrorKind::MissingFile, "cannot read config file " + *path);
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        fail(ConfigErrorKind::TypeMismatch,
             *path + ":" + std::to_string(lineno) + ": expected key = value");
      apply(spec, geom, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }

  if (apply_env)
    for (const auto& key : config_keys())
      if (const char* v = std::getenv(env_name(key).c_str()))
        apply(spec, geom, key, v);

  for (const auto& [key, value] : overrides) apply(spec, geom, key, value);

  if (!geom.known.empty()) {
    if (geom.known.size() != 6)
      fail(ConfigErrorKind::InconsistentAxes,
           "geometry block requires all of l_ris, a_tx, a_rx, z0, z1, lambda");
    const ChannelGeometry g{geom.known.at("geometry.l_ris"),
                            geom.known.at("geometry.a_tx"),
                            geom.known.at("geometry.a_rx"),
                            geom.known.at("geometry.z0"),
                            geom.known.at("geometry.z1")};
    const double xi = geometric_efficiency(g, geom.known.at("geometry.lambda"));
    spec.efficiency_central *= xi;
    spec.efficiency_other *= xi;
  }

  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    fail(ConfigErrorKind::InconsistentAxes, e.what());
  }

  RunConfig out;
  out.spec = spec;
  out.values = config_values(spec);
  return out;
}

std::map<std::string, std::string> config_values(const ExperimentSpec& spec) {
  std::map<std::string, std::string> values;
  for (const auto& [key, setter] : schema())
    if (setter.get) values[key] = setter.get(spec);
  return values;
}

std::string config_text(const ExperimentSpec& spec) {
  std::string out;
  for (const auto& [key, setter] : schema())
    if (setter.get) out += key + " = " + setter.get(spec) + "\n";
  return out;
}

}  // namespace risread

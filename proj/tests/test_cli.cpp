// End-to-end smoke tests driving the installed binary through std::system.
// RISREAD_CLI_PATH is injected by the build.

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd =
      std::string(RISREAD_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE_MESSAGE(f.good(), "missing " << p.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

size_t line_count(const std::string& s) {
  return static_cast<size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("cli exit codes") {
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("--help") == 0);
  CHECK(run("sweep --config /nonexistent/z.cfg") == 3);
  CHECK(run("sweep --visibility 1.2 --trials 10") == 4);
  CHECK(run("sweep --n0_grid 0.5,1 --t_grid_us 10,20 --trials 5") == 6);
  CHECK(run("read --scheme ris-sql --trials 5") == 6);
  CHECK(run("reproduce fig99") == 7);
  CHECK(run("reproduce --list") == 0);

  const fs::path cfg = fs::temp_directory_path() / "risread_cli_badkey.cfg";
  std::ofstream(cfg) << "frobnicate = 1\n";
  CHECK(run("sweep --config " + cfg.string()) == 5);
}

TEST_CASE("constellation command writes csv and manifest") {
  const fs::path dir = fresh_dir("risread_cli_const");
  REQUIRE(run("constellation --m 16 --out-dir " + dir.string()) == 0);

  const std::string csv = slurp(dir / "constellation.csv");
  CHECK(line_count(csv) == 17);  // header + 16 symbols
  CHECK(csv.rfind("index,ring,phase_slot,re,im,abs,arg", 0) == 0);

  const auto manifest =
      nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest.at("command") == "constellation");
  CHECK(manifest.at("version") == "0.1.0");
  CHECK(manifest.at("config").at("m") == "16");
  const auto& outputs = manifest.at("outputs");
  CHECK(std::find(outputs.begin(), outputs.end(), "constellation.csv") !=
        outputs.end());
}

TEST_CASE("sweep command records the resolved config") {
  const fs::path dir = fresh_dir("risread_cli_sweep");
  REQUIRE(run("sweep --scheme ris-sql --trials 200 --n0_grid 0.5,1 --seed 3 "
              "--out-dir " +
              dir.string()) == 0);

  const std::string csv = slurp(dir / "pe_sweep.csv");
  CHECK(line_count(csv) == 3);  // header + two grid points
  CHECK(csv.rfind("scheme,m,s,k,v,n0,t_us,", 0) == 0);

  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest.at("config").at("scheme") == "ris-sql");
  CHECK(manifest.at("config").at("seed") == "3");
  CHECK(manifest.at("config").at("n0_grid") == "0.5,1");
  CHECK(manifest.at("row_wall_seconds").size() == 2);
}

TEST_CASE("baseline command defaults to the heterodyne ris receiver") {
  const fs::path dir = fresh_dir("risread_cli_base");
  REQUIRE(run("baseline --trials 100 --out-dir " + dir.string()) == 0);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest.at("config").at("scheme") == "ris-sql");
  CHECK(manifest.at("config").at("s_grid") == "1");
  const std::string csv = slurp(dir / "baseline.csv");
  CHECK(csv.rfind("m,scheme,n0,xi_eta,", 0) == 0);
  CHECK(line_count(csv) == 2);

  const fs::path psk = fresh_dir("risread_cli_base_psk");
  REQUIRE(run("baseline --modulation psk --m 2 --trials 100 --out-dir " +
              psk.string()) == 0);
  const auto pm = nlohmann::json::parse(slurp(psk / "manifest.json"));
  CHECK(pm.at("config").at("scheme") == "psk-sql");
  CHECK(run("baseline --modulation fsk --trials 10") == 2);
}

TEST_CASE("reproduce presets emit their derived files") {
  const fs::path fig8 = fresh_dir("risread_cli_fig8");
  REQUIRE(run("reproduce fig8 --scale 0.01 --out-dir " + fig8.string()) == 0);
  for (const char* name : {"pe_sweep.csv", "curves_s1.csv", "curves_s7.csv",
                           "final_step_s1.csv", "final_step_s7.csv"}) {
    CHECK(fs::exists(fig8 / name));
  }
  const auto manifest = nlohmann::json::parse(slurp(fig8 / "manifest.json"));
  CHECK(manifest.at("preset") == "fig8");
  CHECK(manifest.at("scale") == 0.01);

  const fs::path fig10 = fresh_dir("risread_cli_fig10");
  REQUIRE(run("reproduce fig10 --scale 0.01 --out-dir " + fig10.string()) == 0);
  CHECK(fs::exists(fig10 / "heatmap_s1.csv"));
  CHECK(!fs::exists(fig10 / "final_step_s1.csv"));

  const fs::path table1 = fresh_dir("risread_cli_table1");
  REQUIRE(run("reproduce table1 --scale 0.002 --out-dir " + table1.string()) ==
          0);
  const std::string photons = slurp(table1 / "min_photon.csv");
  CHECK(photons.rfind("m,scheme,v,target_pe,min_n0,pe_at_min", 0) == 0);
  CHECK(line_count(photons) == 10);  // header + 3 orders x 3 schemes

  const fs::path table2 = fresh_dir("risread_cli_table2");
  REQUIRE(run("reproduce table2 --scale 0.005 --out-dir " + table2.string()) ==
          0);
  const std::string rates = slurp(table2 / "data_rate.csv");
  CHECK(rates.rfind("v,m,t_us,s,", 0) == 0);
  CHECK(line_count(rates) == 13);  // header + 6 operating points x 2 modes
}

TEST_CASE("read command emits trajectory artifacts") {
  const fs::path dir = fresh_dir("risread_cli_read");
  REQUIRE(run("read --trials 20 --t_grid_us 10 --visibility 1 --out-dir " +
              dir.string()) == 0);
  for (const char* name :
       {"pe_sweep.csv", "trajectory.csv", "curves.csv", "heatmap.csv"}) {
    CHECK(fs::exists(dir / name));
  }
  const std::string traj = slurp(dir / "trajectory.csv");
  CHECK(traj.rfind("trial,step,t_us,lo_index,", 0) == 0);
  // Trial indices are 1-based in every CSV.
  CHECK(traj.find("\n1,1,") != std::string::npos);
  CHECK(traj.find("\n0,") == std::string::npos);
}

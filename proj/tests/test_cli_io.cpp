#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ow/config.hpp"
#include "ow/errors.hpp"
#include "ow/scenarios.hpp"

using namespace ow;
namespace fs = std::filesystem;

namespace {

std::string write_tmp(const std::string& name, const std::string& text) {
  const auto path = fs::temp_directory_path() / name;
  std::ofstream os(path);
  os << text;
  return path.string();
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("tables, numbers, strings, arrays") {
    const auto cfg = ConfigFile::parse_text(
        "scenario = \"grid\"\n"
        "seed = 7\n"
        "[grid]\n"
        "dims = 1\n"
        "n = [256]\n"
        "extent = [[-10, 10]]\n"
        "# comment\n"
        "flag = true\n");
    CHECK(cfg.find("scenario")->str == "grid");
    CHECK(cfg.find("grid.dims")->num == 1.0);
    CHECK(cfg.find("grid.extent")->arr[0].arr[1].num == 10.0);
    CHECK(cfg.find("grid.flag")->b);
    CHECK(cfg.find("missing") == nullptr);
  }
  SUBCASE("duplicate keys are rejected") {
    CHECK_THROWS_AS(ConfigFile::parse_text("a = 1\na = 2\n"), config_error);
  }
  SUBCASE("line info in parse errors") {
    try {
      ConfigFile::parse_text("a = 1\nb = @bad\n");
      CHECK(false);
    } catch (const config_error& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
}

TEST_CASE("schema validation") {
  SUBCASE("defaults fill hbar and mass") {
    const auto cfg = ConfigFile::parse_text("scenario = \"grid\"\n");
    SchemaReader r(cfg);
    r.string("scenario");
    CHECK(r.number("hbar", 1.0) == 1.0);
    CHECK(r.number("mass", 1.0) == 1.0);
    CHECK_NOTHROW(r.finish());
  }
  SUBCASE("negative dt names time.dt") {
    const auto cfg = ConfigFile::parse_text("[time]\ndt = -1e-3\nn_steps = 5\n");
    SchemaReader r(cfg);
    const double dt = r.number("time.dt");
    r.integer("time.n_steps");
    r.require(dt > 0.0, "time.dt must be positive");
    try {
      r.finish();
      CHECK(false);
    } catch (const config_error& e) {
      CHECK(std::string(e.what()).find("time.dt") != std::string::npos);
    }
  }
  SUBCASE("unknown keys suggest the nearest known key") {
    const auto cfg = ConfigFile::parse_text("potental = \"free\"\n");
    SchemaReader r(cfg);
    r.string("potential", std::string("free"));
    try {
      r.finish();
      CHECK(false);
    } catch (const config_error& e) {
      const std::string msg = e.what();
      CHECK(msg.find("unknown key 'potental'") != std::string::npos);
      CHECK(msg.find("did you mean 'potential'") != std::string::npos);
    }
  }
  SUBCASE("every violation is listed at once") {
    const auto cfg = ConfigFile::parse_text("a = \"x\"\n");
    SchemaReader r(cfg);
    r.number("missing_one");
    r.number("missing_two");
    try {
      r.finish();
      CHECK(false);
    } catch (const config_error& e) {
      const std::string msg = e.what();
      CHECK(msg.find("missing_one") != std::string::npos);
      CHECK(msg.find("missing_two") != std::string::npos);
      CHECK(msg.find("'a'") != std::string::npos);
    }
  }
}

TEST_CASE("scenario runs") {
  const auto base = fs::temp_directory_path() / "ow_cli_test";
  fs::remove_all(base);
  fs::create_directories(base);

  SUBCASE("grid scenario emits fields, observables and a manifest") {
    const auto cfg = write_tmp(
        "ow_grid.toml",
        "scenario = \"grid\"\nseed = 1\n"
        "[grid]\ndims = 1\nn = [256]\nextent = [[-16, 16]]\n"
        "[potential]\ntype = \"harmonic\"\nomega = 1.0\n"
        "[initial]\nq0 = [1.0]\np0 = [0.0]\ngamma_re = [0.5]\n"
        "[time]\ndt = 1e-3\nn_steps = 50\nsave_every = 25\n");
    CHECK(run_scenario_file(cfg, (base / "grid").string()) == 0);
    CHECK(fs::exists(base / "grid" / "observables.csv"));
    CHECK(fs::exists(base / "grid" / "manifest.json"));
    CHECK(fs::exists(base / "grid" / "field_000050.owf"));
  }
  SUBCASE("config errors exit with code 2") {
    const auto cfg = write_tmp("ow_bad.toml",
                               "scenario = \"grid\"\n[time]\ndt = -1\nn_steps = 1\n"
                               "[grid]\ndims = 1\nn = [64]\nextent = [[-8, 8]]\n"
                               "[initial]\nq0 = [0]\np0 = [0]\ngamma_re = [0.5]\n");
    CHECK(run_scenario_file(cfg, (base / "bad").string()) == 2);
  }
  SUBCASE("unknown scenario exits with code 2") {
    const auto cfg = write_tmp("ow_unknown.toml", "scenario = \"nope\"\n");
    CHECK(run_scenario_file(cfg, (base / "unknown").string()) == 2);
  }
  SUBCASE("double slit with zero paths still emits an empty spots file") {
    const auto cfg = write_tmp(
        "ow_ds0.toml",
        "scenario = \"double_slit\"\nseed = 3\n"
        "[grid]\ndims = 2\nn = [64, 64]\nextent = [[-8, 8], [-8, 8]]\n"
        "[potential]\ntype = \"double_slit_mask\"\nwall_x = 0.0\nthickness = 0.4\n"
        "slit_centers = [1.0, -1.0]\nslit_widths = [0.5, 0.5]\nheight = 50.0\n"
        "[initial]\nq0 = [-2.5, 0.0]\np0 = [4.0, 0.0]\ngamma_re = [0.7, 0.3]\n"
        "[time]\ndt = 2e-3\nn_steps = 40\nsave_every = 0\n"
        "[paths]\nn = 0\n"
        "[double_slit]\ndetect_x = 4.0\nbins = 16\n");
    CHECK(run_scenario_file(cfg, (base / "ds0").string()) == 0);
    std::ifstream spots(base / "ds0" / "spots.csv");
    std::string header;
    std::getline(spots, header);
    CHECK(header == "stream_id,y_detect");
    std::string rest;
    CHECK(!std::getline(spots, rest));
  }
  SUBCASE("reruns with the same seed are byte-identical") {
    const auto cfg = write_tmp(
        "ow_det.toml",
        "scenario = \"paths\"\nseed = 9\n"
        "[grid]\ndims = 1\nn = [256]\nextent = [[-16, 16]]\n"
        "[potential]\ntype = \"free\"\n"
        "[initial]\nq0 = [0.0]\np0 = [0.0]\ngamma_re = [0.25]\n"
        "[time]\ndt = 1e-3\nn_steps = 100\nsave_every = 10\n"
        "[paths]\nn = 200\nrecord_stride = 20\n");
    CHECK(run_scenario_file(cfg, (base / "det1").string()) == 0);
    CHECK(run_scenario_file(cfg, (base / "det2").string()) == 0);
    for (const auto& entry : fs::directory_iterator(base / "det1")) {
      const auto name = entry.path().filename().string();
      CHECK(file_checksum(entry.path().string()) ==
            file_checksum((base / "det2" / name).string()));
    }
  }
}

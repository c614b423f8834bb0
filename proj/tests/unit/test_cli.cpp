#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "nvmagnon/errors.hpp"
#include "nvmagnon/scenario.hpp"

using namespace nvmagnon;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("nvmagnon_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string field_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "";
}

json fig5_point(double eps) {
  json doc = *find_preset("fig5");
  doc.erase("sweep");
  doc["scenario"] = "evolve";
  doc["fields"]["epsilon"] = eps;
  doc["time"]["samples"] = 601;
  return doc;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("defaults parse to the reference parameters") {
    const auto cfg = parse_config(json::object());
    CHECK(cfg.geometry.sites == 1000);
    CHECK(cfg.geometry.length == Approx(999 * 12.376e-10));
    CHECK(cfg.nv.height == Approx(20e-9));
    CHECK(cfg.temperature == Approx(1e-3));
    CHECK_FALSE(cfg.bias.has_value());
    CHECK(std::isinf(cfg.nv.t1));
  }

  TEST_CASE("validation names the offending field") {
    CHECK(field_of({{"geometry", {{"N", 999}}}}) == "geometry.N");
    CHECK(field_of({{"nv", {{"z_NV", {{"value", 20}, {"unit", "furlong"}}}}}}) == "nv.z_NV.unit");
    CHECK(field_of({{"nv", {{"z_NV", {{"value", 20}, {"unit", "K"}}}}}}) == "nv.z_NV.unit");
    CHECK(field_of({{"nv", {{"z_NV", 20}}}}) == "nv.z_NV");
    CHECK(field_of({{"fields", {{"epsilon", 0.1}, {"B1", {{"value", 0.1}, {"unit", "T"}}}}}}) != "");
    CHECK(field_of({{"initial_state", "cat"}}) == "initial_state");
    CHECK(field_of({{"frame", "sideways"}}) == "frame");
    CHECK(field_of({{"fields", {{"E", {{"value", 0.1}, {"unit", "V/nm"}}}}}}) == "");
    CHECK(field_of({{"fields", {{"electric", 0.1}}}}) == "fields.electric");
    CHECK(field_of({{"colour", "blue"}}) == "colour");
  }

  TEST_CASE("unit conversion") {
    CHECK(read_quantity({{"value", 2.87}, {"unit", "GHz"}}, Dimension::frequency, "x") ==
          Approx(2.87e9 * 2 * M_PI));
    CHECK(read_quantity({{"value", 51.16}, {"unit", "mT"}}, Dimension::field, "x") == Approx(0.05116));
    CHECK(read_quantity({{"value", 1}, {"unit", "μs"}}, Dimension::time, "x") == Approx(1e-6));
    CHECK(std::isinf(read_quantity("inf", Dimension::time, "x", true)));
    CHECK_THROWS_AS(read_quantity("inf", Dimension::time, "x", false), ValidationError);
    CHECK_FALSE(accepted_units(Dimension::length).empty());
  }

  TEST_CASE("set_path keeps units") {
    json doc = default_document();
    set_path(doc, "nv.z_NV", 5);
    CHECK(doc["nv"]["z_NV"]["value"] == 5);
    CHECK(doc["nv"]["z_NV"]["unit"] == "nm");
    set_path(doc, "nv.T1", json{{"value", 1}, {"unit", "ms"}});
    CHECK(doc["nv"]["T1"]["unit"] == "ms");
    set_path(doc, "fields.epsilon", 0.3);
    CHECK(doc["fields"]["epsilon"] == 0.3);
    doc["nv"]["x_positions"] = json::array({1, 2});
    set_path(doc, "nv.x_positions.1", 7);
    CHECK(doc["nv"]["x_positions"][1] == 7);
  }

  TEST_CASE("config hash is stable") {
    const auto a = config_hash(default_document());
    CHECK(a.size() == 16);
    CHECK(a == config_hash(default_document()));
    json b = default_document();
    b["geometry"]["N"] = 998;
    CHECK(a != config_hash(b));
  }

  TEST_CASE("presets parse") {
    CHECK(preset_names().size() >= 7);
    for (const auto& name : preset_names()) {
      INFO(name);
      const auto p = find_preset(name);
      REQUIRE(p.has_value());
      CHECK(p->contains("description"));
      CHECK_NOTHROW(parse_config(*p));
    }
    CHECK_FALSE(find_preset("fig99").has_value());
  }

  TEST_CASE("resonance preset") {
    const auto m = run_scenario(*find_preset("resonance"), "resonance", {});
    CHECK(std::abs(m["resolved"]["B0_T"].get<double>() - 0.05116) < 0.5e-3);
  }

  TEST_CASE("deterministic CSV output") {
    const auto d1 = scratch("det1"), d2 = scratch("det2");
    RunOptions o;
    o.markov = false;
    for (const char* scenario : {"evolve", "couplings"}) {
      o.out_dir = d1.string();
      run_scenario(fig5_point(0.2), scenario, o);
      o.out_dir = d2.string();
      run_scenario(fig5_point(0.2), scenario, o);
    }
    for (const char* f : {"trajectory.csv", "couplings.csv", "kspace.csv"}) {
      INFO(f);
      const auto a = slurp(d1 / f);
      CHECK_FALSE(a.empty());
      CHECK(a == slurp(d2 / f));
      CHECK(a.find('\r') == std::string::npos);
    }
    const auto header = slurp(d1 / "trajectory.csv").substr(0, 200);
    CHECK(header.find("t[s]") != std::string::npos);
  }

  TEST_CASE("sweep rows equal single runs") {
    json doc = *find_preset("fig5");
    doc["time"]["samples"] = 601;
    doc["sweep"]["values"] = json::array({0.1, 0.3});
    const auto rows = run_sweep(parse_config(doc), 2);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
      CHECK(row.error.empty());
      const auto m = run_scenario(fig5_point(row.value.get<double>()), "steady", {"", 1, false});
      CHECK(std::abs(m["results"]["C_ss"].get<double>() - row.c_ss) < 1e-12);
      CHECK(std::abs(m["results"]["C1_ss"].get<double>() - row.c1_ss) < 1e-12);
    }
  }

  TEST_CASE("sweep records per-row failures") {
    json doc = *find_preset("fig5");
    doc["time"]["samples"] = 301;
    doc["sweep"]["values"] = json::array({0.1, -1.0, 0.2});
    const auto rows = run_sweep(parse_config(doc), 3);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].error.empty());
    CHECK_FALSE(rows[1].error.empty());
    CHECK(rows[2].error.empty());
    CHECK(rows[0].value == 0.1);
    CHECK(rows[2].value == 0.2);
  }

  TEST_CASE("command line errors") {
    const auto dir = scratch("cli");
    const auto cfg = dir / "bad.json";
    std::ofstream(cfg) << R"({"geometry": {"N": 999}})";
    const auto err = dir / "err.txt";
    const std::string cmd = std::string(NVMAGNON_CLI_PATH) + " steady --config " + cfg.string() + " --out " +
                            (dir / "out").string() + " > /dev/null 2> " + err.string();
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 2);
    const auto rec = json::parse(slurp(err));
    CHECK(rec["error"] == "validation");
    CHECK(rec["field"] == "geometry.N");

    // L_E >= L_z is a physics error
    std::ofstream(cfg) << R"({"fields": {"E": {"value": 10, "unit": "V/nm"}}})";
    const int s2 = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(s2));
    CHECK(WEXITSTATUS(s2) == 3);
  }

  TEST_CASE("command line success") {
    const auto dir = scratch("cli_ok");
    const std::string cmd = std::string(NVMAGNON_CLI_PATH) + " --preset resonance --out " + dir.string() +
                            " --no-markov > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(fs::exists(dir / "manifest.json"));
  }
}

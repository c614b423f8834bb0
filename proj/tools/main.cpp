// nvmagnon <scenario> --config <path> [--out <dir>] [--workers <n>] [--preset <name>]

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "nvmagnon/errors.hpp"
#include "nvmagnon/scenario.hpp"

using nvmagnon::json;

namespace {

int fail(const char* kind, const std::string& message, const std::string& field, int code) {
  json err = {{"error", kind}, {"message", message}};
  if (!field.empty()) err["field"] = field;
  std::cerr << err.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two NV qubits in a displaced thermal magnon bath"};
  app.set_version_flag("--version", nvmagnon::version_string);

  std::string scenario, config_path, out_dir, preset;
  unsigned workers = 0;
  bool list = false, no_markov = false;
  app.add_option("scenario", scenario, "couplings | dispersion | resonance | evolve | steady | sweep");
  app.add_option("--config,-c", config_path, "JSON configuration");
  app.add_option("--out,-o", out_dir, "output directory (default: config 'output' or out/<scenario>)");
  app.add_option("--workers,-j", workers, "sweep worker threads (default: processors)");
  app.add_option("--preset,-p", preset, "start from an embedded preset; --config is merged on top");
  app.add_flag("--list-presets", list, "print the embedded presets and exit");
  app.add_flag("--no-markov", no_markov, "skip bath-correlation sampling for the manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (list) {
    for (const auto& name : nvmagnon::preset_names()) {
      const auto p = nvmagnon::find_preset(name);
      std::cout << name << "\t" << p->value("scenario", "") << "\t" << p->value("description", "") << '\n';
    }
    return 0;
  }

  try {
    json doc = json::object();
    if (!preset.empty()) {
      auto p = nvmagnon::find_preset(preset);
      if (!p) throw nvmagnon::ValidationError("preset", "unknown preset '" + preset + "'");
      doc = *p;
    }
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw nvmagnon::ValidationError("config", "cannot open '" + config_path + "'");
      json user;
      try {
        user = json::parse(in);
      } catch (const json::parse_error& e) {
        throw nvmagnon::ValidationError("config", std::string("malformed JSON: ") + e.what());
      }
      doc.merge_patch(user);
    }
    if (preset.empty() && config_path.empty())
      throw nvmagnon::ValidationError("config", "either --config or --preset is required");

    if (scenario.empty() && doc.contains("scenario") && doc["scenario"].is_string()) scenario = doc["scenario"];
    nvmagnon::RunOptions opts;
    opts.workers = workers;
    opts.markov = !no_markov;
    opts.out_dir = out_dir;
    if (opts.out_dir.empty())
      opts.out_dir = doc.contains("output") && doc["output"].is_string() ? doc["output"].get<std::string>()
                                                                         : "out/" + (preset.empty() ? scenario : preset);
    const json manifest = nvmagnon::run_scenario(doc, scenario, opts);
    std::cout << json{{"scenario", manifest["scenario"]},
                      {"out", opts.out_dir},
                      {"config_hash", manifest["config_hash"]},
                      {"results", manifest["results"]},
                      {"warnings", manifest["warnings"]}}
                     .dump(2)
              << '\n';
    return 0;
  } catch (const nvmagnon::ValidationError& e) {
    return fail("validation", e.what(), e.field(), 2);
  } catch (const nvmagnon::PhysicsError& e) {
    return fail("physics", e.what(), "", 3);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), "", 1);
  }
}

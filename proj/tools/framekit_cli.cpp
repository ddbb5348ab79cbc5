// Batch experiment runner. One JSON config (or a named preset) in, a JSON
// report plus CSV files out. Exit code 0 when every step passes, 1 when a
// step fails, 2 on configuration or precondition errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <framekit/experiment.hpp>

namespace {

framekit::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return framekit::json::parse(ss.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"framekit: frame ladders, bounds, duals and space constructions"};

  std::string config_path;
  std::string preset;
  std::string out_dir = "out";
  std::uint64_t seed_override = 0;
  bool has_seed_override = false;
  int verbosity = 0;

  auto* config_opt = app.add_option("-c,--config", config_path, "experiment config (JSON)");
  auto* preset_opt =
      app.add_option("-p,--preset", preset, "preset name: weighted_shift | hermite | lp_shift | coordinate");
  app.add_option("-o,--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("-s,--seed", seed_override, "override the config seed");
  app.add_flag("-v,--verbose", verbosity, "print per-step progress");
  config_opt->excludes(preset_opt);
  preset_opt->excludes(config_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  has_seed_override = seed_opt->count() > 0;

  try {
    framekit::json doc;
    if (!preset.empty()) {
      doc = framekit::preset_config(preset);
    } else if (!config_path.empty()) {
      doc = load_json_file(config_path);
    } else {
      std::cerr << "error: either --config or --preset is required\n";
      return 2;
    }
    if (has_seed_override) doc["seed"] = seed_override;

    framekit::ExperimentConfig cfg = framekit::parse_config(doc);
    if (verbosity > 0) {
      std::cout << "label: " << cfg.label << "\nseed: " << cfg.seed << "\nsteps: ";
      for (const auto& s : cfg.pipeline) std::cout << s.op << " ";
      std::cout << "\n";
    }

    framekit::RunReport report = framekit::run(cfg);
    auto files = framekit::write_report(report, out_dir);

    if (verbosity > 0) {
      for (const auto& s : report.steps)
        std::cout << "  [" << s.index << "] " << s.op << ": " << s.status << "\n";
      for (const auto& f : files) std::cout << "wrote " << f << "\n";
    }
    std::cout << (report.pass ? "PASS" : "FAIL") << " " << cfg.label << " ("
              << report.steps.size() << " steps)\n";
    return report.pass ? 0 : 1;
  } catch (const framekit::ExperimentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

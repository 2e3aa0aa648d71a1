#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "romns/config.hpp"
#include "romns/error.hpp"
#include "romns/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitArtifact = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Velocity-only POD-Galerkin reduced models for incompressible channel flow"};
  app.require_subcommand(1);

  std::string config_path;
  std::string stage_dir;
  std::string modes;
  std::string testcase;
  app.add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
  app.add_option("--stage-dir", stage_dir, "directory for artifacts and the run ledger");
  app.add_option("--modes", modes, "comma-separated list of ROM sizes, e.g. 2,5,10");
  app.add_option("--testcase", testcase, "varying-angle, moving-mode or custom");

  std::string verb;
  for (const auto& name : romns::stage_names()) {
    app.add_subcommand(name, "run the " + name + " stage")->fallthrough()->callback([&verb, name] { verb = name; });
  }
  app.add_subcommand("all", "run every stage in order")->fallthrough()->callback([&verb] { verb = "all"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    romns::SimConfig cfg = config_path.empty() ? romns::SimConfig{} : romns::load_config(config_path);
    if (!testcase.empty()) cfg.testcase = romns::parse_testcase(testcase);
    if (!modes.empty()) cfg.modes = romns::parse_modes(modes);
    cfg.validate();
    if (stage_dir.empty()) stage_dir = cfg.output_dir;

    if (verb == "all") {
      romns::run_all(cfg, stage_dir, std::cout);
    } else {
      romns::run_stage(cfg, verb, stage_dir, std::cout);
    }
  } catch (const romns::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const romns::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const romns::ArtifactError& e) {
    std::cerr << "artifact error: " << e.what() << '\n';
    return kExitArtifact;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
  return kExitOk;
}

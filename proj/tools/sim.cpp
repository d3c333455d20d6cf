// sim <command> --config <path> [--key=value ...]
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage/config error,
// 3 runtime or numeric error.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slitsim/config.hpp"
#include "slitsim/io.hpp"
#include "slitsim/pipeline.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kRuntime = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-slit interference, trajectories and ballistic diffusion from real-valued velocity fields"};
  app.allow_extras();
  std::string command;
  std::string config_path;
  app.add_option("command", command, "intensity | trajectories | fringes | cml | verify | all")->required();
  app.add_option("--config", config_path, "INI-style experiment file; omitted keys take defaults");
  app.footer("Any config key can be overridden with --key=value or --section.key=value.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  slitsim::ExperimentConfig config;
  slitsim::Command cmd{};
  try {
    cmd = slitsim::parse_command(command);
    if (!config_path.empty()) config = slitsim::load_config(config_path);
    for (const auto& extra : app.remaining()) {
      if (extra.rfind("--", 0) != 0 || extra.find('=') == std::string::npos)
        throw slitsim::ConfigError(extra, "expected --key=value, got '" + extra + "'");
      const auto eq = extra.find('=');
      slitsim::apply_override(config, extra.substr(2, eq - 2), extra.substr(eq + 1));
    }
    slitsim::validate(config);
  } catch (const slitsim::ValidationError& e) {
    std::cerr << "sim: " << e.what() << '\n';
    return kUsage;
  }

  try {
    const auto summary = slitsim::run_pipeline(config, cmd);
    std::cout << summary.text();
    return summary.all_pass() ? kPass : kCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "sim: " << e.what() << '\n';
    return kRuntime;
  }
}

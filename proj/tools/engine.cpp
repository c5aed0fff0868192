#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qotto/config.hpp"
#include "qotto/errors.hpp"
#include "qotto/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Two-spin quantum Otto engine"};
  std::string mode;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("mode", mode, "cycle | sweep | optimize | montecarlo | control")
      ->required()
      ->check(CLI::IsMember({"cycle", "sweep", "optimize", "montecarlo", "control"}));
  app.add_option("--config", config_path, "configuration file")->required();
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides [run] seed)");
  auto* threads_opt = app.add_option("--threads", threads, "worker threads (fallback: ENGINE_THREADS)")
                          ->check(CLI::PositiveNumber);
  app.set_version_flag("--version", QOTTO_VERSION);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qotto::kExitValidation;
  }

  qotto::RunConfig config;
  try {
    config = qotto::load_config(config_path);
    config.mode = qotto::run_mode_from_string(mode);
    if (*out_opt) config.output_dir = out_dir;
    if (*seed_opt) {
      config.seed = seed;
      config.noise.seed = seed;
    }
    if (*threads_opt) {
      config.threads = threads;
    } else if (const char* env = std::getenv("ENGINE_THREADS")) {
      try {
        config.threads = std::stoi(env);
      } catch (const std::exception&) {
        throw qotto::ValidationError("ENGINE_THREADS", std::string("not an integer: '") + env + "'");
      }
    }
    config.validate();
  } catch (const qotto::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qotto::kExitValidation;
  }
  return qotto::run_with_exit_code(config);
}

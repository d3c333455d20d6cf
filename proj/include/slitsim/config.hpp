#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "slitsim/cml.hpp"
#include "slitsim/core.hpp"

namespace slitsim {

/// Parse or validation failure in an experiment config. `line()` is 0 for
/// errors that do not come from a file line (overrides, cross-field checks).
class ConfigError : public ValidationError {
 public:
  ConfigError(std::string key, const std::string& message, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct ExperimentConfig {
  struct Params {
    double hbar_eff = 1.0;
    double mass = 1.0;
    double sigma0 = 1.0;
  } params;
  struct Slit {
    double X = 2.0;
    double v_x = -0.5;
    double v_y = 1.0;
    double phi0 = 0.0;
    double amplitude_ratio = 1.0;
  } slit;
  struct GridBlock {
    double x_min = -15.0;
    double x_max = 15.0;
    std::size_t n_points = 4096;
  } grid;
  struct Time {
    double t0 = 0.0;
    double t1 = 8.0;
    std::size_t n_frames = 16;
  } time;
  struct Trajectory {
    std::size_t n_seeds = 40;
    double seed_span_sigmas = 3.0;
    double dt_init = 1e-2;
  } trajectory;
  struct Cml {
    cml::Profile profile = cml::Profile::Gaussian;
    double safety = 0.9;
    double t_end = 4.0;
    std::size_t walker_count = 1000000;
    std::uint64_t rng_seed = 12345;
  } cml;
  struct Output {
    std::string directory = "out";
    std::vector<std::string> formats = {"csv", "pgm"};
  } output;

  SlitConfig slit_config() const;
  Grid make_grid() const;
  bool wants(std::string_view format) const;
};

/// Flat "key = value" text grouped by [section] headers; '#' and ';' start
/// comments. Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig parse_config(std::string_view text);

ExperimentConfig load_config(const std::string& path);

/// Sets one key, given either bare ("X") or qualified ("slit.X").
void apply_override(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Cross-checks every module precondition the config feeds. Throws ConfigError.
void validate(const ExperimentConfig& config);

}  // namespace slitsim

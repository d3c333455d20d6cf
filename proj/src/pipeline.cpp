#include "slitsim/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "slitsim/dynamics.hpp"
#include "slitsim/interference.hpp"
#include "slitsim/io.hpp"
#include "slitsim/parallel.hpp"

namespace slitsim {

namespace fs = std::filesystem;

Command parse_command(std::string_view name) {
  if (name == "intensity") return Command::Intensity;
  if (name == "trajectories") return Command::Trajectories;
  if (name == "fringes") return Command::Fringes;
  if (name == "cml") return Command::Cml;
  if (name == "verify") return Command::Verify;
  if (name == "all") return Command::All;
  throw ConfigError("command", "unknown command '" + std::string(name) + "'");
}

bool PipelineSummary::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string PipelineSummary::text() const {
  std::ostringstream os;
  for (const auto& c : checks) os << verify::format(c) << '\n';
  return os.str();
}

namespace {

class Runner {
 public:
  Runner(const ExperimentConfig& config)
      : config_(config), cfg_(config.slit_config()), grid_(config.make_grid()), dir_(config.output.directory) {
    fs::create_directories(dir_);
  }

  std::vector<double> frame_times() const {
    return linspace(config_.time.t0, config_.time.t1, config_.time.n_frames);
  }

  std::vector<ScalarField> frames() const {
    const auto times = frame_times();
    std::vector<ScalarField> out(times.size(), ScalarField{grid_, {}, 0.0});
    parallel_for(times.size(), [&](std::size_t k) { out[k] = normalize(intensity_field(cfg_, grid_, times[k])); });
    return out;
  }

  void intensity(PipelineSummary& s) {
    const auto fields = frames();
    verify::CheckResult norm{"intensity normalization", true, 0.0, 0.0, 0.0, {}};
    verify::CheckResult sym{"intensity mirror symmetry", true, 0.0, 0.0, 0.0, {}};
    for (std::size_t k = 0; k < fields.size(); ++k) {
      const auto& f = fields[k];
      const double dev = std::abs(trapezoid(f) - 1.0);
      if (dev > norm.worst) norm = {norm.name, true, dev, 0.0, f.time, {}};
      if (cfg_.amplitude_ratio == 1.0) {
        const std::size_t n = f.values.size();
        for (std::size_t i = 0; i < n; ++i) {
          const double d = std::abs(f.values[i] - f.values[n - 1 - i]) / f.peak_abs();
          if (d > sym.worst) sym = {sym.name, true, d, f.grid[i], f.time, {}};
        }
      }
    }
    norm.pass = norm.worst <= 1e-9;
    sym.pass = sym.worst <= 1e-12;
    s.checks.push_back(norm);
    if (cfg_.amplitude_ratio == 1.0) s.checks.push_back(sym);
    if (config_.wants("csv")) {
      for (std::size_t k = 0; k < fields.size(); ++k) write(s, "intensity_" + std::to_string(k) + ".csv", fields[k]);
    }
    if (config_.wants("pgm")) {
      const auto path = dir_ / "intensity.pgm";
      io::write_heatmap(fields, path.string());
      s.artifacts.push_back(path.string());
    }
  }

  void trajectories(PipelineSummary& s) {
    const double t0 = config_.time.t0;
    const double t1 = config_.time.t1;
    const auto seeds = equidistant_seeds(cfg_, config_.trajectory.n_seeds, config_.trajectory.seed_span_sigmas, t0);
    TrajectoryOptions opt;
    opt.dt_init = config_.trajectory.dt_init;
    opt.max_step_displacement = grid_.dx();
    opt.n_output = std::max<std::size_t>(2, config_.time.n_frames);
    const auto set = integrate_trajectories(cfg_, seeds, t0, t1, opt);
    s.checks.push_back(verify::no_crossing(set));
    s.checks.push_back(verify::flux_tubes(cfg_, set, 0.01));
    if (cfg_.amplitude_ratio == 1.0) s.checks.push_back(verify::mirror_symmetry(set, 1e-8));
    if (config_.wants("csv")) {
      const auto path = dir_ / "trajectories.csv";
      io::write_csv(set, path.string());
      s.artifacts.push_back(path.string());
    }
    if (config_.wants("pgm") && config_.time.n_frames >= 2) {
      const auto fields = frames();
      const auto base = dir_ / "trajectories_base.pgm";
      const auto overlay = dir_ / "trajectories_overlay.pgm";
      io::write_heatmap(fields, base.string());
      io::write_heatmap_overlay(fields, set, overlay.string());
      s.artifacts.push_back(base.string());
      s.artifacts.push_back(overlay.string());
    }
  }

  void fringes(PipelineSummary& s) {
    if (!(cfg_.v_x < 0.0)) throw ValidationError("v_x", "fringe check needs approaching packets (v_x < 0)");
    const double t_star = cfg_.coincidence_time();
    // Only nodes that fall inside the grid can be located.
    const auto nodes = dark_fringe_positions(cfg_, 64);
    int inside = 0;
    for (double x : nodes)
      if (x < grid_.x_max() - 2.0 * grid_.dx()) ++inside;
    if (inside == 0) throw ValidationError("grid", "no dark fringe lies inside the grid");
    s.checks.push_back(verify::dark_fringes(cfg_, grid_, inside, 0.01));
    const auto field = normalize(intensity_field(cfg_, grid_, t_star));
    const auto report = find_extrema(field);
    verify::CheckResult vis{"fringe visibility", report.visibility >= 0.0 && report.visibility <= 1.0,
                            report.visibility, 0.0, t_star, {}};
    s.checks.push_back(vis);
    if (config_.wants("csv")) {
      const auto path = dir_ / "fringes.csv";
      std::ofstream out(path);
      if (!out) throw io::IoError("cannot open '" + path.string() + "' for writing");
      out << std::setprecision(17) << "kind,x,value,predicted\n";
      for (std::size_t i = 0; i < report.minima.size(); ++i) {
        double predicted = std::nan("");
        for (double x : nodes)
          if (std::abs(std::abs(report.minima[i]) - x) < 0.5 * std::numbers::pi / cfg_.k_x())
            predicted = std::copysign(x, report.minima[i]);
        out << "min," << report.minima[i] << ',' << report.minima_values[i] << ',' << predicted << '\n';
      }
      for (std::size_t i = 0; i < report.maxima.size(); ++i)
        out << "max," << report.maxima[i] << ',' << report.maxima_values[i] << ",\n";
      if (!out) throw io::IoError("write to '" + path.string() + "' failed");
      s.artifacts.push_back(path.string());
      write(s, "fringes_field.csv", field);
    }
  }

  void cml(PipelineSummary& s) {
    const double t_end = config_.cml.t_end;
    const auto series = cml::cml_run(cfg_, grid_, t_end, config_.cml.safety, config_.cml.profile);
    if (config_.cml.profile == cml::Profile::Gaussian) {
      s.checks.push_back(verify::cml_variance(cfg_, series, 0.02));
      s.checks.push_back(verify::cml_interference(cfg_, series.final_state, 0.02, 0.01));
    }
    s.checks.push_back(verify::cml_ballistic_slope(series, 2.0, 0.1));
    s.checks.push_back(verify::walker_msd(cfg_.params, config_.cml.walker_count, t_end, config_.cml.rng_seed, 0.01));
    if (config_.wants("csv")) {
      const auto path = dir_ / "cml_moments.csv";
      std::ofstream out(path);
      if (!out) throw io::IoError("cannot open '" + path.string() + "' for writing");
      out << std::setprecision(17) << "t,variance1,variance2,analytic\n";
      const double s0 = cfg_.params.sigma0();
      const std::size_t stride = std::max<std::size_t>(1, series.times.size() / 1000);
      for (std::size_t k = 0; k < series.times.size(); ++k) {
        if (k % stride != 0 && k + 1 != series.times.size()) continue;
        const double t = series.times[k];
        out << t << ',' << series.variance1[k] << ',' << series.variance2[k] << ','
            << s0 * s0 + cfg_.params.u0_sq() * t * t << '\n';
      }
      if (!out) throw io::IoError("write to '" + path.string() + "' failed");
      s.artifacts.push_back(path.string());
      const auto field = cml::cml_interfere(series.final_state,
                                            [&](double x, double t) { return relative_phase(cfg_, x, t); });
      write(s, "cml_interference.csv", field);
    }
  }

  void verify_all(PipelineSummary& s) {
    const auto times = linspace(config_.time.t0, config_.time.t1, 16);
    s.checks.push_back(verify::current_identity(cfg_, grid_, times, 1e-6, 1e-10));
    s.checks.push_back(verify::intensity_identity(cfg_, grid_, times, 1e-8, 1e-10));
    s.checks.push_back(verify::phase_identity(cfg_, grid_.x_min(), grid_.x_max(), config_.time.t0, config_.time.t1,
                                              1000, config_.cml.rng_seed, 1e-8));
    s.checks.push_back(verify::expanded_current(cfg_, grid_.x_min(), grid_.x_max(), config_.time.t0,
                                                config_.time.t1, 10000, config_.cml.rng_seed, 1e-12));
    const double t_fringe = cfg_.v_x < 0.0 ? cfg_.coincidence_time() : config_.time.t1;
    s.checks.push_back(verify::non_additivity(cfg_, grid_, t_fringe, 1e3 * 1e-6));
  }

  void write_summary(PipelineSummary& s) {
    const auto path = dir_ / "summary.txt";
    std::ofstream out(path);
    out << s.text();
    if (!out) throw io::IoError("cannot write '" + path.string() + "'");
    s.artifacts.push_back(path.string());
  }

 private:
  void write(PipelineSummary& s, const std::string& name, const ScalarField& f) {
    const auto path = dir_ / name;
    io::write_csv(f, path.string());
    s.artifacts.push_back(path.string());
  }

  const ExperimentConfig& config_;
  SlitConfig cfg_;
  Grid grid_;
  fs::path dir_;
};

}  // namespace

PipelineSummary run_pipeline(const ExperimentConfig& config, Command command) {
  validate(config);
  Runner runner(config);
  PipelineSummary summary;
  const bool all = command == Command::All;
  if (all || command == Command::Intensity) runner.intensity(summary);
  if (all || command == Command::Trajectories) runner.trajectories(summary);
  if (all || command == Command::Fringes) runner.fringes(summary);
  if (all || command == Command::Cml) runner.cml(summary);
  if (all || command == Command::Verify) runner.verify_all(summary);
  runner.write_summary(summary);
  return summary;
}

}  // namespace slitsim

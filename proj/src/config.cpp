#include "slitsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace slitsim {

ConfigError::ConfigError(std::string key, const std::string& message, std::size_t line)
    : ValidationError(std::move(key), line ? message + " (line " + std::to_string(line) + ")" : message),
      line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view v) {
  const std::string text(v);
  char* end = nullptr;
  const double d = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(d))
    throw ConfigError(std::string(key), "expected a number, got '" + text + "'");
  return d;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(std::string(key), "expected a non-negative integer, got '" + std::string(v) + "'");
  return out;
}

struct Entry {
  std::string_view section;
  std::string_view key;
  std::function<void(ExperimentConfig&, std::string_view)> set;
};

const std::vector<Entry>& entries() {
  using C = ExperimentConfig;
  static const std::vector<Entry> table = {
      {"params", "hbar_eff", [](C& c, std::string_view v) { c.params.hbar_eff = parse_double("hbar_eff", v); }},
      {"params", "mass", [](C& c, std::string_view v) { c.params.mass = parse_double("mass", v); }},
      {"params", "sigma0", [](C& c, std::string_view v) { c.params.sigma0 = parse_double("sigma0", v); }},
      {"slit", "X", [](C& c, std::string_view v) { c.slit.X = parse_double("X", v); }},
      {"slit", "v_x", [](C& c, std::string_view v) { c.slit.v_x = parse_double("v_x", v); }},
      {"slit", "v_y", [](C& c, std::string_view v) { c.slit.v_y = parse_double("v_y", v); }},
      {"slit", "phi0", [](C& c, std::string_view v) { c.slit.phi0 = parse_double("phi0", v); }},
      {"slit", "amplitude_ratio",
       [](C& c, std::string_view v) { c.slit.amplitude_ratio = parse_double("amplitude_ratio", v); }},
      {"grid", "x_min", [](C& c, std::string_view v) { c.grid.x_min = parse_double("x_min", v); }},
      {"grid", "x_max", [](C& c, std::string_view v) { c.grid.x_max = parse_double("x_max", v); }},
      {"grid", "n_points", [](C& c, std::string_view v) { c.grid.n_points = parse_unsigned("n_points", v); }},
      {"time", "t0", [](C& c, std::string_view v) { c.time.t0 = parse_double("t0", v); }},
      {"time", "t1", [](C& c, std::string_view v) { c.time.t1 = parse_double("t1", v); }},
      {"time", "n_frames", [](C& c, std::string_view v) { c.time.n_frames = parse_unsigned("n_frames", v); }},
      {"trajectory", "n_seeds",
       [](C& c, std::string_view v) { c.trajectory.n_seeds = parse_unsigned("n_seeds", v); }},
      {"trajectory", "seed_span_sigmas",
       [](C& c, std::string_view v) { c.trajectory.seed_span_sigmas = parse_double("seed_span_sigmas", v); }},
      {"trajectory", "dt_init", [](C& c, std::string_view v) { c.trajectory.dt_init = parse_double("dt_init", v); }},
      {"cml", "profile",
       [](C& c, std::string_view v) {
         if (v == "gaussian") c.cml.profile = cml::Profile::Gaussian;
         else if (v == "delta") c.cml.profile = cml::Profile::Delta;
         else throw ConfigError("profile", "expected 'gaussian' or 'delta', got '" + std::string(v) + "'");
       }},
      {"cml", "safety", [](C& c, std::string_view v) { c.cml.safety = parse_double("safety", v); }},
      {"cml", "t_end", [](C& c, std::string_view v) { c.cml.t_end = parse_double("t_end", v); }},
      {"cml", "walker_count",
       [](C& c, std::string_view v) { c.cml.walker_count = parse_unsigned("walker_count", v); }},
      {"cml", "rng_seed", [](C& c, std::string_view v) { c.cml.rng_seed = parse_unsigned("rng_seed", v); }},
      {"output", "directory", [](C& c, std::string_view v) { c.output.directory = std::string(v); }},
      {"output", "formats",
       [](C& c, std::string_view v) {
         c.output.formats.clear();
         std::string item;
         std::istringstream in{std::string(v)};
         while (std::getline(in, item, ',')) {
           const auto f = std::string(trim(item));
           if (f != "csv" && f != "pgm") throw ConfigError("formats", "unknown output format '" + f + "'");
           c.output.formats.push_back(f);
         }
       }},
  };
  return table;
}

const Entry* find_entry(std::string_view section, std::string_view key) {
  for (const auto& e : entries())
    if (e.key == key && (section.empty() || e.section == section)) return &e;
  return nullptr;
}

}  // namespace

SlitConfig ExperimentConfig::slit_config() const {
  return make_slit_config(make_params(params.hbar_eff, params.mass, params.sigma0), slit.X, slit.v_x, slit.v_y,
                          slit.phi0, slit.amplitude_ratio);
}

Grid ExperimentConfig::make_grid() const { return slitsim::make_grid(grid.x_min, grid.x_max, grid.n_points); }

bool ExperimentConfig::wants(std::string_view format) const {
  return std::find(output.formats.begin(), output.formats.end(), format) != output.formats.end();
}

void apply_override(ExperimentConfig& config, std::string_view key, std::string_view value) {
  std::string_view section;
  if (const auto dot = key.find('.'); dot != std::string_view::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
  }
  const Entry* e = find_entry(section, key);
  if (!e) throw ConfigError(std::string(key), "unknown key '" + std::string(key) + "'");
  e->set(config, trim(value));
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::map<std::string, std::size_t> key_lines;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("section", "unterminated section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      const bool known = std::any_of(entries().begin(), entries().end(),
                                     [&](const Entry& e) { return e.section == section; });
      if (!known) throw ConfigError(section, "unknown section '" + section + "'", line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line", "expected 'key = value'", line_no);
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const Entry* e = find_entry(section, key);
    if (!e) throw ConfigError(std::string(key), "unknown key '" + std::string(key) + "'", line_no);
    try {
      e->set(config, value);
    } catch (const ConfigError& err) {
      throw ConfigError(err.field(), err.message(), line_no);
    }
    key_lines[std::string(e->key)] = line_no;
  }
  try {
    validate(config);
  } catch (const ConfigError& err) {
    const auto it = key_lines.find(err.field());
    if (it == key_lines.end()) throw;
    throw ConfigError(err.field(), err.message(), it->second);
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const ExperimentConfig& c) {
  try {
    (void)c.slit_config();
    (void)c.make_grid();
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ConfigError(e.field(), e.message());
  }
  if (!(c.time.t0 >= 0.0)) throw ConfigError("t0", "must be non-negative");
  if (!(c.time.t1 > c.time.t0)) throw ConfigError("t1", "must exceed t0");
  if (c.time.n_frames < 1) throw ConfigError("n_frames", "need at least one frame");
  if (c.trajectory.n_seeds < 2 || c.trajectory.n_seeds % 2 != 0)
    throw ConfigError("n_seeds", "must be a positive even number");
  if (!(c.trajectory.seed_span_sigmas > 0.0)) throw ConfigError("seed_span_sigmas", "must be positive");
  if (!(c.trajectory.dt_init > 0.0)) throw ConfigError("dt_init", "must be positive");
  if (!(c.cml.safety > 0.0 && c.cml.safety <= 1.0)) throw ConfigError("safety", "must lie in (0, 1]");
  if (!(c.cml.t_end > 0.0)) throw ConfigError("t_end", "must be positive");
  if (c.cml.walker_count < 1) throw ConfigError("walker_count", "need at least one walker");
  if (c.output.directory.empty()) throw ConfigError("directory", "must not be empty");
}

}  // namespace slitsim

#include "slitsim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "slitsim/dispersion.hpp"
#include "slitsim/interference.hpp"
#include "slitsim/oracle.hpp"

namespace slitsim::verify {

std::string format(const CheckResult& r) {
  std::ostringstream os;
  os << std::setprecision(6) << r.name << ": " << (r.pass ? "PASS" : "FAIL") << " worst=" << r.worst
     << " at x=" << r.x << ", t=" << r.t;
  if (!r.detail.empty()) os << " (" << r.detail << ")";
  return os.str();
}

namespace {

CheckResult named(std::string name) {
  CheckResult r;
  r.name = std::move(name);
  return r;
}

void track(CheckResult& r, double dev, double x, double t) {
  if (dev > r.worst) {
    r.worst = dev;
    r.x = x;
    r.t = t;
  }
}

CheckResult pointwise(std::string name, const SlitConfig& cfg, const Grid& grid, const std::vector<double>& times,
                      double tolerance, double mask, double (*classical)(const SlitConfig&, double, double),
                      double (*quantum)(const SlitConfig&, double, double)) {
  CheckResult r = named(std::move(name));
  std::size_t compared = 0;
  for (double t : times) {
    const ScalarField p = intensity_field(cfg, grid, t);
    const double floor = mask * p.peak_abs();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(p.values[i] > floor)) continue;
      const double x = grid[i];
      const double a = classical(cfg, x, t);
      const double b = quantum(cfg, x, t);
      const double scale = std::max(std::abs(a), std::abs(b));
      ++compared;
      if (scale > 0.0) track(r, std::abs(a - b) / scale, x, t);
    }
  }
  r.pass = compared > 0 && r.worst <= tolerance;
  r.detail = std::to_string(compared) + " points";
  return r;
}

}  // namespace

CheckResult current_identity(const SlitConfig& cfg, const Grid& grid, const std::vector<double>& times,
                             double tolerance, double mask) {
  return pointwise("current identity", cfg, grid, times, tolerance, mask, &total_current, &oracle::quantum_current);
}

CheckResult intensity_identity(const SlitConfig& cfg, const Grid& grid, const std::vector<double>& times,
                               double tolerance, double mask) {
  return pointwise("intensity identity", cfg, grid, times, tolerance, mask, &total_intensity,
                   &oracle::superposed_density);
}

CheckResult phase_identity(const SlitConfig& cfg, double x_min, double x_max, double t0, double t1,
                           std::size_t samples, std::uint64_t seed, double tolerance) {
  CheckResult r = named("phase identity");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(x_min, x_max);
  std::uniform_real_distribution<double> ut(t0, t1);
  const auto one = slit_packet(cfg, Slit::One);
  const auto two = slit_packet(cfg, Slit::Two);
  std::size_t used = 0;
  for (std::size_t n = 0; n < samples; ++n) {
    const double x = ux(rng);
    const double t = ut(rng);
    const auto psi1 = oracle::packet_wavefunction(one, x, t);
    const auto psi2 = oracle::packet_wavefunction(two, x, t);
    if (std::abs(psi1) <= 1e-10 || std::abs(psi2) <= 1e-10) continue;
    ++used;
    const double diff = relative_phase(cfg, x, t) - (std::arg(psi1) - std::arg(psi2));
    track(r, std::abs(std::remainder(diff, 2.0 * std::numbers::pi)), x, t);
  }
  r.pass = used > 0 && r.worst <= tolerance;
  r.detail = std::to_string(used) + " of " + std::to_string(samples) + " samples above amplitude floor";
  return r;
}

CheckResult expanded_current(const SlitConfig& cfg, double x_min, double x_max, double t0, double t1,
                             std::size_t samples, std::uint64_t seed, double tolerance) {
  CheckResult r = named("expanded vs closed current");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(x_min, x_max);
  std::uniform_real_distribution<double> ut(t0, t1);
  for (std::size_t n = 0; n < samples; ++n) {
    const double x = ux(rng);
    const double t = ut(rng);
    const double closed = total_current(cfg, x, t);
    const double expanded = total_current_expanded(cfg, x, t);
    track(r, std::abs(expanded - closed) / (std::abs(closed) + 1e-15 / tolerance), x, t);
  }
  r.pass = r.worst <= tolerance;
  r.detail = std::to_string(samples) + " samples";
  return r;
}

CheckResult dark_fringes(const SlitConfig& cfg, const Grid& grid, int n_minima, double tolerance) {
  CheckResult r = named("dark fringes");
  if (!(cfg.v_x < 0.0)) {
    r.detail = "packet centres never coincide for v_x >= 0";
    return r;
  }
  const double t_star = cfg.coincidence_time();
  r.t = t_star;
  const auto expected = dark_fringe_positions(cfg, n_minima - 1);
  const auto report = find_extrema(intensity_field(cfg, grid, t_star));
  std::vector<double> positive;
  for (double m : report.minima)
    if (m > 0.0) positive.push_back(m);
  if (positive.size() < expected.size()) {
    r.detail = "found " + std::to_string(positive.size()) + " minima at x > 0, expected " +
               std::to_string(expected.size());
    r.worst = std::numeric_limits<double>::infinity();
    return r;
  }
  for (std::size_t n = 0; n < expected.size(); ++n) {
    const double err = std::abs(positive[n] - expected[n]);
    if (err >= r.worst) {
      r.worst = err;
      r.x = positive[n];
    }
  }
  r.pass = r.worst <= tolerance;
  return r;
}

CheckResult non_additivity(const SlitConfig& cfg, const Grid& grid, double t, double threshold) {
  CheckResult r = named("non-additive current");
  r.t = t;
  const auto report = find_extrema(intensity_field(cfg, grid, t));
  const auto first_min = std::find_if(report.minima.begin(), report.minima.end(), [](double m) { return m > 0.0; });
  if (first_min == report.minima.end()) {
    r.detail = "no interference minimum at x > 0";
    return r;
  }
  const auto bright = std::find_if(report.maxima.begin(), report.maxima.end(),
                                   [&](double m) { return m > *first_min; });
  if (bright == report.maxima.end()) {
    r.detail = "no bright fringe beyond the first minimum";
    return r;
  }
  const double x = *bright;
  const double total = total_current(cfg, x, t);
  const double separate = oracle::packet_current(slit_packet(cfg, Slit::One), x, t) +
                          cfg.amplitude_ratio * cfg.amplitude_ratio *
                              oracle::packet_current(slit_packet(cfg, Slit::Two), x, t);
  r.x = x;
  r.worst = std::abs(total - separate) / std::max(std::abs(total), std::abs(separate));
  r.pass = r.worst > threshold;
  std::ostringstream os;
  os << "J_tot=" << total << ", J1+J2=" << separate << ", required gap > " << threshold;
  r.detail = os.str();
  return r;
}

CheckResult no_crossing(const TrajectorySet& set) {
  CheckResult r = named("no crossing");
  std::size_t stalled = 0;
  for (std::size_t s = 0; s < set.positions.size(); ++s) {
    if (set.stalled(s)) ++stalled;
    const double x0 = set.positions[s].front();
    if (x0 == 0.0) continue;
    std::size_t changes = 0;
    double first_x = 0.0;
    double first_t = 0.0;
    for (std::size_t k = 1; k < set.times.size(); ++k) {
      if ((set.positions[s][k] > 0.0) != (set.positions[s][k - 1] > 0.0)) {
        if (changes == 0) {
          first_x = set.positions[s][k];
          first_t = set.times[k];
        }
        ++changes;
      }
    }
    if (static_cast<double>(changes) > r.worst) {
      r.worst = static_cast<double>(changes);
      r.x = first_x;
      r.t = first_t;
    }
  }
  r.pass = r.worst == 0.0 && stalled == 0;
  r.detail = std::to_string(set.positions.size()) + " trajectories, " + std::to_string(stalled) + " stalled";
  return r;
}

CheckResult flux_tubes(const SlitConfig& cfg, const TrajectorySet& set, double tolerance) {
  CheckResult r = named("flux tubes");
  std::vector<std::size_t> order(set.seeds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return set.seeds[a] < set.seeds[b]; });
  for (std::size_t n = 0; n + 1 < order.size(); ++n) {
    const auto flux = flux_between(cfg, set, order[n], order[n + 1]);
    if (!(flux.front() > 0.0)) continue;
    for (std::size_t k = 0; k < flux.size(); ++k) {
      const double drift = std::abs(flux[k] - flux.front()) / flux.front();
      if (drift > r.worst) {
        r.worst = drift;
        r.x = set.positions[order[n]][k];
        r.t = set.times[k];
      }
    }
  }
  r.pass = r.worst <= tolerance;
  r.detail = std::to_string(order.size() - 1) + " tubes";
  return r;
}

CheckResult mirror_symmetry(const TrajectorySet& set, double tolerance) {
  CheckResult r = named("mirror symmetry");
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < set.seeds.size(); ++i) {
    const auto it = std::find(set.seeds.begin(), set.seeds.end(), -set.seeds[i]);
    if (it == set.seeds.end()) continue;
    const auto j = static_cast<std::size_t>(it - set.seeds.begin());
    ++pairs;
    for (std::size_t k = 0; k < set.times.size(); ++k)
      track(r, std::abs(set.positions[i][k] + set.positions[j][k]), set.positions[i][k], set.times[k]);
  }
  r.pass = pairs > 0 && r.worst <= tolerance;
  r.detail = std::to_string(pairs / 2) + " mirrored pairs";
  return r;
}

CheckResult cml_variance(const SlitConfig& cfg, const cml::MomentSeries& series, double rel_tolerance) {
  CheckResult r = named("cml variance law");
  const double t = series.times.back();
  const double s0 = cfg.params.sigma0();
  const double expected = s0 * s0 + cfg.params.u0_sq() * t * t;
  r.t = t;
  r.worst = std::max(std::abs(series.variance1.back() - expected), std::abs(series.variance2.back() - expected)) /
            expected;
  r.pass = r.worst <= rel_tolerance;
  std::ostringstream os;
  os << "sigma^2=" << series.variance1.back() << ", expected " << expected;
  r.detail = os.str();
  return r;
}

namespace {

double loglog_slope(const std::vector<double>& times, const std::vector<double>& var, double t_lo) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (times[k] < t_lo) continue;
    const double growth = var[k] - var.front();
    if (!(growth > 0.0)) continue;
    const double lx = std::log(times[k]);
    const double ly = std::log(growth);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

}  // namespace

CheckResult cml_ballistic_slope(const cml::MomentSeries& series, double expected, double tolerance) {
  CheckResult r = named("ballistic slope");
  const double t_end = series.times.back();
  const double s1 = loglog_slope(series.times, series.variance1, 0.1 * t_end);
  const double s2 = loglog_slope(series.times, series.variance2, 0.1 * t_end);
  r.t = t_end;
  r.worst = std::max(std::abs(s1 - expected), std::abs(s2 - expected));
  r.pass = std::isfinite(r.worst) && r.worst <= tolerance;
  std::ostringstream os;
  os << "slopes " << s1 << ", " << s2;
  r.detail = os.str();
  return r;
}

CheckResult walker_msd(const PhysicalParams& params, std::size_t count, double t, std::uint64_t seed,
                       double rel_tolerance) {
  CheckResult r = named("walker mean-square displacement");
  const double s0 = params.sigma0();
  const double expected = mean_square_displacement(params, s0 * s0, t);
  const double msd = cml::walker_ensemble_msd(params, count, t, seed);
  r.t = t;
  r.worst = std::abs(msd - expected) / expected;
  r.pass = r.worst <= rel_tolerance;
  std::ostringstream os;
  os << "<x^2>=" << msd << ", expected " << expected << ", " << count << " walkers";
  r.detail = os.str();
  return r;
}

CheckResult cml_interference(const SlitConfig& cfg, const cml::LatticeState& state, double rel_tolerance,
                             double mask) {
  CheckResult r = named("cml interference");
  const auto lattice = cml::cml_interfere(state, [&](double x, double t) { return relative_phase(cfg, x, t); });
  const auto closed = normalize(intensity_field(cfg, state.grid, state.time));
  const auto cmp = oracle::compare_fields(lattice, closed, rel_tolerance, mask);
  r.worst = cmp.max_rel_deviation;
  r.x = cmp.worst_x;
  r.t = state.time;
  r.pass = cmp.pass && cmp.compared > 0;
  r.detail = std::to_string(cmp.compared) + " cells compared";
  return r;
}

}  // namespace slitsim::verify

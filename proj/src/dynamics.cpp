#include "slitsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "slitsim/dispersion.hpp"
#include "slitsim/interference.hpp"
#include "slitsim/parallel.hpp"

namespace slitsim {

VelocityDecomposition velocity_decomposition(const SlitConfig& cfg, double x, double t) {
  const auto one = slit_packet(cfg, Slit::One);
  const auto two = slit_packet(cfg, Slit::Two);
  return {packet_velocity_field(one, x, t), packet_velocity_field(two, x, t), osmotic_velocity(one, x, t),
          osmotic_velocity(two, x, t)};
}

double total_current(const SlitConfig& cfg, double x, double t) {
  const auto [p1, p2] = slit_densities(cfg, x, t);
  const auto [v1, v2, u1, u2] = velocity_decomposition(cfg, x, t);
  const double r = cfg.amplitude_ratio;
  const double phi = relative_phase(cfg, x, t);
  const double cross = r * std::sqrt(p1 * p2);
  return p1 * v1 + r * r * p2 * v2 + cross * ((v1 + v2) * std::cos(phi) + (u2 - u1) * std::sin(phi));
}

double total_current_expanded(const SlitConfig& cfg, double x, double t) {
  const auto [p1, p2] = slit_densities(cfg, x, t);
  const auto [v1, v2, u1, u2] = velocity_decomposition(cfg, x, t);
  const double r1 = std::sqrt(p1);
  const double r2 = cfg.amplitude_ratio * std::sqrt(p2);
  const double phi = relative_phase(cfg, x, t);

  const double cos_v1_v2 = std::cos(phi);
  const double cos_u1_u2 = std::cos(phi);
  const double cos_v1_u2 = std::sin(phi);   // cos(phi - pi/2)
  const double cos_u1_v2 = -std::sin(phi);  // cos(phi + pi/2)

  const double mixed = (v1 + v2) * cos_v1_v2                 //
                       + (v1 + u2 / 2) * cos_v1_u2           //
                       - (v1 - u2 / 2) * cos_v1_u2           //
                       + (u1 / 2 + v2) * cos_u1_v2           //
                       - (-u1 / 2 + v2) * cos_u1_v2          //
                       + (u1 / 2 + u2 / 2) * cos_u1_u2       //
                       - (u1 / 2 - u2 / 2) * cos_u1_u2       //
                       - (-u1 / 2 + u2 / 2) * cos_u1_u2      //
                       + (-u1 / 2 - u2 / 2) * cos_u1_u2;
  return r1 * r1 * v1 + r2 * r2 * v2 + r1 * r2 * mixed;
}

namespace {

std::string node_message(double x, double t) {
  std::ostringstream os;
  os << "node singularity at x=" << x << ", t=" << t;
  return os.str();
}

}  // namespace

NodeSingularity::NodeSingularity(double x, double t) : NumericError(node_message(x, t)), x_(x), t_(t) {}

double node_floor(const SlitConfig& cfg, double t) {
  const double r = cfg.amplitude_ratio;
  const double envelope = (1.0 + r) * (1.0 + r) / (std::sqrt(2.0 * std::numbers::pi) * sigma_t(cfg.params, t));
  return 1e-14 * envelope;
}

double average_velocity(const SlitConfig& cfg, double x, double t) {
  const double p = total_intensity(cfg, x, t);
  if (!(p > node_floor(cfg, t))) throw NodeSingularity(x, t);
  return total_current(cfg, x, t) / p;
}

std::vector<double> equidistant_seeds(const SlitConfig& cfg, std::size_t n_total, double span_sigmas, double t0) {
  if (n_total < 2 || n_total % 2 != 0) throw ValidationError("n_seeds", "must be a positive even number");
  if (!(span_sigmas > 0.0)) throw ValidationError("seed_span_sigmas", "must be positive");
  const std::size_t per_slit = n_total / 2;
  const double center = cfg.center1(t0);
  const double half_width = span_sigmas * sigma_t(cfg.params, t0);
  std::vector<double> seeds;
  seeds.reserve(n_total);
  for (std::size_t j = 0; j < per_slit; ++j) {
    const double frac = per_slit == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(per_slit - 1);
    const double x = center + half_width * frac;
    seeds.push_back(x);
    seeds.push_back(-x);
  }
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  return seeds;
}

namespace {

double support_half_width(const SlitConfig& cfg, double t) {
  return std::abs(cfg.half_separation(t)) + 14.0 * sigma_t(cfg.params, t);
}

}  // namespace

double total_probability(const SlitConfig& cfg, double t, double max_spacing) {
  const double L = support_half_width(cfg, t);
  const auto n = static_cast<std::size_t>(std::ceil(2.0 * L / max_spacing)) + 1;
  return trapezoid(intensity_field(cfg, make_grid(-L, L, std::max<std::size_t>(n, 2)), t));
}

std::vector<double> equal_flux_seeds(const SlitConfig& cfg, std::size_t n, double t0) {
  if (n == 0) throw ValidationError("n_seeds", "must be positive");
  const double L = support_half_width(cfg, t0);
  const Grid grid = make_grid(-L, L, 20001);
  const ScalarField field = normalize(intensity_field(cfg, grid, t0));
  std::vector<double> cdf(grid.size(), 0.0);
  for (std::size_t i = 1; i < grid.size(); ++i)
    cdf[i] = cdf[i - 1] + 0.5 * (field.values[i - 1] + field.values[i]) * grid.dx();
  std::vector<double> seeds;
  seeds.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double target = (static_cast<double>(k) + 0.5) / static_cast<double>(n) * cdf.back();
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
    const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - cdf.begin()));
    const double span = cdf[i] - cdf[i - 1];
    const double frac = span > 0.0 ? (target - cdf[i - 1]) / span : 0.0;
    seeds.push_back(grid[i - 1] + frac * grid.dx());
  }
  return seeds;
}

namespace {

struct StepResult {
  bool ok;
  double x;
};

// One classical RK4 step; fails if any stage hits the node floor.
StepResult rk4_step(const SlitConfig& cfg, double x, double t, double h, double k1) {
  try {
    const double k2 = average_velocity(cfg, x + 0.5 * h * k1, t + 0.5 * h);
    const double k3 = average_velocity(cfg, x + 0.5 * h * k2, t + 0.5 * h);
    const double k4 = average_velocity(cfg, x + h * k3, t + h);
    return {true, x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)};
  } catch (const NodeSingularity&) {
    return {false, x};
  }
}

void integrate_one(const SlitConfig& cfg, double seed, const std::vector<double>& times,
                   const TrajectoryOptions& opt, std::vector<double>& out, double& stalled_at) {
  const double dt_min = opt.dt_init * std::ldexp(1.0, -20);
  out.assign(times.size(), seed);
  double x = seed;
  double t = times.front();
  double dt = opt.dt_init;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double target = times[k];
    while (t < target) {
      const bool last = dt >= target - t;
      const double h = last ? target - t : dt;
      bool accepted = false;
      double err = 0.0;
      double x_new = x;
      try {
        const double k1 = average_velocity(cfg, x, t);
        if (std::abs(k1) * h <= opt.max_step_displacement) {
          const auto full = rk4_step(cfg, x, t, h, k1);
          const auto half = rk4_step(cfg, x, t, 0.5 * h, k1);
          if (full.ok && half.ok) {
            const auto second = rk4_step(cfg, half.x, t + 0.5 * h, 0.5 * h,
                                         average_velocity(cfg, half.x, t + 0.5 * h));
            if (second.ok && total_intensity(cfg, second.x, t + h) > node_floor(cfg, t + h)) {
              err = std::abs(second.x - full.x) / 15.0;
              accepted = err <= opt.abs_tolerance + opt.rel_tolerance * std::abs(second.x);
              x_new = second.x;
            }
          }
        }
      } catch (const NodeSingularity&) {
        accepted = false;
      }
      if (!accepted) {
        dt = 0.5 * h;
        if (dt < dt_min) {
          stalled_at = t;
          for (std::size_t j = k; j < times.size(); ++j) out[j] = x;
          return;
        }
        continue;
      }
      x = x_new;
      t = last ? target : t + h;
      if (err < 0.03 * (opt.abs_tolerance + opt.rel_tolerance * std::abs(x))) dt = std::min(opt.dt_init, 2.0 * dt);
    }
    out[k] = x;
  }
}

}  // namespace

TrajectorySet integrate_trajectories(const SlitConfig& cfg, const std::vector<double>& seeds, double t0, double t1,
                                     const TrajectoryOptions& options) {
  if (seeds.empty()) throw ValidationError("seeds", "need at least one seed");
  if (!(t0 < t1)) throw ValidationError("t1", "must exceed t0");
  if (!(options.dt_init > 0.0)) throw ValidationError("dt_init", "must be positive");
  if (!(options.max_step_displacement > 0.0)) throw ValidationError("max_step_displacement", "must be positive");
  if (options.n_output < 2) throw ValidationError("n_output", "need at least two stored times");

  TrajectorySet set;
  set.seeds = seeds;
  set.times = linspace(t0, t1, options.n_output);
  set.positions.resize(seeds.size());
  set.stalled_at.assign(seeds.size(), std::numeric_limits<double>::quiet_NaN());
  set.v_y = cfg.v_y;
  parallel_for(seeds.size(), [&](std::size_t i) {
    integrate_one(cfg, seeds[i], set.times, options, set.positions[i], set.stalled_at[i]);
  });
  return set;
}

std::vector<double> flux_between(const SlitConfig& cfg, const TrajectorySet& set, std::size_t a, std::size_t b,
                                 double max_spacing) {
  if (a >= set.positions.size() || b >= set.positions.size()) throw ValidationError("trajectory", "index out of range");
  if (!(max_spacing > 0.0)) throw ValidationError("max_spacing", "must be positive");
  std::vector<double> flux(set.times.size());
  for (std::size_t k = 0; k < set.times.size(); ++k) {
    const double t = set.times[k];
    const double lo = set.positions[a][k];
    const double hi = set.positions[b][k];
    if (hi < lo) {
      std::ostringstream os;
      os << "trajectories " << a << " and " << b << " crossed before t=" << t;
      throw NumericError(os.str());
    }
    if (hi == lo) {
      flux[k] = 0.0;
      continue;
    }
    const auto n = std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil((hi - lo) / max_spacing)) + 1);
    const double integral = trapezoid(intensity_field(cfg, make_grid(lo, hi, n), t));
    flux[k] = integral / total_probability(cfg, t, max_spacing);
  }
  return flux;
}

}  // namespace slitsim

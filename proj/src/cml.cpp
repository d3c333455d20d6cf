#include "slitsim/cml.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "slitsim/dispersion.hpp"
#include "slitsim/interference.hpp"
#include "slitsim/parallel.hpp"

namespace slitsim::cml {

namespace {

// Admissible steps land on 1/2 up to rounding.
constexpr double kMaxAlpha = 0.5 * (1.0 + 1e-12);

std::string stability_message(double alpha, double max_dt) {
  std::ostringstream os;
  os << "diffusion number " << alpha << " exceeds 0.5; largest admissible dt is " << max_dt;
  return os.str();
}

std::size_t nearest_cell(const Grid& grid, double x) {
  const double f = std::round((x - grid.x_min()) / grid.dx());
  return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(grid.size() - 1)));
}

void normalize_sum(std::vector<double>& p) {
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= sum;
}

// out = in + alpha * laplacian(in), zero-flux ends, written as a convex
// combination so alpha <= 1/2 never produces negative cells.
void diffuse(const std::vector<double>& in, std::vector<double>& out, double alpha) {
  const std::size_t n = in.size();
  const double keep = std::max(0.0, 1.0 - 2.0 * alpha);
  const double edge = std::max(0.0, 1.0 - alpha);
  out.resize(n);
  out[0] = edge * in[0] + alpha * in[1];
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = keep * in[i] + alpha * (in[i + 1] + in[i - 1]);
  out[n - 1] = edge * in[n - 1] + alpha * in[n - 2];
}

double diffusion_number(const LatticeState& s, double dt) {
  const double dx = s.grid.dx();
  return ballistic_diffusivity(s.params, s.time + 0.5 * dt) * dt / (dx * dx);
}

}  // namespace

StabilityError::StabilityError(double alpha, double max_dt)
    : NumericError(stability_message(alpha, max_dt)), alpha_(alpha), max_dt_(max_dt) {}

LatticeState cml_init(const SlitConfig& cfg, const Grid& grid, Profile profile) {
  const double reach = cfg.X + 6.0 * cfg.params.sigma0();
  if (grid.x_min() > -reach || grid.x_max() < reach)
    throw ValidationError("grid", "lattice must cover +/-(X + 6 sigma0) = +/-" + std::to_string(reach));
  if (grid.size() < 3) throw ValidationError("n_points", "lattice needs at least 3 cells");

  LatticeState s{grid, cfg.params, std::vector<double>(grid.size(), 0.0), std::vector<double>(grid.size(), 0.0),
                 0.0, cfg.v_x, -cfg.v_x, cfg.amplitude_ratio};
  if (profile == Profile::Delta) {
    s.p1[nearest_cell(grid, cfg.X)] = 1.0;
    s.p2[nearest_cell(grid, -cfg.X)] = 1.0;
    return s;
  }
  const double s0 = cfg.params.sigma0();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double a = (grid[j] - cfg.X) / s0;
    const double b = (grid[j] + cfg.X) / s0;
    s.p1[j] = std::exp(-0.5 * a * a);
    s.p2[j] = std::exp(-0.5 * b * b);
  }
  normalize_sum(s.p1);
  normalize_sum(s.p2);
  return s;
}

double admissible_dt(const PhysicalParams& params, double dx, double t, double alpha) {
  // u0^2 (t + dt/2) dt = alpha dx^2, positive root written without cancellation.
  const double c = 2.0 * alpha * dx * dx / params.u0_sq();
  return c / (t + std::sqrt(t * t + c));
}

LatticeState cml_step(const LatticeState& state, double dt) {
  if (!(dt > 0.0)) throw ValidationError("dt", "must be positive");
  const double alpha = diffusion_number(state, dt);
  if (alpha > kMaxAlpha) throw StabilityError(alpha, admissible_dt(state.params, state.grid.dx(), state.time));
  LatticeState next = state;
  diffuse(state.p1, next.p1, alpha);
  diffuse(state.p2, next.p2, alpha);
  next.time = state.time + dt;
  return next;
}

double channel_variance(const Grid& grid, const std::vector<double>& p) {
  double mass = 0.0;
  double first = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    mass += p[j];
    first += p[j] * grid[j];
  }
  const double mean = first / mass;
  double second = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double d = grid[j] - mean;
    second += p[j] * d * d;
  }
  return second / mass;
}

MomentSeries cml_run(const SlitConfig& cfg, const Grid& grid, double t_end, double safety, Profile profile) {
  if (!(safety > 0.0 && safety <= 1.0)) throw ValidationError("safety", "must lie in (0, 1]");
  if (!(t_end >= 0.0)) throw ValidationError("t_end", "must be non-negative");

  MomentSeries series{{}, {}, {}, cml_init(cfg, grid, profile)};
  LatticeState& state = series.final_state;
  auto record = [&] {
    series.times.push_back(state.time);
    series.variance1.push_back(channel_variance(grid, state.p1));
    series.variance2.push_back(channel_variance(grid, state.p2));
  };
  record();

  const double dx = grid.dx();
  std::vector<double> buf1;
  std::vector<double> buf2;
  bool first = true;
  while (state.time < t_end) {
    double dt = admissible_dt(state.params, dx, state.time, 0.5 * safety);
    if (first) dt = std::min(dt, t_end * 1e-6);
    first = false;
    const bool last = dt >= t_end - state.time;
    if (last) dt = t_end - state.time;
    const double alpha = diffusion_number(state, dt);
    if (alpha > kMaxAlpha) throw StabilityError(alpha, admissible_dt(state.params, dx, state.time));
    diffuse(state.p1, buf1, alpha);
    diffuse(state.p2, buf2, alpha);
    state.p1.swap(buf1);
    state.p2.swap(buf2);
    state.time = last ? t_end : state.time + dt;
    record();
  }
  return series;
}

std::vector<double> lab_density(const LatticeState& state, int channel) {
  const auto& p = channel == 1 ? state.p1 : state.p2;
  const double shift = (channel == 1 ? state.drift1 : state.drift2) * state.time;
  const Grid& g = state.grid;
  const double last = static_cast<double>(g.size() - 1);
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double f = (g[j] - shift - g.x_min()) / g.dx();
    if (f < 0.0 || f > last) continue;
    const auto lo = static_cast<std::size_t>(std::min(std::floor(f), last - 1.0));
    const double w = f - static_cast<double>(lo);
    out[j] = ((1.0 - w) * p[lo] + w * p[lo + 1]) / g.dx();
  }
  return out;
}

ScalarField cml_interfere(const LatticeState& state, const PhaseFn& phase) {
  const auto d1 = lab_density(state, 1);
  const auto d2 = lab_density(state, 2);
  const double r = state.amplitude_ratio;
  ScalarField field{state.grid, std::vector<double>(state.grid.size()), state.time};
  for (std::size_t j = 0; j < field.values.size(); ++j) {
    const double cross = 2.0 * r * std::sqrt(d1[j] * d2[j]) * std::cos(phase(state.grid[j], state.time));
    field.values[j] = std::max(0.0, d1[j] + r * r * d2[j] + cross);
  }
  return normalize(field);
}

namespace {

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

WalkerStream::WalkerStream(std::uint64_t seed, std::uint64_t index) : state_(seed) {
  std::uint64_t key = index ^ 0xd1b54a32d192ed03ULL;
  state_ ^= splitmix(key);
  splitmix(state_);
}

WalkerStream::result_type WalkerStream::operator()() { return splitmix(state_); }

WalkerEnsemble make_walker_ensemble(const PhysicalParams& params, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw ValidationError("walker_count", "need at least one walker");
  WalkerEnsemble e{params, seed, std::vector<double>(count), std::vector<double>(count), std::vector<double>(count),
                   std::vector<signed char>(count), std::vector<signed char>(count)};
  const double s0 = params.sigma0();
  parallel_for(count, [&](std::size_t i) {
    WalkerStream rng(seed, i);
    std::normal_distribution<double> normal;
    const double z = normal(rng);
    e.x0[i] = s0 * z;
    e.u_draw[i] = std::abs(z);
    e.du_draw[i] = normal(rng);
    const auto bits = rng();
    e.sign[i] = (bits & 1u) ? 1 : -1;
    e.du_sign[i] = (bits & 2u) ? 1 : -1;
  });
  return e;
}

std::vector<double> walker_positions(const WalkerEnsemble& e, double t) {
  const double u_scale = e.params.diffusion_constant() / sigma_t(e.params, t);
  const double du_scale = std::sqrt(delta_u_variance(e.params, t));
  std::vector<double> x(e.count());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = u_scale * e.u_draw[i];
    const double du = du_scale * e.du_draw[i];
    x[i] = e.x0[i] + e.sign[i] * (u + e.du_sign[i] * du) * t;
  }
  return x;
}

double walker_ensemble_msd(const PhysicalParams& params, std::size_t count, double t, std::uint64_t seed) {
  if (t < 0.0) throw ValidationError("t", "must be non-negative");
  const auto x = walker_positions(make_walker_ensemble(params, count, seed), t);
  double sum = 0.0;
  for (double xi : x) sum += xi * xi;
  return sum / static_cast<double>(x.size());
}

}  // namespace slitsim::cml

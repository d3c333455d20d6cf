#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "slitsim/core.hpp"

// Coupled-map-lattice diffusion with the ballistic diffusivity D_t(t) = u0^2 t,
// plus a stochastic walker ensemble for the same moment law.

namespace slitsim::cml {

enum class Profile { Gaussian, Delta };

/// Two slit channels on a common lattice. Each channel lives in its own
/// co-moving frame: cell j of channel i represents lab position
/// grid[j] + drift_i * time. Cell values are occupation fractions.
struct LatticeState {
  Grid grid;
  PhysicalParams params;
  std::vector<double> p1;
  std::vector<double> p2;
  double time = 0.0;
  double drift1 = 0.0;
  double drift2 = 0.0;
  double amplitude_ratio = 1.0;
};

/// Thrown by cml_step when the diffusion number exceeds 1/2.
class StabilityError : public NumericError {
 public:
  StabilityError(double alpha, double max_dt);
  double alpha() const noexcept { return alpha_; }
  double max_dt() const noexcept { return max_dt_; }

 private:
  double alpha_;
  double max_dt_;
};

/// Requires the grid to cover +/-(X + 6 sigma0). Each channel sums to 1.
LatticeState cml_init(const SlitConfig& cfg, const Grid& grid, Profile profile);

/// Largest dt starting at t with D_t(t + dt/2) dt / dx^2 <= alpha.
double admissible_dt(const PhysicalParams& params, double dx, double t, double alpha = 0.5);

/// Explicit 3-point update p += alpha (p[i+1] - 2 p[i] + p[i-1]) with
/// alpha = D_t(t + dt/2) dt / dx^2 and reflecting boundaries.
LatticeState cml_step(const LatticeState& state, double dt);

struct MomentSeries {
  std::vector<double> times;
  std::vector<double> variance1;
  std::vector<double> variance2;
  LatticeState final_state;
};

/// Cell-weighted variance of one channel in lattice coordinates.
double channel_variance(const Grid& grid, const std::vector<double>& p);

/// Steps to t_end with dt chosen so alpha = 0.5 * safety, recording the
/// variance of both channels after every step.
MomentSeries cml_run(const SlitConfig& cfg, const Grid& grid, double t_end, double safety,
                     Profile profile = Profile::Gaussian);

using PhaseFn = std::function<double(double x, double t)>;

/// p1 + r^2 p2 + 2 r sqrt(p1 p2) cos(phase(x, t)) on the lab grid, normalized.
ScalarField cml_interfere(const LatticeState& state, const PhaseFn& phase);

/// Channel i as a lab-frame density (per unit length) on the state's grid.
std::vector<double> lab_density(const LatticeState& state, int channel);

/// Per-walker random stream: splitmix64 keyed by (seed, walker index), so a
/// walker's draws do not depend on how walkers are distributed over threads.
class WalkerStream {
 public:
  using result_type = std::uint64_t;
  WalkerStream(std::uint64_t seed, std::uint64_t index);
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

 private:
  std::uint64_t state_;
};

struct WalkerEnsemble {
  PhysicalParams params;
  std::uint64_t seed = 0;
  std::vector<double> x0;
  /// |x0| / sigma0; the deterministic speed at time t is D * u_draw / sigma(t).
  std::vector<double> u_draw;
  /// Standard normal; scaled by sqrt(delta_u_variance(t)).
  std::vector<double> du_draw;
  std::vector<signed char> sign;
  std::vector<signed char> du_sign;

  std::size_t count() const noexcept { return x0.size(); }
};

WalkerEnsemble make_walker_ensemble(const PhysicalParams& params, std::size_t count, std::uint64_t seed);

/// x(t) = x(0) + s (u + s' du) t for every walker.
std::vector<double> walker_positions(const WalkerEnsemble& ensemble, double t);

/// Ensemble mean of x(t)^2.
double walker_ensemble_msd(const PhysicalParams& params, std::size_t count, double t, std::uint64_t seed);

}  // namespace slitsim::cml

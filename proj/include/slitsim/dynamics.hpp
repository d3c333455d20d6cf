#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "slitsim/core.hpp"

namespace slitsim {

/// Per-slit average velocity fields at one point: total drift fields v_i
/// (packet drift plus dispersion term) and outward osmotic fields u_i = u_{i+}.
/// The inward branches are u_{i-} = -u_i.
struct VelocityDecomposition {
  double v1;
  double v2;
  double u1;
  double u2;
};

VelocityDecomposition velocity_decomposition(const SlitConfig& cfg, double x, double t);

/// Closed-form averaged current
///   J = P1 v1 + P2 v2 + sqrt(P1 P2) [(v1 + v2) cos(phi) + (u2 - u1) sin(phi)]
/// with slit 2 weighted by amplitude_ratio.
double total_current(const SlitConfig& cfg, double x, double t);

/// Same current from the full pairwise expansion over the eight velocity
/// components, with the inter-vector angles assigned as
/// (v1,v2) = (u1,u2) = phi, (v1,u2) = phi - pi/2, (u1,v2) = phi + pi/2.
double total_current_expanded(const SlitConfig& cfg, double x, double t);

/// Thrown by average_velocity where the intensity falls below the node floor.
class NodeSingularity : public NumericError {
 public:
  NodeSingularity(double x, double t);
  double x() const noexcept { return x_; }
  double t() const noexcept { return t_; }

 private:
  double x_;
  double t_;
};

/// Intensity floor 1e-14 times the envelope peak (1 + r)^2 / (sqrt(2 pi) sigma(t)).
double node_floor(const SlitConfig& cfg, double t);

/// J / P_tot. Throws NodeSingularity when P_tot <= node_floor.
double average_velocity(const SlitConfig& cfg, double x, double t);

struct TrajectoryOptions {
  double dt_init = 1e-2;
  /// Upper bound on |v| dt per step, usually the output grid spacing.
  double max_step_displacement = 1e-2;
  /// Number of stored times including t0 and t1.
  std::size_t n_output = 101;
  double abs_tolerance = 1e-11;
  double rel_tolerance = 1e-11;
};

struct TrajectorySet {
  std::vector<double> seeds;
  std::vector<double> times;
  /// positions[seed][time]
  std::vector<std::vector<double>> positions;
  /// Time at which a trajectory stalled at a node, NaN when it ran to t1.
  /// Entries after a stall repeat the last reached position.
  std::vector<double> stalled_at;
  double v_y = 1.0;

  double y(std::size_t time_index) const { return v_y * times.at(time_index); }
  bool stalled(std::size_t seed) const { return stalled_at.at(seed) == stalled_at.at(seed); }
};

/// Equidistant seeds over c_i(t0) +/- span_sigmas * sigma(t0) for each slit;
/// n_total is split evenly between the slits. Sorted, duplicates removed.
std::vector<double> equidistant_seeds(const SlitConfig& cfg, std::size_t n_total, double span_sigmas, double t0);

/// Seeds at the (k + 1/2)/n quantiles of the normalized intensity at t0, so
/// neighbouring trajectories bound tubes of equal flux.
std::vector<double> equal_flux_seeds(const SlitConfig& cfg, std::size_t n, double t0);

/// Integrates dx/dt = average_velocity(x, t) for every seed with RK4.
TrajectorySet integrate_trajectories(const SlitConfig& cfg, const std::vector<double>& seeds, double t0,
                                     double t1, const TrajectoryOptions& options);

/// Normalized probability between trajectories a and b (a below b at t0) at
/// every stored time. Throws NumericError if the pair has crossed.
std::vector<double> flux_between(const SlitConfig& cfg, const TrajectorySet& set, std::size_t a, std::size_t b,
                                 double max_spacing = 1e-2);

/// Normalization integral of total_intensity at time t over the region where
/// it is non-negligible.
double total_probability(const SlitConfig& cfg, double t, double max_spacing = 1e-2);

}  // namespace slitsim

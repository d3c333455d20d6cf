#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slitsim/cml.hpp"
#include "slitsim/core.hpp"
#include "slitsim/dynamics.hpp"

// Equivalence and invariant checks shared by the `verify` command and the
// acceptance suite. Each check reports its worst deviation and where it
// occurred; pass/fail is decided against the tolerance passed in.

namespace slitsim::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;
  double x = 0.0;
  double t = 0.0;
  std::string detail;
};

/// "name: PASS worst=<v> at x=<x>, t=<t>"
std::string format(const CheckResult& r);

/// Pointwise relative deviation of the closed-form current from the quantum
/// current, over grid points with P_tot > mask * peak(P_tot) at each time.
CheckResult current_identity(const SlitConfig& cfg, const Grid& grid, const std::vector<double>& times,
                             double tolerance, double mask);

/// Pointwise relative deviation of total_intensity from |Psi1 + r Psi2|^2.
CheckResult intensity_identity(const SlitConfig& cfg, const Grid& grid, const std::vector<double>& times,
                               double tolerance, double mask);

/// |relative_phase - (arg Psi1 - arg Psi2)| wrapped to (-pi, pi], at random
/// (x, t) in [x_min, x_max] x [t0, t1] where both |Psi_i| > 1e-10.
CheckResult phase_identity(const SlitConfig& cfg, double x_min, double x_max, double t0, double t1,
                           std::size_t samples, std::uint64_t seed, double tolerance);

/// |expanded - closed| / |closed| (with a 1e-15 absolute floor) at random points.
CheckResult expanded_current(const SlitConfig& cfg, double x_min, double x_max, double t0, double t1,
                             std::size_t samples, std::uint64_t seed, double tolerance);

/// First n_minima minima at x > 0 of the intensity at the coincidence time
/// against (n + 1/2) pi / k_x. worst = largest position error.
CheckResult dark_fringes(const SlitConfig& cfg, const Grid& grid, int n_minima, double tolerance);

/// Relative gap |J_tot - (J1 + J2)| / max(|J_tot|, |J1 + J2|) at the first
/// intensity maximum at x > 0 (excluding the central one) at time t.
/// Passes when the gap exceeds `threshold`.
CheckResult non_additivity(const SlitConfig& cfg, const Grid& grid, double t, double threshold);

/// Counts sign changes of x(t) for trajectories with x(t0) != 0.
CheckResult no_crossing(const TrajectorySet& set);

/// Max relative drift of the flux between neighbouring trajectories.
CheckResult flux_tubes(const SlitConfig& cfg, const TrajectorySet& set, double tolerance);

/// Max |x_i(t) + x_mirror(i)(t)| for seeds that come in +/- pairs.
CheckResult mirror_symmetry(const TrajectorySet& set, double tolerance);

/// Lattice variance at the end of the run against sigma0^2 + u0^2 t^2.
CheckResult cml_variance(const SlitConfig& cfg, const cml::MomentSeries& series, double rel_tolerance);

/// Least-squares slope of log(var - var(0)) against log t over the last decade.
CheckResult cml_ballistic_slope(const cml::MomentSeries& series, double expected, double tolerance);

/// Ensemble <x^2>(t) against sigma0^2 + u0^2 t^2.
CheckResult walker_msd(const PhysicalParams& params, std::size_t count, double t, std::uint64_t seed,
                       double rel_tolerance);

/// cml_interfere on the final lattice state against the normalized closed-form
/// intensity at the same time, masked below mask * peak.
CheckResult cml_interference(const SlitConfig& cfg, const cml::LatticeState& state, double rel_tolerance,
                             double mask);

}  // namespace slitsim::verify

#pragma once

#include <vector>

#include "slitsim/core.hpp"
#include "slitsim/dispersion.hpp"

namespace slitsim {

enum class Slit { One, Two };

/// Packet emitted by one slit: slit 1 at (+X, +v_x), slit 2 at (-X, -v_x).
GaussianPacket slit_packet(const SlitConfig& cfg, Slit slit);

/// Relative phase of the two paths,
///   phi = 2 m v_x x / hbar - (X + v_x t) x (2m/hbar) u0^2 t / sigma(t)^2,
/// returned unwrapped.
double relative_phase(const SlitConfig& cfg, double x, double t);

struct SlitDensities {
  double p1;
  double p2;
};

/// Unweighted, individually normalized slit Gaussians.
SlitDensities slit_densities(const SlitConfig& cfg, double x, double t);

/// P1 + r^2 P2 + 2 r sqrt(P1 P2) cos(phi), r = amplitude_ratio. Not globally normalized.
double total_intensity(const SlitConfig& cfg, double x, double t);

ScalarField intensity_field(const SlitConfig& cfg, const Grid& grid, double t);

/// Rescales so the trapezoid integral is 1. Throws NumericError for a field
/// whose integral is not positive.
ScalarField normalize(const ScalarField& field);

/// Dark nodes (n + 1/2) pi / k_x for n = 0..n_max, valid when the packet
/// centers coincide (X = -v_x t).
std::vector<double> dark_fringe_positions(const SlitConfig& cfg, int n_max);

struct FringeReport {
  double time = 0.0;
  std::vector<double> minima;
  std::vector<double> maxima;
  std::vector<double> minima_values;
  std::vector<double> maxima_values;
  /// (I_max - I_min) / (I_max + I_min) for the brightest maximum against the
  /// mean of its neighbouring minima; 0 when there is no adjacent minimum.
  double visibility = 0.0;
};

/// Interior local extrema by 3-point comparison, refined with a parabola
/// through the bracketing samples.
FringeReport find_extrema(const ScalarField& field);

/// p mod (h/d) in [0, h/d).
double modular_momentum(double p, double d, double h);

}  // namespace slitsim

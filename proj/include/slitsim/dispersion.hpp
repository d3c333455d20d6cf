#pragma once

#include "slitsim/core.hpp"

// Free Gaussian packet: width growth, density, osmotic and total velocity
// fields, and the ballistic-diffusion moment law. Everything here is closed
// form; no numerical differentiation.

namespace slitsim {

struct GaussianPacket {
  PhysicalParams params = make_params();
  double center0 = 0.0;
  double drift = 0.0;

  double center(double t) const noexcept { return center0 + drift * t; }
};

/// sigma0 * sqrt(1 + D^2 t^2 / sigma0^4). Even in t.
double sigma_t(const PhysicalParams& params, double t);

/// Time-dependent diffusivity D_t(t) = u0^2 t. Rejects t < 0.
double ballistic_diffusivity(const PhysicalParams& params, double t);

/// Normalized Gaussian of width sigma_t(t) around packet.center(t).
double gaussian_density(const GaussianPacket& packet, double x, double t);

/// Outward osmotic velocity u+ = -(hbar/2m) P'/P = D (x - c(t)) / sigma(t)^2.
/// The opposing branch is u- = -u+.
double osmotic_velocity(const GaussianPacket& packet, double x, double t);

/// Average velocity field drift + (x - c(t)) u0^2 t / sigma(t)^2.
double packet_velocity_field(const GaussianPacket& packet, double x, double t);

/// Mean-square velocity fluctuation u0^2 - D^2 / sigma(t)^2.
double delta_u_variance(const PhysicalParams& params, double t);

/// <x^2>(t) = <x^2>(0) + u0^2 t^2, written as x0_sq + D_t(t) t.
double mean_square_displacement(const PhysicalParams& params, double x0_sq, double t);

}  // namespace slitsim

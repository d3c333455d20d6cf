#include "slitsim/dispersion.hpp"

#include <cmath>
#include <numbers>

namespace slitsim {

namespace {

double sigma_sq(const PhysicalParams& p, double t) {
  const double s0 = p.sigma0();
  const double tau = p.diffusion_constant() * t / (s0 * s0);
  return s0 * s0 * (1.0 + tau * tau);
}

}  // namespace

double sigma_t(const PhysicalParams& params, double t) { return std::sqrt(sigma_sq(params, t)); }

double ballistic_diffusivity(const PhysicalParams& params, double t) {
  if (t < 0.0) throw ValidationError("t", "diffusivity is defined for t >= 0 only");
  return params.u0_sq() * t;
}

double gaussian_density(const GaussianPacket& packet, double x, double t) {
  const double s2 = sigma_sq(packet.params, t);
  const double d = x - packet.center(t);
  return std::exp(-d * d / (2.0 * s2)) / std::sqrt(2.0 * std::numbers::pi * s2);
}

double osmotic_velocity(const GaussianPacket& packet, double x, double t) {
  return packet.params.diffusion_constant() * (x - packet.center(t)) / sigma_sq(packet.params, t);
}

double packet_velocity_field(const GaussianPacket& packet, double x, double t) {
  return packet.drift + (x - packet.center(t)) * packet.params.u0_sq() * t / sigma_sq(packet.params, t);
}

double delta_u_variance(const PhysicalParams& params, double t) {
  const double d = params.diffusion_constant();
  const double v = params.u0_sq() - d * d / sigma_sq(params, t);
  return v > 0.0 ? v : 0.0;
}

double mean_square_displacement(const PhysicalParams& params, double x0_sq, double t) {
  if (x0_sq < 0.0) throw ValidationError("x0_sq", "must be non-negative");
  return x0_sq + ballistic_diffusivity(params, t) * t;
}

}  // namespace slitsim

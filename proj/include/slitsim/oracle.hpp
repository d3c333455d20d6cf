#pragma once

#include <complex>
#include <cstddef>

#include "slitsim/core.hpp"
#include "slitsim/dispersion.hpp"

// Complex-wavefunction reference used to certify the real-valued classical
// formulas. Packets are the textbook free Gaussians with complex width; the
// gradient is analytic.

namespace slitsim::oracle {

using ComplexAmplitude = std::complex<double>;

/// Free Gaussian: initial width sigma0, momentum m*drift, centre center0.
///   psi = (2 pi sigma0^2)^(-1/4) (1 + i tau)^(-1/2)
///         * exp(-(x - c(t))^2 / (4 sigma0^2 (1 + i tau)) + i k (x - drift t / 2))
/// with tau = hbar t / (2 m sigma0^2), k = m drift / hbar.
ComplexAmplitude packet_wavefunction(const GaussianPacket& packet, double x, double t);

/// d psi / dx, analytic.
ComplexAmplitude packet_gradient(const GaussianPacket& packet, double x, double t);

/// Psi1 + r Psi2 for the two slits.
ComplexAmplitude superposed_wavefunction(const SlitConfig& cfg, double x, double t);

/// |Psi1 + r Psi2|^2, un-normalized like total_intensity.
double superposed_density(const SlitConfig& cfg, double x, double t);

/// (hbar/m) Im{ Psi* dPsi/dx } for Psi = Psi1 + r Psi2.
double quantum_current(const SlitConfig& cfg, double x, double t);

/// Quantum current of one packet alone.
double packet_current(const GaussianPacket& packet, double x, double t);

struct FieldComparison {
  double max_rel_deviation = 0.0;
  std::size_t worst_index = 0;
  double worst_x = 0.0;
  double time = 0.0;
  std::size_t compared = 0;
  bool pass = true;
};

/// Max of |a - b| / max(|a|, |b|) over points where max(|a|, |b|) exceeds
/// mask_floor times the larger of the two field peaks.
FieldComparison compare_fields(const ScalarField& a, const ScalarField& b, double rel_tol, double mask_floor);

}  // namespace slitsim::oracle

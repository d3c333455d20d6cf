#include "slitsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slitsim/interference.hpp"

namespace slitsim::oracle {

namespace {

struct PacketTerms {
  ComplexAmplitude width;  // 1 + i tau
  double k;
  double displacement;     // x - c(t)
};

PacketTerms terms(const GaussianPacket& packet, double x, double t) {
  const auto& p = packet.params;
  const double tau = p.hbar_eff() * t / (2.0 * p.mass() * p.sigma0() * p.sigma0());
  return {ComplexAmplitude(1.0, tau), p.mass() * packet.drift / p.hbar_eff(), x - packet.center(t)};
}

}  // namespace

ComplexAmplitude packet_wavefunction(const GaussianPacket& packet, double x, double t) {
  const auto [width, k, d] = terms(packet, x, t);
  const double s0 = packet.params.sigma0();
  const double norm = std::pow(2.0 * std::numbers::pi * s0 * s0, -0.25);
  const ComplexAmplitude exponent =
      -d * d / (4.0 * s0 * s0 * width) + ComplexAmplitude(0.0, k * (x - 0.5 * packet.drift * t));
  return norm / std::sqrt(width) * std::exp(exponent);
}

ComplexAmplitude packet_gradient(const GaussianPacket& packet, double x, double t) {
  const auto [width, k, d] = terms(packet, x, t);
  const double s0 = packet.params.sigma0();
  const ComplexAmplitude log_derivative = -d / (2.0 * s0 * s0 * width) + ComplexAmplitude(0.0, k);
  return packet_wavefunction(packet, x, t) * log_derivative;
}

ComplexAmplitude superposed_wavefunction(const SlitConfig& cfg, double x, double t) {
  return packet_wavefunction(slit_packet(cfg, Slit::One), x, t) +
         cfg.amplitude_ratio * packet_wavefunction(slit_packet(cfg, Slit::Two), x, t);
}

double superposed_density(const SlitConfig& cfg, double x, double t) {
  return std::norm(superposed_wavefunction(cfg, x, t));
}

double quantum_current(const SlitConfig& cfg, double x, double t) {
  const auto one = slit_packet(cfg, Slit::One);
  const auto two = slit_packet(cfg, Slit::Two);
  const double r = cfg.amplitude_ratio;
  const ComplexAmplitude psi = packet_wavefunction(one, x, t) + r * packet_wavefunction(two, x, t);
  const ComplexAmplitude grad = packet_gradient(one, x, t) + r * packet_gradient(two, x, t);
  const auto& p = cfg.params;
  return p.hbar_eff() / p.mass() * std::imag(std::conj(psi) * grad);
}

double packet_current(const GaussianPacket& packet, double x, double t) {
  const auto& p = packet.params;
  return p.hbar_eff() / p.mass() *
         std::imag(std::conj(packet_wavefunction(packet, x, t)) * packet_gradient(packet, x, t));
}

FieldComparison compare_fields(const ScalarField& a, const ScalarField& b, double rel_tol, double mask_floor) {
  if (!(a.grid == b.grid) || a.values.size() != b.values.size())
    throw ValidationError("grid", "fields are sampled on different grids");
  if (a.time != b.time) throw ValidationError("time", "fields are sampled at different times");
  FieldComparison report;
  report.time = a.time;
  const double threshold = mask_floor * std::max(a.peak_abs(), b.peak_abs());
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double scale = std::max(std::abs(a.values[i]), std::abs(b.values[i]));
    if (!(scale > threshold) || scale == 0.0) continue;
    ++report.compared;
    const double dev = std::abs(a.values[i] - b.values[i]) / scale;
    if (dev > report.max_rel_deviation) {
      report.max_rel_deviation = dev;
      report.worst_index = i;
      report.worst_x = a.grid[i];
    }
  }
  report.pass = report.max_rel_deviation <= rel_tol;
  return report;
}

}  // namespace slitsim::oracle

#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "slitsim/dynamics.hpp"
#include "slitsim/interference.hpp"
#include "slitsim/oracle.hpp"
#include "test_oracles.hpp"

using namespace slitsim;
using oracle::ComplexAmplitude;
using std::numbers::pi;

namespace {

SlitConfig defaults() { return make_slit_config(make_params(), 2.0, -0.5, 1.0); }

}  // namespace

TEST_CASE("packet solves the free Schroedinger equation") {
  const GaussianPacket g{make_params(0.9, 1.3, 0.7), 0.5, 0.4};
  const double hb = g.params.hbar_eff(), m = g.params.mass();
  const double h = 1e-3;
  for (double t : {0.3, 1.0, 3.0})
    for (double x : {-1.0, 0.2, 1.5}) {
      auto psi = [&](double xx, double tt) { return oracle::packet_wavefunction(g, xx, tt); };
      const ComplexAmplitude dt = (psi(x, t + h) - psi(x, t - h)) / (2 * h);
      const ComplexAmplitude dxx = (psi(x + h, t) - 2.0 * psi(x, t) + psi(x - h, t)) / (h * h);
      const ComplexAmplitude residual = ComplexAmplitude(0, hb) * dt + (hb * hb / (2 * m)) * dxx;
      CHECK(std::abs(residual) <= 1e-5 * std::abs(psi(x, t)) + 1e-12);
    }
}

TEST_CASE("packet_gradient matches finite differences") {
  const GaussianPacket g{make_params(1, 1, 1), -2.0, 0.5};
  for (double t : {0.0, 1.0, 5.0})
    for (double x : {-4.0, -2.0, 0.0, 1.0}) {
      const double h = 1e-5;
      const auto fd = (oracle::packet_wavefunction(g, x + h, t) - oracle::packet_wavefunction(g, x - h, t)) / (2 * h);
      CHECK(std::abs(fd - oracle::packet_gradient(g, x, t)) <= 1e-8);
    }
}

TEST_CASE("packet modulus is the real Gaussian") {
  const GaussianPacket g{make_params(1, 1, 1), 0.0, 0.0};
  CHECK(std::norm(oracle::packet_wavefunction(g, 0.0, 0.0)) == doctest::Approx(0.3989422804).epsilon(1e-10));
  for (const auto& pk : {g, GaussianPacket{make_params(1.2, 0.8, 1.5), 1.0, -0.3}})
    for (double t : {0.0, 0.8, 4.0})
      for (double x : {-3.0, 0.0, 0.9, 2.5}) {
        const double p = gaussian_density(pk, x, t);
        CHECK(std::norm(oracle::packet_wavefunction(pk, x, t)) == doctest::Approx(p).epsilon(1e-12));
      }
}

TEST_CASE("stationary packet at t = 0 has constant phase") {
  const GaussianPacket g{make_params(1, 1, 1), 0.0, 0.0};
  for (double x : {-2.0, -0.5, 0.0, 1.0, 3.0}) CHECK(std::arg(oracle::packet_wavefunction(g, x, 0.0)) == 0.0);
}

TEST_CASE("second moment of |psi|^2 follows sigma(t)") {
  const GaussianPacket g{make_params(1, 1, 1), 0.0, 0.0};
  for (double t : {0.0, 1.0, 3.0}) {
    const double s = sigma_t(g.params, t);
    const double m2 = testing_oracles::trapezoid(
        [&](double x) { return x * x * std::norm(oracle::packet_wavefunction(g, x, t)); }, -14 * s, 14 * s, 6000);
    CHECK(m2 == doctest::Approx(s * s).epsilon(1e-9));
  }
}

TEST_CASE("superposed_density") {
  auto cfg = defaults();
  const double p1 = gaussian_density(slit_packet(cfg, Slit::One), 0.0, 0.0);
  CHECK(oracle::superposed_density(cfg, 0.0, 0.0) == doctest::Approx(4.0 * p1).epsilon(1e-14));
  CHECK(oracle::superposed_density(cfg, pi, 4.0) <= 1e-14 * p1);
  cfg.amplitude_ratio = 0.0;
  for (double x : {-1.0, 2.0})
    CHECK(oracle::superposed_density(cfg, x, 1.0) ==
          doctest::Approx(gaussian_density(slit_packet(cfg, Slit::One), x, 1.0)).epsilon(1e-12));
}

TEST_CASE("quantum_current") {
  const auto cfg = defaults();
  CHECK(std::abs(oracle::quantum_current(cfg, 0.0, 0.0)) <= 1e-16);
  for (double t : {0.5, 2.0, 6.0})
    for (double x : {0.4, 1.7, 3.0}) CHECK(oracle::quantum_current(cfg, -x, t) == doctest::Approx(-oracle::quantum_current(cfg, x, t)).epsilon(1e-12));

  const GaussianPacket g{make_params(1, 1, 1), 0.0, 0.7};
  CHECK(oracle::packet_current(g, 0.0, 0.0) == doctest::Approx(0.7 * gaussian_density(g, 0.0, 0.0)).epsilon(1e-14));
}

TEST_CASE("continuity: dP/dt + dJ/dx = 0") {
  const auto cfg = defaults();
  const double h = 1e-4;
  for (double t : {0.5, 3.0, 4.0, 6.5})
    for (double x : {-2.3, 0.1, 1.0, 4.2}) {
      const double dp = (oracle::superposed_density(cfg, x, t + h) - oracle::superposed_density(cfg, x, t - h)) / (2 * h);
      const double dj = (oracle::quantum_current(cfg, x + h, t) - oracle::quantum_current(cfg, x - h, t)) / (2 * h);
      CHECK(std::abs(dp + dj) <= 1e-7);
    }
}

TEST_CASE("Bohmian phase and classical phase agree") {
  const auto cfg = defaults();
  for (double t : {0.5, 2.5, 5.0})
    for (double x : {-3.0, 0.6, 2.2}) {
      const auto a = oracle::packet_wavefunction(slit_packet(cfg, Slit::One), x, t);
      const auto b = oracle::packet_wavefunction(slit_packet(cfg, Slit::Two), x, t);
      CHECK(std::abs(std::remainder(std::arg(a) - std::arg(b) - relative_phase(cfg, x, t), 2 * pi)) <= 1e-10);
    }
}

TEST_CASE("superposed current is not the sum of packet currents") {
  const auto cfg = defaults();
  const double x = 2 * pi, t = 4.0;  // bright fringe at the coincidence time
  const double j = oracle::quantum_current(cfg, x, t);
  const double j12 = oracle::packet_current(slit_packet(cfg, Slit::One), x, t) +
                     oracle::packet_current(slit_packet(cfg, Slit::Two), x, t);
  CHECK(std::abs(j - j12) > 1e-3 * std::max(std::abs(j), std::abs(j12)));
}

TEST_CASE("compare_fields") {
  const auto g = make_grid(0, 1, 11);
  const auto a = sample_field(g, 1.0, [](double x) { return 1.0 + x; });
  auto b = a;
  auto r = oracle::compare_fields(a, b, 1e-12, 1e-10);
  CHECK(r.pass);
  CHECK(r.max_rel_deviation == 0.0);
  CHECK(r.compared == 11);

  b.values[4] *= 1.01;
  r = oracle::compare_fields(a, b, 1e-3, 1e-10);
  CHECK_FALSE(r.pass);
  CHECK(r.worst_index == 4);
  CHECK(r.worst_x == doctest::Approx(0.4));
  CHECK(r.max_rel_deviation == doctest::Approx(0.01 / 1.01).epsilon(1e-12));

  auto c = sample_field(g, 1.0, [](double x) { return x < 0.05 ? 1e-20 : 1.0; });
  auto d = c;
  d.values[0] = 5e-20;
  CHECK(oracle::compare_fields(c, d, 1e-12, 1e-10).pass);
  CHECK(oracle::compare_fields(c, d, 1e-12, 1e-10).compared == 10);

  auto other_time = a;
  other_time.time = 2.0;
  CHECK_THROWS(oracle::compare_fields(a, other_time, 1e-3, 0.0));
  const auto other_grid = sample_field(make_grid(0, 1, 12), 1.0, [](double) { return 1.0; });
  CHECK_THROWS(oracle::compare_fields(a, other_grid, 1e-3, 0.0));
}

TEST_CASE("superposed density at the axis") {
  const auto cfg = defaults();
  for (double t : {0.0, 1.0, 2.5}) {
    const auto a = oracle::packet_wavefunction(slit_packet(cfg, Slit::One), 0.0, t);
    const auto b = oracle::packet_wavefunction(slit_packet(cfg, Slit::Two), 0.0, t);
    const double expect = 2.0 * std::norm(a) * (1.0 + std::cos(std::arg(a) - std::arg(b)));
    CHECK(oracle::superposed_density(cfg, 0.0, t) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(total_intensity(cfg, 0.0, t) == doctest::Approx(expect).epsilon(1e-8));
  }
}

TEST_CASE("compare_fields tolerance cases") {
  const auto cfg = defaults();
  const auto g = make_grid(-15, 15, 4096);
  const auto a = intensity_field(cfg, g, 4.0);
  auto b = a;
  for (double& v : b.values) v *= 1.0 + 1e-9;
  CHECK(oracle::compare_fields(a, b, 1e-6, 1e-10).pass);

  // One-cell shift across a sharp fringe.
  auto shifted = a;
  for (std::size_t i = 1; i < g.size(); ++i) shifted.values[i] = a.values[i - 1];
  CHECK_FALSE(oracle::compare_fields(a, shifted, 1e-6, 1e-10).pass);
}

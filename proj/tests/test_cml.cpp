#include <cmath>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "slitsim/cml.hpp"
#include "slitsim/interference.hpp"
#include "slitsim/oracle.hpp"
#include "slitsim/verify.hpp"

using namespace slitsim;
using namespace slitsim::cml;

namespace {

SlitConfig defaults() { return make_slit_config(make_params(), 2.0, -0.5, 1.0); }

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double variance_of(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

}  // namespace

TEST_CASE("cml_init") {
  const auto cfg = defaults();
  const auto g = make_grid(-15, 15, 1201);
  const auto s = cml_init(cfg, g, Profile::Gaussian);
  CHECK(sum(s.p1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sum(s.p2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.time == 0.0);
  CHECK(s.drift1 == -0.5);
  CHECK(s.drift2 == 0.5);

  const auto d = cml_init(cfg, g, Profile::Delta);
  CHECK(std::count_if(d.p1.begin(), d.p1.end(), [](double v) { return v != 0.0; }) == 1);
  CHECK(std::count_if(d.p2.begin(), d.p2.end(), [](double v) { return v != 0.0; }) == 1);

  CHECK_THROWS_AS(cml_init(cfg, make_grid(-1.5, 1.5, 101), Profile::Gaussian), ValidationError);
  CHECK_THROWS_AS(cml_init(cfg, make_grid(-7, 7.9, 101), Profile::Gaussian), ValidationError);
}

TEST_CASE("cml_step") {
  const auto cfg = defaults();
  const auto g = make_grid(-10, 10, 201);
  auto uniform = cml_init(cfg, g, Profile::Gaussian);
  std::fill(uniform.p1.begin(), uniform.p1.end(), 1.0 / 201);
  std::fill(uniform.p2.begin(), uniform.p2.end(), 1.0 / 201);
  uniform.time = 1.0;
  const auto u1 = cml_step(uniform, admissible_dt(cfg.params, g.dx(), 1.0, 0.4));
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(u1.p1[j] == doctest::Approx(1.0 / 201).epsilon(1e-14));

  // Delta splits alpha, 1 - 2 alpha, alpha.
  auto delta = cml_init(cfg, g, Profile::Delta);
  delta.time = 2.0;
  const double dt = admissible_dt(cfg.params, g.dx(), 2.0, 0.3);
  const double alpha = ballistic_diffusivity(cfg.params, 2.0 + 0.5 * dt) * dt / (g.dx() * g.dx());
  CHECK(alpha == doctest::Approx(0.3).epsilon(1e-12));
  const auto stepped = cml_step(delta, dt);
  const auto j = static_cast<std::size_t>(std::max_element(delta.p1.begin(), delta.p1.end()) - delta.p1.begin());
  CHECK(stepped.p1[j] == doctest::Approx(1.0 - 2.0 * alpha).epsilon(1e-12));
  CHECK(stepped.p1[j - 1] == doctest::Approx(alpha).epsilon(1e-12));
  CHECK(stepped.p1[j + 1] == doctest::Approx(alpha).epsilon(1e-12));
  CHECK(stepped.time == 2.0 + dt);

  // alpha = 0.6 is rejected and reports the admissible step.
  const double bad = admissible_dt(cfg.params, g.dx(), 2.0, 0.6);
  try {
    (void)cml_step(delta, bad);
    FAIL("expected StabilityError");
  } catch (const StabilityError& e) {
    CHECK(e.alpha() == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(e.max_dt() == doctest::Approx(admissible_dt(cfg.params, g.dx(), 2.0)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(cml_step(delta, 0.0), ValidationError);
}

TEST_CASE("admissible_dt reaches alpha exactly") {
  const auto p = make_params(1, 1, 1);
  for (double t : {0.0, 1e-6, 0.5, 3.0, 100.0}) {
    const double dx = 0.01;
    const double dt = admissible_dt(p, dx, t);
    CHECK(ballistic_diffusivity(p, t + 0.5 * dt) * dt / (dx * dx) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("mass conservation and nonnegativity") {
  const auto cfg = defaults();
  const auto g = make_grid(-15, 15, 601);
  auto s = cml_init(cfg, g, Profile::Delta);
  s.time = 0.5;
  for (int k = 0; k < 2000; ++k) {
    s = cml_step(s, admissible_dt(cfg.params, g.dx(), s.time, 0.5));
    if (k % 200 == 0) {
      CHECK(std::abs(sum(s.p1) - 1.0) <= 1e-12);
      CHECK(std::abs(sum(s.p2) - 1.0) <= 1e-12);
      CHECK(*std::min_element(s.p1.begin(), s.p1.end()) >= 0.0);
    }
  }
  CHECK(std::abs(sum(s.p1) - 1.0) <= 1e-12);
}

TEST_CASE("cml_run follows sigma0^2 + u0^2 t^2") {
  const auto cfg = defaults();
  const auto g = make_grid(-15, 15, 1201);
  const auto zero = cml_run(cfg, g, 0.0, 0.9);
  REQUIRE(zero.times.size() == 1);
  CHECK(zero.variance1.front() == doctest::Approx(1.0).epsilon(1e-6));

  const auto run = cml_run(cfg, g, 3.0, 0.9);
  CHECK(run.times.back() == 3.0);
  CHECK(run.variance1.back() == doctest::Approx(3.25).epsilon(0.02));
  CHECK(run.variance2.back() == doctest::Approx(run.variance1.back()).epsilon(1e-10));
  for (std::size_t k = 1; k < run.times.size(); ++k) {
    CHECK(run.variance1[k] >= run.variance1[k - 1]);
    CHECK(run.times[k] > run.times[k - 1]);
  }
  CHECK(verify::cml_ballistic_slope(run, 2.0, 0.1).pass);
  CHECK(verify::cml_variance(cfg, run, 0.02).pass);
  CHECK_THROWS_AS(cml_run(cfg, g, 1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(cml_run(cfg, g, -1.0, 0.9), ValidationError);
}

TEST_CASE("evolved channel matches the dispersing Gaussian") {
  const auto cfg = defaults();
  const auto g = make_grid(-15, 15, 1201);
  const auto run = cml_run(cfg, g, 2.5, 0.9);
  const auto d1 = lab_density(run.final_state, 1);
  const auto pk = slit_packet(cfg, Slit::One);
  double peak = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) peak = std::max(peak, gaussian_density(pk, g[j], 2.5));
  double worst = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double ref = gaussian_density(pk, g[j], 2.5);
    if (ref < 0.01 * peak) continue;
    worst = std::max(worst, std::abs(d1[j] - ref) / ref);
  }
  CHECK(worst <= 0.02);
}

TEST_CASE("cml_interfere limits") {
  const auto cfg = defaults();
  const auto g = make_grid(-15, 15, 1201);
  const auto s = cml_run(cfg, g, 4.0, 0.9).final_state;
  const auto d1 = lab_density(s, 1);
  const auto d2 = lab_density(s, 2);

  const auto dark = cml_interfere(s, [](double, double) { return std::numbers::pi; });
  const auto bright = cml_interfere(s, [](double, double) { return 0.0; });
  std::vector<double> dark_ref(g.size()), bright_ref(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    dark_ref[j] = std::max(0.0, d1[j] + d2[j] - 2.0 * std::sqrt(d1[j] * d2[j]));
    bright_ref[j] = std::pow(std::sqrt(d1[j]) + std::sqrt(d2[j]), 2);
  }
  const auto nb = normalize(ScalarField{g, bright_ref, s.time});
  for (std::size_t j = 0; j < g.size(); j += 7) CHECK(bright.values[j] == doctest::Approx(nb.values[j]).epsilon(1e-12));
  // Channels coincide at t = 4, so the destructive field vanishes to rounding.
  double dark_peak = *std::max_element(dark_ref.begin(), dark_ref.end());
  double bright_peak = *std::max_element(bright_ref.begin(), bright_ref.end());
  CHECK(dark_peak <= 1e-6 * bright_peak);
}

TEST_CASE("cml interference pipeline matches the closed form") {
  const auto cfg = defaults();
  const auto g = make_grid(-15, 15, 4096);
  const auto s = cml_run(cfg, g, 3.0, 0.9).final_state;
  const auto r = verify::cml_interference(cfg, s, 0.02, 0.01);
  CHECK(r.pass);
  CHECK(r.worst <= 0.02);
}

TEST_CASE("walker ensemble") {
  const auto p = make_params(1, 1, 1);
  const auto e = make_walker_ensemble(p, 100000, 42);
  const auto x0 = walker_positions(e, 0.0);
  CHECK(x0 == e.x0);
  const double se = std::sqrt(2.0 / 100000.0);
  CHECK(std::abs(variance_of(x0) - 1.0) <= 3.0 * se);

  CHECK(walker_ensemble_msd(p, 1000000, 2.0, 12345) == doctest::Approx(2.0).epsilon(0.01));
  CHECK(walker_ensemble_msd(p, 1000000, 4.0, 777) == doctest::Approx(mean_square_displacement(p, 1.0, 4.0)).epsilon(0.01));
  CHECK_THROWS_AS(make_walker_ensemble(p, 0, 1), ValidationError);
  CHECK_THROWS_AS(walker_ensemble_msd(p, 10, -1.0, 1), ValidationError);
}

TEST_CASE("walker ensemble is deterministic and streams are independent") {
  const auto p = make_params(1, 1, 1);
  CHECK(walker_ensemble_msd(p, 50000, 2.0, 9) == walker_ensemble_msd(p, 50000, 2.0, 9));
  CHECK(walker_ensemble_msd(p, 50000, 2.0, 9) != walker_ensemble_msd(p, 50000, 2.0, 10));

  // Walker i sees the same draws regardless of ensemble size.
  const auto small = make_walker_ensemble(p, 100, 5);
  const auto large = make_walker_ensemble(p, 1000, 5);
  for (std::size_t i = 0; i < 100; ++i) CHECK(small.x0[i] == large.x0[i]);

  WalkerStream a(1, 0), b(1, 1);
  int equal = 0;
  for (int k = 0; k < 1000; ++k) equal += a() == b();
  CHECK(equal == 0);
}

TEST_CASE("walker error shrinks like 1/sqrt(count)") {
  const auto p = make_params(1, 1, 1);
  auto rms_error = [&](std::size_t n) {
    double s = 0.0;
    const int reps = 40;
    for (int r = 0; r < reps; ++r) {
      const double d = walker_ensemble_msd(p, n, 2.0, 1000 + static_cast<std::uint64_t>(r) * 7919 + n) - 2.0;
      s += d * d;
    }
    return std::sqrt(s / reps);
  };
  const double e1 = rms_error(20000);
  const double e4 = rms_error(80000);
  CHECK(e1 / e4 == doctest::Approx(2.0).epsilon(0.35));
}

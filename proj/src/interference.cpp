#include "slitsim/interference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace slitsim {

GaussianPacket slit_packet(const SlitConfig& cfg, Slit slit) {
  if (slit == Slit::One) return GaussianPacket{cfg.params, cfg.X, cfg.v_x};
  return GaussianPacket{cfg.params, -cfg.X, -cfg.v_x};
}

double relative_phase(const SlitConfig& cfg, double x, double t) {
  const auto& p = cfg.params;
  const double inv_d = 2.0 * p.mass() / p.hbar_eff();
  const double s = sigma_t(p, t);
  const double spreading = p.u0_sq() * t / (s * s);
  return 2.0 * p.mass() * cfg.v_x * x / p.hbar_eff() - cfg.half_separation(t) * x * inv_d * spreading;
}

SlitDensities slit_densities(const SlitConfig& cfg, double x, double t) {
  return {gaussian_density(slit_packet(cfg, Slit::One), x, t),
          gaussian_density(slit_packet(cfg, Slit::Two), x, t)};
}

double total_intensity(const SlitConfig& cfg, double x, double t) {
  const auto [p1, p2] = slit_densities(cfg, x, t);
  const double r = cfg.amplitude_ratio;
  const double a1 = std::sqrt(p1);
  const double a2 = r * std::sqrt(p2);
  // Same as p1 + r^2 p2 + 2 a1 a2 cos(phi), rearranged with
  // 1 + cos(phi) = 2 cos^2(phi/2) so dark nodes do not cancel catastrophically.
  const double c = std::cos(0.5 * relative_phase(cfg, x, t));
  const double diff = a1 - a2;
  return diff * diff + 4.0 * a1 * a2 * c * c;
}

ScalarField intensity_field(const SlitConfig& cfg, const Grid& grid, double t) {
  return sample_field(grid, t, [&](double x) { return total_intensity(cfg, x, t); });
}

ScalarField normalize(const ScalarField& field) {
  const double integral = trapezoid(field);
  if (!(integral > 0.0) || !std::isfinite(integral))
    throw NumericError("cannot normalize a field with non-positive integral");
  ScalarField out = field;
  for (double& v : out.values) v /= integral;
  return out;
}

std::vector<double> dark_fringe_positions(const SlitConfig& cfg, int n_max) {
  if (cfg.v_x == 0.0) throw ValidationError("v_x", "dark fringes need a non-zero transverse drift");
  if (n_max < 0) throw ValidationError("n_max", "must be non-negative");
  const double kx = cfg.k_x();
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) xs.push_back((n + 0.5) * std::numbers::pi / kx);
  return xs;
}

FringeReport find_extrema(const ScalarField& field) {
  const auto& v = field.values;
  if (v.size() < 5) throw ValidationError("field", "extrema search needs at least 5 points");
  FringeReport report;
  report.time = field.time;
  const double dx = field.grid.dx();

  auto refine = [&](std::size_t i, std::vector<double>& pos, std::vector<double>& val) {
    const double left = v[i - 1];
    const double mid = v[i];
    const double right = v[i + 1];
    const double curvature = left - 2.0 * mid + right;
    double offset = 0.0;
    if (curvature != 0.0) offset = std::clamp(0.5 * (left - right) / curvature, -0.5, 0.5);
    pos.push_back(field.grid[i] + offset * dx);
    val.push_back(mid - 0.25 * (left - right) * offset);
  };

  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] < v[i - 1] && v[i] <= v[i + 1]) refine(i, report.minima, report.minima_values);
    else if (v[i] > v[i - 1] && v[i] >= v[i + 1]) refine(i, report.maxima, report.maxima_values);
  }

  if (!report.maxima.empty() && !report.minima.empty()) {
    const auto brightest = static_cast<std::size_t>(
        std::max_element(report.maxima_values.begin(), report.maxima_values.end()) -
        report.maxima_values.begin());
    const double x_max = report.maxima[brightest];
    const double i_max = report.maxima_values[brightest];
    // neighbouring minima: the closest one on each side
    const auto upper = std::upper_bound(report.minima.begin(), report.minima.end(), x_max);
    double sum = 0.0;
    int count = 0;
    if (upper != report.minima.end()) {
      sum += std::max(0.0, report.minima_values[static_cast<std::size_t>(upper - report.minima.begin())]);
      ++count;
    }
    if (upper != report.minima.begin()) {
      sum += std::max(0.0, report.minima_values[static_cast<std::size_t>(upper - report.minima.begin()) - 1]);
      ++count;
    }
    const double i_min = sum / count;
    if (i_max + i_min > 0.0) report.visibility = std::clamp((i_max - i_min) / (i_max + i_min), 0.0, 1.0);
  }
  return report;
}

double modular_momentum(double p, double d, double h) {
  if (!(d > 0.0)) throw ValidationError("d", "slit distance must be positive");
  if (!(h > 0.0)) throw ValidationError("h", "must be positive");
  const double period = h / d;
  double r = std::fmod(p, period);
  if (r < 0.0) r += period;
  if (r >= period) r = 0.0;
  return r;
}

}  // namespace slitsim

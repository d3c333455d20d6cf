#include "slitsim/core.hpp"

#include <algorithm>
#include <cmath>

namespace slitsim {

PhysicalParams::PhysicalParams(double hbar, double mass, double sigma0)
    : hbar_(hbar), mass_(mass), sigma0_(sigma0), diffusion_(hbar / (2.0 * mass)), u0_(diffusion_ / sigma0) {}

PhysicalParams make_params(double hbar_eff, double mass, double sigma0) {
  if (!(hbar_eff > 0.0) || !std::isfinite(hbar_eff)) throw ValidationError("hbar_eff", "must be positive");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw ValidationError("mass", "must be positive");
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) throw ValidationError("sigma0", "must be positive");
  return PhysicalParams(hbar_eff, mass, sigma0);
}

double SlitConfig::k_x() const noexcept { return params.mass() * std::abs(v_x) / params.hbar_eff(); }

SlitConfig make_slit_config(const PhysicalParams& params, double X, double v_x, double v_y, double phi0,
                            double amplitude_ratio) {
  if (!(X > 0.0) || !std::isfinite(X)) throw ValidationError("X", "slit half-distance must be positive");
  if (!std::isfinite(v_x)) throw ValidationError("v_x", "must be finite");
  if (!(v_y > 0.0) || !std::isfinite(v_y)) throw ValidationError("v_y", "forward speed must be positive");
  if (!std::isfinite(phi0)) throw ValidationError("phi0", "must be finite");
  if (!(amplitude_ratio >= 0.0) || !std::isfinite(amplitude_ratio))
    throw ValidationError("amplitude_ratio", "must be non-negative");
  SlitConfig cfg;
  cfg.params = params;
  cfg.X = X;
  cfg.v_x = v_x;
  cfg.v_y = v_y;
  cfg.phi0 = phi0;
  cfg.amplitude_ratio = amplitude_ratio;
  return cfg;
}

Grid::Grid(double x_min, double x_max, std::size_t n)
    : x_min_(x_min), x_max_(x_max), n_(n), dx_((x_max - x_min) / static_cast<double>(n - 1)) {}

Grid make_grid(double x_min, double x_max, std::size_t n_points) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max)) throw ValidationError("grid", "bounds must be finite");
  if (!(x_min < x_max)) throw ValidationError("grid", "x_min must be less than x_max");
  if (n_points < 2) throw ValidationError("n_points", "grid needs at least 2 points");
  return Grid(x_min, x_max, n_points);
}

std::vector<double> Grid::points() const {
  std::vector<double> xs(n_);
  for (std::size_t i = 0; i < n_; ++i) xs[i] = (*this)[i];
  return xs;
}

double ScalarField::peak_abs() const noexcept {
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  return peak;
}

ScalarField sample_field(const Grid& grid, double time, const std::function<double(double)>& fn) {
  ScalarField field{grid, std::vector<double>(grid.size()), time};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = fn(grid[i]);
    if (!std::isfinite(v)) throw NumericError("non-finite field value at x=" + std::to_string(grid[i]));
    field.values[i] = v;
  }
  return field;
}

double trapezoid(const ScalarField& field) {
  const auto& v = field.values;
  if (v.size() < 2) return 0.0;
  double sum = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) sum += v[i];
  return sum * field.grid.dx();
}

std::vector<double> linspace(double t0, double t1, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {t0};
  std::vector<double> ts(n);
  const double step = (t1 - t0) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) ts[i] = t0 + static_cast<double>(i) * step;
  ts.back() = t1;
  return ts;
}

}  // namespace slitsim

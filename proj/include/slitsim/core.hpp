#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace slitsim {

/// Raised when a constructor or operation receives an argument outside its domain.
/// `field()` names the offending parameter.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)), message_(message) {}

  const std::string& field() const noexcept { return field_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string field_;
  std::string message_;
};

/// Numerical failure at runtime (instability, singular point, non-finite value).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Effective Planck constant, mass and initial packet width, plus the two
 * derived constants every other module uses:
 *
 *   D  = hbar / (2 m)      constant diffusion coefficient
 *   u0 = D / sigma0        initial osmotic speed scale
 *
 * Build through make_params(); instances are immutable.
 */
class PhysicalParams {
 public:
  double hbar_eff() const noexcept { return hbar_; }
  double mass() const noexcept { return mass_; }
  double sigma0() const noexcept { return sigma0_; }
  double diffusion_constant() const noexcept { return diffusion_; }
  double u0() const noexcept { return u0_; }
  double u0_sq() const noexcept { return u0_ * u0_; }

  friend PhysicalParams make_params(double hbar_eff, double mass, double sigma0);

 private:
  PhysicalParams(double hbar, double mass, double sigma0);

  double hbar_;
  double mass_;
  double sigma0_;
  double diffusion_;
  double u0_;
};

PhysicalParams make_params(double hbar_eff = 1.0, double mass = 1.0, double sigma0 = 1.0);

/**
 * Symmetric two-slit geometry. Slit 1 sits at +X and drifts with +v_x,
 * slit 2 is its mirror image at -X drifting with -v_x, so the centers are
 * c1(t) = X + v_x t and c2(t) = -c1(t). `amplitude_ratio` weights the
 * slit-2 amplitude (0 closes slit 2).
 */
struct SlitConfig {
  PhysicalParams params = make_params();
  double X = 2.0;
  double v_x = -0.5;
  double v_y = 1.0;
  double phi0 = 0.0;
  double amplitude_ratio = 1.0;

  double k_x() const noexcept;
  /// Distance of either packet center from the axis, X + v_x t (signed).
  double half_separation(double t) const noexcept { return X + v_x * t; }
  double center1(double t) const noexcept { return half_separation(t); }
  double center2(double t) const noexcept { return -half_separation(t); }
  /// Time at which the two centers coincide; only meaningful for v_x != 0.
  double coincidence_time() const noexcept { return -X / v_x; }
};

SlitConfig make_slit_config(const PhysicalParams& params, double X, double v_x, double v_y,
                            double phi0 = 0.0, double amplitude_ratio = 1.0);

/// Uniform 1-D grid with both endpoints included.
class Grid {
 public:
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t size() const noexcept { return n_; }
  double dx() const noexcept { return dx_; }
  double operator[](std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * dx_; }
  std::vector<double> points() const;

  bool operator==(const Grid&) const = default;

  friend Grid make_grid(double x_min, double x_max, std::size_t n_points);

 private:
  Grid(double x_min, double x_max, std::size_t n);

  double x_min_;
  double x_max_;
  std::size_t n_;
  double dx_;
};

Grid make_grid(double x_min, double x_max, std::size_t n_points);

/// Values of a real field sampled on a grid at one instant.
struct ScalarField {
  Grid grid;
  std::vector<double> values;
  double time = 0.0;

  double peak_abs() const noexcept;
};

/// Samples fn(x) on every grid point. Throws NumericError on non-finite values.
ScalarField sample_field(const Grid& grid, double time, const std::function<double(double)>& fn);

/// Composite trapezoid rule over the whole grid.
double trapezoid(const ScalarField& field);

/// Equally spaced times t0..t1 inclusive; n == 1 yields {t0}.
std::vector<double> linspace(double t0, double t1, std::size_t n);

}  // namespace slitsim

#pragma once

// Closed-form continuum solutions used as independent references. The
// formulas here are written out directly on purpose; they must not lean on
// the network machinery they are meant to check.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <variant>

#include "fluxion/geometry.hpp"

namespace fluxion {

/// Homogeneous slab with both faces held at zero.
struct SlabSpec {
  double length = 1.0;
  /// Thermal diffusivity K/(rho*c).
  double diffusivity = 1.0;
  std::pair<double, double> end_temperatures{0.0, 0.0};
};

/// Decay of the fundamental sine mode: temperature at (x, t) for initial
/// condition sin(pi*x/L) with zero-held faces,
/// exp(-kappa*pi^2*t/L^2) * sin(pi*x/L).
inline double slab_mode_temperature(double x, double t,
                                    const SlabSpec& spec) {
  detail::require(spec.length > 0.0 && spec.diffusivity > 0.0,
                  "slab_mode_temperature: slab must have positive length "
                  "and diffusivity");
  detail::require(spec.end_temperatures.first == 0.0 &&
                      spec.end_temperatures.second == 0.0,
                  "slab_mode_temperature: mode solution needs zero-held "
                  "faces");
  detail::require(x >= 0.0 && x <= spec.length,
                  "slab_mode_temperature: x outside the slab");
  detail::require(t >= 0.0, "slab_mode_temperature: t must be nonnegative");
  const double l = spec.length;
  return std::exp(-spec.diffusivity * std::numbers::pi * std::numbers::pi * t / (l * l)) *
         std::sin(std::numbers::pi * x / l);
}

enum class RadialGeometry { Cylinder, Sphere };

/// Steady temperature in an annulus or spherical shell with both surfaces
/// held: logarithmic in r for the cylinder, harmonic (1/r) for the sphere.
inline double radial_steady_temperature(RadialGeometry geometry, double r,
                                        double r_in, double r_out,
                                        double t_in, double t_out) {
  detail::require(r_in > 0.0 && r_in < r_out,
                  "radial_steady_temperature: need 0 < r_in < r_out");
  detail::require(r >= r_in && r <= r_out,
                  "radial_steady_temperature: r outside the shell");
  const double drop = t_in - t_out;
  if (geometry == RadialGeometry::Cylinder) {
    return t_in - drop * std::log(r / r_in) / std::log(r_out / r_in);
  }
  return t_in - drop * (1.0 / r_in - 1.0 / r) / (1.0 / r_in - 1.0 / r_out);
}

/// Steady end-to-end heat flow for a tube with faces held at t_in and t_out.
/// Each branch spells out its own closed form so the result is independent
/// of resistance_integral.
inline double steady_flux(const CrossSectionProfile& profile,
                          double conductivity, double a, double b,
                          double t_in, double t_out) {
  detail::require(conductivity > 0.0,
                  "steady_flux: conductivity must be positive");
  detail::require(a < b, "steady_flux: requires a < b");
  const double drop = t_in - t_out;
  const double k = conductivity;
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, Prism>) {
          detail::require(p.area > 0.0, "steady_flux: area must be positive");
          return k * p.area * drop / (b - a);
        } else if constexpr (std::is_same_v<P, RadialCylinder>) {
          detail::require(p.height > 0.0 && a > 0.0,
                          "steady_flux: cylinder needs positive height and "
                          "inner radius");
          return 2.0 * std::numbers::pi * k * p.height * drop / std::log(b / a);
        } else if constexpr (std::is_same_v<P, RadialSphere>) {
          detail::require(a > 0.0,
                          "steady_flux: sphere needs a positive inner radius");
          return 4.0 * std::numbers::pi * k * drop / (1.0 / a - 1.0 / b);
        } else if constexpr (std::is_same_v<P, Cone>) {
          const double ua = p.radius_at_origin + p.slope * a;
          const double ub = p.radius_at_origin + p.slope * b;
          detail::require(ua > 0.0 && ub > 0.0,
                          "steady_flux: cone radius must stay positive");
          if (p.slope == 0.0) return k * std::numbers::pi * ua * ua * drop / (b - a);
          return std::numbers::pi * k * p.slope * drop / (1.0 / ua - 1.0 / ub);
        } else {
          throw std::domain_error(
              "steady_flux: no closed form for a tabulated profile");
        }
      },
      profile);
}

}  // namespace fluxion

#pragma once

// Discretization of a FlowTube into a resistance-capacitance network.
//
// Elements tile the tube between breakpoints. Each element carries its full
// heat capacity, lumped at a node placed where the steady conduction profile
// through the element equals the element's volume-average temperature. All
// couplings are exact resistance integrals between node positions, so steady
// states of the network reproduce the continuous steady state at the nodes
// regardless of element count.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "fluxion/geometry.hpp"

namespace fluxion {

/// One control volume of the network.
struct Element {
  double x_left = 0.0;
  double x_right = 0.0;
  /// Node position inside (x_left, x_right) from nodal_position.
  double x_node = 0.0;
  /// Lumped heat capacity of the element, rho*c*volume.
  double capacitance = 0.0;
};

namespace detail {

// Fraction f in (0,1) of the element's end-to-end resistance at which the
// steady profile attains the element's volume average. The steady temperature
// is affine in cumulative resistance r(x), so with r measured from the left
// end the average sits at r = f*r(b):
//
//   f = integral_a^b A(y)*r(y) dy / (r(b) * integral_a^b A(y) dy)
//
// The end temperatures and the conductivity cancel, leaving pure geometry.
// Closed forms below take K = 1.

inline double node_fraction_cylinder(double a, double b) {
  const double log_ratio = std::log(b / a);
  const double w = b * b - a * a;
  return (0.5 * b * b * log_ratio - 0.25 * w) / (0.5 * log_ratio * w);
}

inline double node_fraction_sphere(double ua, double ub) {
  // Also covers the cone after mapping x to the local radius u(x).
  const double cubes = (ub * ub * ub - ua * ua * ua) / 3.0;
  const double num = cubes / ua - 0.5 * (ub * ub - ua * ua);
  const double den = (1.0 / ua - 1.0 / ub) * cubes;
  return num / den;
}

// integral of A(x)*r(x) over one linear-area segment, where r is cumulative
// 1/A resistance measured from the element's left end and equals r0 at x0.
inline double avg_weight_segment(double x0, double x1, double a0, double a1,
                                 double r0) {
  const double dx = x1 - x0;
  const double volume = 0.5 * (a0 + a1) * dx;
  const double z = (a1 - a0) / a0;
  double inner;
  if (std::abs(z) <= 1e-4) {
    // Series in the relative area change; exact at z = 0 and accurate to
    // machine precision in this branch, where the log form cancels badly.
    inner = dx * dx * (0.5 + z * (1.0 / 6.0 + z * (-1.0 / 24.0 + z / 60.0)));
  } else {
    const double m = (a1 - a0) / dx;
    inner = (0.5 * a1 * a1 * std::log(a1 / a0) -
             0.25 * (a1 * a1 - a0 * a0)) /
            (m * m);
  }
  return r0 * volume + inner;
}

inline double node_fraction_tabulated(const Tabulated& tab, double a,
                                      double b) {
  double weighted = 0.0;
  double volume = 0.0;
  double r = 0.0;
  tab_for_each_segment(tab, a, b,
                       [&](double lo, double hi, double alo, double ahi) {
                         weighted += avg_weight_segment(lo, hi, alo, ahi, r);
                         volume += 0.5 * (alo + ahi) * (hi - lo);
                         r += inv_area_segment(lo, hi, alo, ahi);
                       });
  return weighted / (r * volume);
}

}  // namespace detail

/// Position inside (a, b) at which the steady conduction profile through the
/// element takes the element's volume-average value. Placement depends on
/// geometry only; conductivity and end temperatures cancel.
inline double nodal_position(const FlowTube& tube, double a, double b) {
  detail::require(a < b, "nodal_position: requires a < b");
  detail::require(a >= tube.x_start() && b <= tube.x_end(),
                  "nodal_position: interval outside the tube");
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, Prism>) {
          return 0.5 * (a + b);
        } else if constexpr (std::is_same_v<P, RadialCylinder>) {
          const double f = detail::node_fraction_cylinder(a, b);
          return a * std::exp(f * std::log(b / a));
        } else if constexpr (std::is_same_v<P, RadialSphere>) {
          const double f = detail::node_fraction_sphere(a, b);
          return 1.0 / ((1.0 - f) / a + f / b);
        } else if constexpr (std::is_same_v<P, Cone>) {
          if (p.slope == 0.0) return 0.5 * (a + b);
          const double ua = p.radius_at_origin + p.slope * a;
          const double ub = p.radius_at_origin + p.slope * b;
          const double f = detail::node_fraction_sphere(ua, ub);
          const double um = 1.0 / ((1.0 - f) / ua + f / ub);
          return (um - p.radius_at_origin) / p.slope;
        } else {
          // No closed-form inverse for a tabulated profile: bisect the
          // monotone cumulative resistance for r(x) = f*r(b).
          const double f = detail::node_fraction_tabulated(p, a, b);
          const double total = resistance_integral(tube, a, b);
          const double target = f * total;
          double lo = a;
          double hi = b;
          for (int i = 0; i < 200 && hi - lo > 1e-15 * (b - a); ++i) {
            const double mid = 0.5 * (lo + hi);
            const double res = resistance_integral(tube, a, mid) - target;
            if (std::abs(res) <= 1e-13 * total) return mid;
            (res < 0.0 ? lo : hi) = mid;
          }
          return 0.5 * (lo + hi);
        }
      },
      tube.profile());
}

/// Immutable resistance-capacitance network over a tube.
class Mesh {
 public:
  Mesh(FlowTube tube, std::vector<Element> elements,
       std::vector<double> internal_resistances,
       std::pair<double, double> boundary_resistances)
      : tube_(std::move(tube)),
        elements_(std::move(elements)),
        internal_resistances_(std::move(internal_resistances)),
        boundary_resistances_(boundary_resistances) {}

  const FlowTube& tube() const { return tube_; }
  const std::vector<Element>& elements() const { return elements_; }

  /// Node-to-node resistances; entry i couples elements i and i+1.
  const std::vector<double>& internal_resistances() const {
    return internal_resistances_;
  }

  /// Resistances from the tube end faces to the first and last nodes.
  const std::pair<double, double>& boundary_resistances() const {
    return boundary_resistances_;
  }

  std::size_t size() const { return elements_.size(); }

 private:
  FlowTube tube_;
  std::vector<Element> elements_;
  std::vector<double> internal_resistances_;
  std::pair<double, double> boundary_resistances_;
};

/// Builds the network with elements between consecutive breakpoints. The
/// breakpoints must be strictly increasing and span the tube exactly.
inline Mesh build_mesh(const FlowTube& tube,
                       const std::vector<double>& breakpoints) {
  detail::require(breakpoints.size() >= 2,
                  "build_mesh: need at least two breakpoints");
  detail::require(breakpoints.front() == tube.x_start() &&
                      breakpoints.back() == tube.x_end(),
                  "build_mesh: breakpoints must span the tube exactly");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    detail::require(breakpoints[i] < breakpoints[i + 1],
                    "build_mesh: breakpoints must be strictly increasing");
  }

  const double rho_c = tube.material().volumetric_heat_capacity();
  std::vector<Element> elements;
  elements.reserve(breakpoints.size() - 1);
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double xl = breakpoints[i];
    const double xr = breakpoints[i + 1];
    elements.push_back(Element{xl, xr, nodal_position(tube, xl, xr),
                               rho_c * volume_integral(tube, xl, xr)});
  }

  std::vector<double> internal;
  internal.reserve(elements.size() - 1);
  for (std::size_t i = 0; i + 1 < elements.size(); ++i) {
    internal.push_back(resistance_integral(tube, elements[i].x_node,
                                           elements[i + 1].x_node));
  }

  const std::pair<double, double> boundary{
      resistance_integral(tube, tube.x_start(), elements.front().x_node),
      resistance_integral(tube, elements.back().x_node, tube.x_end())};

  return Mesh(tube, std::move(elements), std::move(internal), boundary);
}

/// Builds the network from n equal-width elements.
inline Mesh build_mesh(const FlowTube& tube, std::size_t n) {
  detail::require(n >= 1, "build_mesh: element count must be positive");
  std::vector<double> breakpoints(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    breakpoints[i] =
        tube.x_start() + tube.span() * static_cast<double>(i) /
                             static_cast<double>(n);
  }
  breakpoints.front() = tube.x_start();
  breakpoints.back() = tube.x_end();
  return build_mesh(tube, breakpoints);
}

}  // namespace fluxion

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fluxion/errors.hpp"

namespace fluxion {

// ---------------------------------------------------------------------------
// Cross-section profiles A(x)
// ---------------------------------------------------------------------------

/// Constant cross section: A(x) = area.
struct Prism {
  double area = 1.0;
};

/// Radial flow in a cylinder of thickness `height`: A(x) = 2*pi*x*height.
struct RadialCylinder {
  double height = 1.0;
};

/// Radial flow in a sphere: A(x) = 4*pi*x^2.
struct RadialSphere {};

/// Truncated cone: A(x) = pi*(radius_at_origin + slope*x)^2.
struct Cone {
  double radius_at_origin = 1.0;
  double slope = 0.0;
};

/// Piecewise-linear area from samples (x_i, A_i); x_i strictly increasing,
/// A_i > 0, at least two samples.
struct Tabulated {
  std::vector<double> x;
  std::vector<double> area;
};

using CrossSectionProfile =
    std::variant<Prism, RadialCylinder, RadialSphere, Cone, Tabulated>;

/// Homogeneous material: conductivity K, density rho, specific heat c.
/// K is uniform along the tube; a conductivity change means a new tube.
struct Material {
  double conductivity = 1.0;
  double density = 1.0;
  double specific_heat = 1.0;

  double volumetric_heat_capacity() const { return density * specific_heat; }
};

namespace detail {

/// Area interpolated at x inside sample segment [x0, x1].
inline double tab_interp(const Tabulated& t, double x) {
  // Caller guarantees x within [t.x.front(), t.x.back()].
  auto it = std::upper_bound(t.x.begin(), t.x.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - t.x.begin());
  if (hi == 0) hi = 1;
  if (hi == t.x.size()) hi = t.x.size() - 1;
  const std::size_t lo = hi - 1;
  const double w = (x - t.x[lo]) / (t.x[hi] - t.x[lo]);
  return t.area[lo] + w * (t.area[hi] - t.area[lo]);
}

/// Integral of dy/A(y) over [x0, x1] with A linear from a0 to a1.
inline double inv_area_segment(double x0, double x1, double a0, double a1) {
  const double dx = x1 - x0;
  if (dx <= 0.0) return 0.0;
  const double diff = a1 - a0;
  if (diff == 0.0) return dx / a0;
  return dx * std::log1p(diff / a0) / diff;
}

/// Walks the sample segments of `t` that overlap [a, b] and accumulates
/// per-segment contributions via `f(lo, hi, a_lo, a_hi)`.
template <typename F>
void tab_for_each_segment(const Tabulated& t, double a, double b, F&& f) {
  for (std::size_t i = 0; i + 1 < t.x.size(); ++i) {
    const double lo = std::max(a, t.x[i]);
    const double hi = std::min(b, t.x[i + 1]);
    if (hi <= lo) continue;
    f(lo, hi, tab_interp(t, lo), tab_interp(t, hi));
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// FlowTube
// ---------------------------------------------------------------------------

/// A 1-D conduction path: cross-section profile plus material over an axial
/// interval [x_start, x_end]. Flow crosses only the end faces.
class FlowTube {
 public:
  FlowTube(CrossSectionProfile profile, Material material, double x_start,
           double x_end)
      : profile_(std::move(profile)),
        material_(material),
        x_start_(x_start),
        x_end_(x_end) {
    validate();
  }

  const CrossSectionProfile& profile() const { return profile_; }
  const Material& material() const { return material_; }
  double x_start() const { return x_start_; }
  double x_end() const { return x_end_; }
  double span() const { return x_end_ - x_start_; }

  bool contains(double x) const { return x >= x_start_ && x <= x_end_; }

 private:
  void validate() const {
    using detail::require;
    require(std::isfinite(x_start_) && std::isfinite(x_end_),
            "FlowTube: endpoints must be finite");
    require(x_start_ < x_end_, "FlowTube: x_start must be < x_end");
    require(material_.conductivity > 0.0, "FlowTube: conductivity must be > 0");
    require(material_.density > 0.0, "FlowTube: density must be > 0");
    require(material_.specific_heat > 0.0,
            "FlowTube: specific heat must be > 0");

    if (const auto* p = std::get_if<Prism>(&profile_)) {
      require(p->area > 0.0, "Prism: area must be > 0");
    } else if (const auto* c = std::get_if<RadialCylinder>(&profile_)) {
      require(c->height > 0.0, "RadialCylinder: height must be > 0");
      require(x_start_ > 0.0, "RadialCylinder: x_start must be > 0");
    } else if (std::get_if<RadialSphere>(&profile_)) {
      require(x_start_ > 0.0, "RadialSphere: x_start must be > 0");
    } else if (const auto* c = std::get_if<Cone>(&profile_)) {
      // Radius must stay positive over the whole interval; it is linear in x,
      // so the endpoints decide.
      require(c->radius_at_origin + c->slope * x_start_ > 0.0 &&
                  c->radius_at_origin + c->slope * x_end_ > 0.0,
              "Cone: radius must be > 0 over the tube interval");
    } else if (const auto* t = std::get_if<Tabulated>(&profile_)) {
      require(t->x.size() >= 2 && t->x.size() == t->area.size(),
              "Tabulated: need at least 2 (x, A) samples");
      for (std::size_t i = 0; i < t->x.size(); ++i) {
        require(std::isfinite(t->x[i]) && std::isfinite(t->area[i]),
                "Tabulated: samples must be finite");
        require(t->area[i] > 0.0, "Tabulated: areas must be > 0");
        if (i > 0)
          require(t->x[i] > t->x[i - 1],
                  "Tabulated: abscissae must be strictly increasing");
      }
      require(t->x.front() <= x_start_ && t->x.back() >= x_end_,
              "Tabulated: samples must cover the tube interval");
    }
  }

  CrossSectionProfile profile_;
  Material material_;
  double x_start_;
  double x_end_;
};

// ---------------------------------------------------------------------------
// The three fundamental integrals
// ---------------------------------------------------------------------------

/// Cross-sectional area A(x). Requires x within the tube interval.
inline double area(const FlowTube& tube, double x) {
  detail::require(tube.contains(x), "area: x outside tube interval");
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, Prism>) {
          return p.area;
        } else if constexpr (std::is_same_v<P, RadialCylinder>) {
          return 2.0 * std::numbers::pi * x * p.height;
        } else if constexpr (std::is_same_v<P, RadialSphere>) {
          return 4.0 * std::numbers::pi * x * x;
        } else if constexpr (std::is_same_v<P, Cone>) {
          const double r = p.radius_at_origin + p.slope * x;
          return std::numbers::pi * r * r;
        } else {
          return detail::tab_interp(p, x);
        }
      },
      tube.profile());
}

/// Volume between two cross sections: integral of A(y) dy over [a, b].
/// Closed form for the analytic profiles, trapezoid-exact for Tabulated.
inline double volume_integral(const FlowTube& tube, double a, double b) {
  detail::require(a < b, "volume_integral: requires a < b");
  detail::require(tube.contains(a) && tube.contains(b),
                  "volume_integral: interval outside tube");
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, Prism>) {
          return p.area * (b - a);
        } else if constexpr (std::is_same_v<P, RadialCylinder>) {
          return std::numbers::pi * p.height * (b * b - a * a);
        } else if constexpr (std::is_same_v<P, RadialSphere>) {
          return 4.0 * std::numbers::pi * (b * b * b - a * a * a) / 3.0;
        } else if constexpr (std::is_same_v<P, Cone>) {
          if (p.slope == 0.0) {
            return std::numbers::pi * p.radius_at_origin * p.radius_at_origin * (b - a);
          }
          const double ua = p.radius_at_origin + p.slope * a;
          const double ub = p.radius_at_origin + p.slope * b;
          return std::numbers::pi * (ub * ub * ub - ua * ua * ua) / (3.0 * p.slope);
        } else {
          double sum = 0.0;
          detail::tab_for_each_segment(
              p, a, b, [&](double lo, double hi, double alo, double ahi) {
                sum += 0.5 * (alo + ahi) * (hi - lo);
              });
          return sum;
        }
      },
      tube.profile());
}

/// Thermal resistance between two cross sections: integral of dy/(K*A(y))
/// over [a, b]. Zero when a == b. Closed form for the analytic profiles and
/// segment-by-segment closed form for Tabulated (1/A of a linear A).
inline double resistance_integral(const FlowTube& tube, double a, double b) {
  detail::require(a <= b, "resistance_integral: requires a <= b");
  if (a == b) return 0.0;
  detail::require(tube.contains(a) && tube.contains(b),
                  "resistance_integral: interval outside tube");
  const double k = tube.material().conductivity;
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, Prism>) {
          return (b - a) / (k * p.area);
        } else if constexpr (std::is_same_v<P, RadialCylinder>) {
          return std::log(b / a) / (2.0 * std::numbers::pi * k * p.height);
        } else if constexpr (std::is_same_v<P, RadialSphere>) {
          return (1.0 / a - 1.0 / b) / (4.0 * std::numbers::pi * k);
        } else if constexpr (std::is_same_v<P, Cone>) {
          const double r0 = p.radius_at_origin;
          if (p.slope == 0.0) return (b - a) / (k * std::numbers::pi * r0 * r0);
          const double ua = r0 + p.slope * a;
          const double ub = r0 + p.slope * b;
          return (1.0 / ua - 1.0 / ub) / (std::numbers::pi * k * p.slope);
        } else {
          double sum = 0.0;
          detail::tab_for_each_segment(
              p, a, b, [&](double lo, double hi, double alo, double ahi) {
                sum += detail::inv_area_segment(lo, hi, alo, ahi);
              });
          return sum / k;
        }
      },
      tube.profile());
}

}  // namespace fluxion

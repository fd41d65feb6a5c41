#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "fluxion/discretize.hpp"
#include "fluxion/geometry.hpp"
#include "support/quadrature.hpp"

using fluxion::FlowTube;
using fluxion::Material;
using fluxion::Mesh;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const Material kUnitMaterial{1.0, 1.0, 1.0};

FlowTube make_tube(fluxion::CrossSectionProfile profile, double a, double b,
                   Material mat = kUnitMaterial) {
  return FlowTube(std::move(profile), mat, a, b);
}

// Independent node-placement oracle. Builds the steady profile with unit end
// temperatures, T(x) = 1 - r(x)/r(b), computes the volume average by
// quadrature, and locates the matching isotherm by bisection. Everything runs
// through area() and numeric integration, none of the closed forms.
double brute_force_node(const FlowTube& tube, double a, double b) {
  auto r = [&](double x) {
    if (x <= a) return 0.0;
    return testsupport::integrate(
        [&](double y) { return 1.0 / fluxion::area(tube, y); }, a, x);
  };
  const double rb = r(b);
  auto steady = [&](double x) { return 1.0 - r(x) / rb; };
  const double num = testsupport::integrate(
      [&](double x) { return fluxion::area(tube, x) * steady(x); }, a, b,
      1e-12);
  const double den = testsupport::integrate(
      [&](double x) { return fluxion::area(tube, x); }, a, b, 1e-12);
  const double average = num / den;
  return testsupport::bisect([&](double x) { return steady(x) - average; },
                             a, b);
}

double total_resistance(const Mesh& mesh) {
  double sum = mesh.boundary_resistances().first +
               mesh.boundary_resistances().second;
  for (double r : mesh.internal_resistances()) sum += r;
  return sum;
}

double total_capacitance(const Mesh& mesh) {
  double sum = 0.0;
  for (const auto& e : mesh.elements()) sum += e.capacitance;
  return sum;
}

}  // namespace

TEST_CASE("constant-area node sits at the midpoint", "[discretize]") {
  auto tube = make_tube(fluxion::Prism{2.0}, 0.0, 1.0);
  CHECK(fluxion::nodal_position(tube, 0.0, 1.0) == 0.5);
  CHECK(fluxion::nodal_position(tube, 0.2, 0.3) == 0.25);
  auto flat_cone = make_tube(fluxion::Cone{1.5, 0.0}, 0.0, 2.0);
  CHECK(fluxion::nodal_position(flat_cone, 0.0, 2.0) == 1.0);
}

TEST_CASE("cylinder node placement matches brute-force averaging",
          "[discretize]") {
  auto tube = make_tube(fluxion::RadialCylinder{1.0}, 1.0, 2.0);
  const double node = fluxion::nodal_position(tube, 1.0, 2.0);

  // Closed form carried through by hand: f = (2 ln2 - 3/4)/((3/2) ln2),
  // node = 2^f.
  const double f =
      (2.0 * std::log(2.0) - 0.75) / (1.5 * std::log(2.0));
  CHECK_THAT(node, WithinRel(std::pow(2.0, f), 1e-13));
  CHECK_THAT(node, WithinAbs(1.5284, 1e-4));
  CHECK_THAT(node, WithinAbs(brute_force_node(tube, 1.0, 2.0), 1e-9));
}

TEST_CASE("sphere node placement matches brute-force averaging",
          "[discretize]") {
  auto tube = make_tube(fluxion::RadialSphere{}, 1.0, 2.0);
  const double node = fluxion::nodal_position(tube, 1.0, 2.0);
  CHECK_THAT(node, WithinRel(14.0 / 9.0, 1e-13));
  CHECK_THAT(node, WithinAbs(brute_force_node(tube, 1.0, 2.0), 1e-9));
}

TEST_CASE("cone node shifts toward the wide end", "[discretize]") {
  auto tube = make_tube(fluxion::Cone{1.0, 1.0}, 0.0, 1.0);
  const double node = fluxion::nodal_position(tube, 0.0, 1.0);
  CHECK(node > 0.5);
  CHECK(node < 1.0);
  CHECK_THAT(node, WithinAbs(brute_force_node(tube, 0.0, 1.0), 1e-9));

  auto narrowing = make_tube(fluxion::Cone{1.0, -0.5}, 0.0, 1.0);
  const double node2 = fluxion::nodal_position(narrowing, 0.0, 1.0);
  CHECK(node2 < 0.5);
  CHECK_THAT(node2, WithinAbs(brute_force_node(narrowing, 0.0, 1.0), 1e-9));
}

TEST_CASE("tabulated node placement matches brute-force averaging",
          "[discretize]") {
  auto tube = make_tube(
      fluxion::Tabulated{{0.0, 0.5, 1.2, 2.0}, {1.0, 2.5, 1.2, 3.0}}, 0.0,
      2.0);
  for (auto [a, b] : {std::pair{0.0, 2.0}, std::pair{0.3, 1.7},
                      std::pair{0.6, 1.0}}) {
    const double node = fluxion::nodal_position(tube, a, b);
    CHECK(node > a);
    CHECK(node < b);
    CHECK_THAT(node, WithinAbs(brute_force_node(tube, a, b), 1e-9));
  }
}

TEST_CASE("node placement stays interior on random subintervals",
          "[discretize]") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> pick(0.0, 1.0);
  std::vector<FlowTube> tubes;
  tubes.push_back(make_tube(fluxion::RadialCylinder{2.0}, 0.5, 3.0));
  tubes.push_back(make_tube(fluxion::RadialSphere{}, 0.5, 3.0));
  tubes.push_back(make_tube(fluxion::Cone{0.2, 1.5}, 0.0, 2.0));
  for (const auto& tube : tubes) {
    for (int i = 0; i < 50; ++i) {
      const double u = pick(rng);
      const double v = pick(rng);
      const double a = tube.x_start() + tube.span() * std::min(u, v);
      const double b = tube.x_start() + tube.span() * std::max(u, v);
      if (b - a < 1e-3) continue;
      const double node = fluxion::nodal_position(tube, a, b);
      CHECK(node > a);
      CHECK(node < b);
    }
  }
}

TEST_CASE("nodal_position validates its interval", "[discretize]") {
  auto tube = make_tube(fluxion::Prism{1.0}, 0.0, 1.0);
  CHECK_THROWS_AS(fluxion::nodal_position(tube, 0.6, 0.4), std::domain_error);
  CHECK_THROWS_AS(fluxion::nodal_position(tube, 0.5, 0.5), std::domain_error);
  CHECK_THROWS_AS(fluxion::nodal_position(tube, -0.1, 0.5),
                  std::domain_error);
  CHECK_THROWS_AS(fluxion::nodal_position(tube, 0.5, 1.1), std::domain_error);
}

TEST_CASE("uniform prism mesh has the textbook layout", "[discretize]") {
  auto tube = make_tube(fluxion::Prism{1.0}, 0.0, 1.0);
  const Mesh mesh = fluxion::build_mesh(tube, std::size_t{4});
  REQUIRE(mesh.size() == 4);
  const std::vector<double> nodes{0.125, 0.375, 0.625, 0.875};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK_THAT(mesh.elements()[i].x_node, WithinAbs(nodes[i], 1e-15));
    CHECK_THAT(mesh.elements()[i].capacitance, WithinAbs(0.25, 1e-15));
  }
  REQUIRE(mesh.internal_resistances().size() == 3);
  for (double r : mesh.internal_resistances()) {
    CHECK_THAT(r, WithinAbs(0.25, 1e-15));
  }
  CHECK_THAT(mesh.boundary_resistances().first, WithinAbs(0.125, 1e-15));
  CHECK_THAT(mesh.boundary_resistances().second, WithinAbs(0.125, 1e-15));
}

TEST_CASE("single-element mesh keeps the end-to-end resistance",
          "[discretize]") {
  auto tube = make_tube(fluxion::RadialSphere{}, 1.0, 2.0);
  const Mesh mesh = fluxion::build_mesh(tube, std::size_t{1});
  REQUIRE(mesh.size() == 1);
  CHECK(mesh.internal_resistances().empty());
  CHECK_THAT(total_resistance(mesh),
             WithinRel(fluxion::resistance_integral(tube, 1.0, 2.0), 1e-12));
}

TEST_CASE("cylinder internal resistance couples the placed nodes",
          "[discretize]") {
  auto tube = make_tube(fluxion::RadialCylinder{1.0}, 1.0, 2.0);
  const Mesh mesh = fluxion::build_mesh(tube, std::size_t{2});
  REQUIRE(mesh.size() == 2);
  const double n0 = mesh.elements()[0].x_node;
  const double n1 = mesh.elements()[1].x_node;
  CHECK_THAT(mesh.internal_resistances()[0],
             WithinRel(std::log(n1 / n0) / (2.0 * std::numbers::pi), 1e-13));
  CHECK_THAT(n0, WithinAbs(brute_force_node(tube, 1.0, 1.5), 1e-9));
  CHECK_THAT(n1, WithinAbs(brute_force_node(tube, 1.5, 2.0), 1e-9));
}

TEST_CASE("mesh totals match the tube integrals on any breakpoints",
          "[discretize]") {
  const Material mat{2.0, 3.0, 0.5};
  std::vector<FlowTube> tubes;
  tubes.push_back(make_tube(fluxion::Prism{1.5}, 0.0, 2.0, mat));
  tubes.push_back(make_tube(fluxion::RadialCylinder{1.0}, 0.5, 2.5, mat));
  tubes.push_back(make_tube(fluxion::RadialSphere{}, 0.5, 2.5, mat));
  tubes.push_back(make_tube(fluxion::Cone{1.0, 0.7}, 0.0, 2.0, mat));
  tubes.push_back(
      make_tube(fluxion::Tabulated{{0.0, 0.9, 2.0}, {1.0, 2.0, 1.3}}, 0.0,
                2.0, mat));

  std::mt19937 rng(77);
  std::uniform_real_distribution<double> pick(0.05, 0.95);
  for (const auto& tube : tubes) {
    std::vector<double> cuts{tube.x_start(), tube.x_end()};
    for (int i = 0; i < 6; ++i) {
      cuts.push_back(tube.x_start() + tube.span() * pick(rng));
    }
    std::sort(cuts.begin(), cuts.end());
    const Mesh mesh = fluxion::build_mesh(tube, cuts);
    const double rho_c = mat.volumetric_heat_capacity();
    CHECK_THAT(total_resistance(mesh),
               WithinRel(fluxion::resistance_integral(tube, tube.x_start(),
                                                      tube.x_end()),
                         1e-12));
    CHECK_THAT(total_capacitance(mesh),
               WithinRel(rho_c * fluxion::volume_integral(
                                     tube, tube.x_start(), tube.x_end()),
                         1e-12));
    for (const auto& e : mesh.elements()) {
      CHECK(e.x_left < e.x_node);
      CHECK(e.x_node < e.x_right);
      CHECK(e.capacitance > 0.0);
    }
  }
}

TEST_CASE("refining a mesh preserves the totals", "[discretize]") {
  auto tube = make_tube(fluxion::Cone{1.0, 1.0}, 0.0, 2.0);
  std::vector<double> coarse{0.0, 0.8, 2.0};
  std::vector<double> fine{0.0, 0.3, 0.8, 1.1, 1.7, 2.0};
  const Mesh m1 = fluxion::build_mesh(tube, coarse);
  const Mesh m2 = fluxion::build_mesh(tube, fine);
  CHECK_THAT(total_resistance(m1), WithinRel(total_resistance(m2), 1e-12));
  CHECK_THAT(total_capacitance(m1), WithinRel(total_capacitance(m2), 1e-12));
}

TEST_CASE("mesh elements tile the tube", "[discretize]") {
  auto tube = make_tube(fluxion::RadialCylinder{1.0}, 1.0, 3.0);
  const Mesh mesh = fluxion::build_mesh(tube, std::size_t{5});
  CHECK(mesh.elements().front().x_left == 1.0);
  CHECK(mesh.elements().back().x_right == 3.0);
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    CHECK(mesh.elements()[i].x_right == mesh.elements()[i + 1].x_left);
  }
}

TEST_CASE("build_mesh rejects bad input", "[discretize]") {
  auto tube = make_tube(fluxion::Prism{1.0}, 0.0, 1.0);
  CHECK_THROWS_AS(fluxion::build_mesh(tube, std::size_t{0}),
                  std::domain_error);
  CHECK_THROWS_AS(fluxion::build_mesh(tube, std::vector<double>{0.0, 1.0, 0.5}),
                  std::domain_error);
  CHECK_THROWS_AS(
      fluxion::build_mesh(tube, std::vector<double>{0.0, 0.5, 0.5, 1.0}),
      std::domain_error);
  CHECK_THROWS_AS(fluxion::build_mesh(tube, std::vector<double>{0.1, 1.0}),
                  std::domain_error);
  CHECK_THROWS_AS(fluxion::build_mesh(tube, std::vector<double>{0.0, 0.9}),
                  std::domain_error);
  CHECK_THROWS_AS(fluxion::build_mesh(tube, std::vector<double>{0.0}),
                  std::domain_error);
}

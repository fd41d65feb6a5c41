#pragma once

// Problem description files for the batch front end. The layout is JSON
// with one object per concern (geometry, material, domain, mesh, bc,
// initial, time, output). Parsing is strict: unknown fields are rejected,
// everything is validated up front, and every diagnostic names the field
// path or the source line that caused it.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fluxion/discretize.hpp"
#include "fluxion/geometry.hpp"
#include "fluxion/solver.hpp"

namespace fluxion {

/// A problem description that cannot be used as written. The message names
/// the offending field (dotted path) or the parse position.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Initial profile sin(pi*(x - x_start)/(x_end - x_start)) at the nodes.
struct SineInitial {
  bool operator==(const SineInitial&) const = default;
};

/// Constant value, one value per element, or the named sine profile.
using InitialSpec = std::variant<double, std::vector<double>, SineInitial>;

struct TimeConfig {
  double dt = 0.0;
  double t_end = 0.0;
  double theta = 1.0;
  std::vector<double> record_times;
};

namespace detail {

using Json = nlohmann::json;

[[noreturn]] inline void config_fail(const std::string& where,
                                     const std::string& message) {
  throw ConfigError(where + ": " + message);
}

inline void check_fields(const Json& object, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : object.items()) {
    const bool known =
        std::any_of(allowed.begin(), allowed.end(),
                    [&item](const char* name) { return item.key() == name; });
    if (!known) {
      config_fail(where, "unknown field '" + item.key() + "'");
    }
  }
}

inline const Json& need(const Json& object, const std::string& where,
                        const char* field) {
  const auto it = object.find(field);
  if (it == object.end()) {
    config_fail(where, std::string("missing field '") + field + "'");
  }
  return *it;
}

inline const Json& need_object(const Json& object, const std::string& where,
                               const char* field) {
  const Json& node = need(object, where, field);
  if (!node.is_object()) {
    config_fail(where + "." + field, "must be an object");
  }
  return node;
}

inline double as_number(const Json& node, const std::string& where) {
  if (!node.is_number()) config_fail(where, "must be a number");
  return node.get<double>();
}

inline double need_number(const Json& object, const std::string& where,
                          const char* field) {
  return as_number(need(object, where, field), where + "." + field);
}

inline double number_or(const Json& object, const std::string& where,
                        const char* field, double fallback) {
  const auto it = object.find(field);
  return it == object.end() ? fallback : as_number(*it, where + "." + field);
}

inline std::string need_string(const Json& object, const std::string& where,
                               const char* field) {
  const Json& node = need(object, where, field);
  if (!node.is_string()) {
    config_fail(where + "." + field, "must be a string");
  }
  return node.get<std::string>();
}

inline std::vector<double> as_number_array(const Json& node,
                                           const std::string& where) {
  if (!node.is_array()) config_fail(where, "must be an array of numbers");
  std::vector<double> values;
  values.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    values.push_back(as_number(node[i], where + "[" + std::to_string(i) +
                                            "]"));
  }
  return values;
}

inline CrossSectionProfile parse_geometry(const Json& node,
                                          const std::string& where) {
  const std::string type = need_string(node, where, "type");
  if (type == "prism") {
    check_fields(node, where, {"type", "area"});
    return Prism{number_or(node, where, "area", 1.0)};
  }
  if (type == "cylinder") {
    check_fields(node, where, {"type", "height"});
    return RadialCylinder{number_or(node, where, "height", 1.0)};
  }
  if (type == "sphere") {
    check_fields(node, where, {"type"});
    return RadialSphere{};
  }
  if (type == "cone") {
    check_fields(node, where, {"type", "radius_at_origin", "slope"});
    return Cone{number_or(node, where, "radius_at_origin", 1.0),
                number_or(node, where, "slope", 0.0)};
  }
  if (type == "tabulated") {
    check_fields(node, where, {"type", "x", "area"});
    Tabulated table;
    table.x = as_number_array(need(node, where, "x"), where + ".x");
    table.area = as_number_array(need(node, where, "area"), where + ".area");
    return table;
  }
  config_fail(where + ".type", "unknown geometry type '" + type + "'");
}

inline Material parse_material(const Json& node, const std::string& where) {
  check_fields(node, where, {"k", "rho", "c"});
  Material material;
  material.conductivity = need_number(node, where, "k");
  material.density = need_number(node, where, "rho");
  material.specific_heat = need_number(node, where, "c");
  if (!(material.conductivity > 0.0)) {
    config_fail(where + ".k", "must be positive");
  }
  if (!(material.density > 0.0)) {
    config_fail(where + ".rho", "must be positive");
  }
  if (!(material.specific_heat > 0.0)) {
    config_fail(where + ".c", "must be positive");
  }
  return material;
}

inline BoundaryCondition parse_bc_side(const Json& node,
                                       const std::string& where) {
  if (!node.is_object()) config_fail(where, "must be an object");
  check_fields(node, where, {"type", "value"});
  const std::string type = need_string(node, where, "type");
  if (type == "dirichlet") {
    return Dirichlet{need_number(node, where, "value")};
  }
  if (type == "flux") {
    return Flux{need_number(node, where, "value")};
  }
  if (type == "insulated") {
    if (node.contains("value")) {
      config_fail(where + ".value", "an insulated face takes no value");
    }
    return Insulated{};
  }
  config_fail(where + ".type", "unknown boundary type '" + type + "'");
}

inline InitialSpec parse_initial(const Json& node, const std::string& where) {
  if (node.is_number()) return node.get<double>();
  if (node.is_array()) return as_number_array(node, where);
  if (node.is_string()) {
    const auto name = node.get<std::string>();
    if (name == "sine") return SineInitial{};
    config_fail(where, "unknown initial profile '" + name + "'");
  }
  config_fail(where, "must be a number, a per-element array, or \"sine\"");
}

inline TimeConfig parse_time(const Json& node, const std::string& where) {
  check_fields(node, where, {"dt", "t_end", "theta", "record_times"});
  TimeConfig time;
  time.dt = need_number(node, where, "dt");
  time.t_end = need_number(node, where, "t_end");
  time.theta = number_or(node, where, "theta", 1.0);
  if (const auto it = node.find("record_times"); it != node.end()) {
    time.record_times = as_number_array(*it, where + ".record_times");
  }
  if (!(std::isfinite(time.dt) && time.dt > 0.0)) {
    config_fail(where + ".dt", "must be positive");
  }
  if (!(std::isfinite(time.t_end) && time.t_end >= 0.0)) {
    config_fail(where + ".t_end", "must be nonnegative");
  }
  if (!(time.theta >= 0.0 && time.theta <= 1.0)) {
    config_fail(where + ".theta", "must lie in [0, 1]");
  }
  for (std::size_t i = 0; i < time.record_times.size(); ++i) {
    const double value = time.record_times[i];
    if (!(value >= 0.0 && value <= time.t_end)) {
      config_fail(where + ".record_times", "must lie in [0, t_end]");
    }
    if (i > 0 && !(time.record_times[i - 1] < value)) {
      config_fail(where + ".record_times", "must be strictly increasing");
    }
  }
  return time;
}

}  // namespace detail

/// Everything a batch run needs, validated and ready to build a mesh from.
struct ProblemConfig {
  CrossSectionProfile profile;
  Material material{1.0, 1.0, 1.0};
  double x_start = 0.0;
  double x_end = 1.0;
  std::optional<long long> n_elements;
  std::optional<std::vector<double>> breakpoints;
  BoundaryPair bc;
  InitialSpec initial = 0.0;
  std::optional<TimeConfig> time;
  std::string output_prefix = "fluxion";

  FlowTube tube() const { return FlowTube(profile, material, x_start, x_end); }

  long long element_count() const {
    return breakpoints ? static_cast<long long>(breakpoints->size()) - 1
                       : *n_elements;
  }

  Mesh mesh() const {
    const FlowTube shape = tube();
    if (breakpoints) return build_mesh(shape, *breakpoints);
    return build_mesh(shape, static_cast<std::size_t>(*n_elements));
  }

  /// Node temperatures described by `initial` on the given mesh.
  std::vector<double> initial_temperatures(const Mesh& layout) const {
    std::vector<double> values(layout.size());
    if (const auto* constant = std::get_if<double>(&initial)) {
      std::fill(values.begin(), values.end(), *constant);
      return values;
    }
    if (const auto* list = std::get_if<std::vector<double>>(&initial)) {
      if (list->size() != layout.size()) {
        throw ConfigError("initial: expected " +
                          std::to_string(layout.size()) + " values, got " +
                          std::to_string(list->size()));
      }
      return *list;
    }
    const double length = x_end - x_start;
    for (std::size_t i = 0; i < layout.size(); ++i) {
      const double x = layout.elements()[i].x_node;
      values[i] = std::sin(std::numbers::pi * (x - x_start) / length);
    }
    return values;
  }
};

/// Parses a problem description from JSON text. `source` names the origin
/// (a file path, or a label for inline text) and prefixes every diagnostic.
inline ProblemConfig parse_problem_config(const std::string& text,
                                          const std::string& source) {
  using detail::Json;
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& error) {
    throw ConfigError(source + ": " + error.what());
  }
  if (!root.is_object()) {
    detail::config_fail(source, "top level must be an object");
  }

  try {
    detail::check_fields(root, "config",
                         {"geometry", "material", "domain", "mesh", "bc",
                          "initial", "time", "output"});

    ProblemConfig config;
    const std::string stem = std::filesystem::path(source).stem().string();
    if (!stem.empty()) config.output_prefix = stem;
    config.profile = detail::parse_geometry(
        detail::need_object(root, "config", "geometry"), "geometry");
    config.material = detail::parse_material(
        detail::need_object(root, "config", "material"), "material");

    const Json& domain = detail::need_object(root, "config", "domain");
    detail::check_fields(domain, "domain", {"x_start", "x_end"});
    config.x_start = detail::need_number(domain, "domain", "x_start");
    config.x_end = detail::need_number(domain, "domain", "x_end");
    if (!(config.x_start < config.x_end)) {
      detail::config_fail("domain", "x_start must be less than x_end");
    }

    const Json& mesh = detail::need_object(root, "config", "mesh");
    detail::check_fields(mesh, "mesh", {"n_elements", "breakpoints"});
    const bool has_count = mesh.contains("n_elements");
    const bool has_points = mesh.contains("breakpoints");
    if (has_count == has_points) {
      detail::config_fail(
          "mesh", "give exactly one of 'n_elements' or 'breakpoints'");
    }
    if (has_count) {
      const Json& count = mesh["n_elements"];
      if (!count.is_number_integer() || count.get<long long>() < 1) {
        detail::config_fail("mesh.n_elements", "must be a positive integer");
      }
      config.n_elements = count.get<long long>();
    } else {
      config.breakpoints = detail::as_number_array(mesh["breakpoints"],
                                                   "mesh.breakpoints");
    }

    const Json& bc = detail::need_object(root, "config", "bc");
    detail::check_fields(bc, "bc", {"left", "right"});
    config.bc.first =
        detail::parse_bc_side(detail::need(bc, "bc", "left"), "bc.left");
    config.bc.second =
        detail::parse_bc_side(detail::need(bc, "bc", "right"), "bc.right");

    if (const auto it = root.find("initial"); it != root.end()) {
      config.initial = detail::parse_initial(*it, "initial");
    }
    if (const auto it = root.find("time"); it != root.end()) {
      if (!it->is_object()) detail::config_fail("time", "must be an object");
      config.time = detail::parse_time(*it, "time");
    }
    if (const auto it = root.find("output"); it != root.end()) {
      if (!it->is_object()) {
        detail::config_fail("output", "must be an object");
      }
      detail::check_fields(*it, "output", {"prefix"});
      config.output_prefix = detail::need_string(*it, "output", "prefix");
      if (config.output_prefix.empty()) {
        detail::config_fail("output.prefix", "must not be empty");
      }
    }

    // A dry build catches everything the field checks above cannot see on
    // their own: profile coverage, breakpoint alignment, and the initial
    // list length all get rejected here rather than mid-run.
    const Mesh layout = config.mesh();
    config.initial_temperatures(layout);
    return config;
  } catch (const std::exception& error) {
    throw ConfigError(source + ": " + error.what());
  }
}

/// Loads and validates a problem description file.
inline ProblemConfig load_problem_config(const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return parse_problem_config(buffer.str(), path.string());
}

}  // namespace fluxion

#pragma once

// The batch commands behind the CLI. Each takes a validated ProblemConfig,
// runs the numerical work, and writes CSV artifacts whose bytes depend only
// on the config content.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <future>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fluxion/config.hpp"
#include "fluxion/csv.hpp"
#include "fluxion/discretize.hpp"
#include "fluxion/lattice.hpp"
#include "fluxion/oracles.hpp"
#include "fluxion/solver.hpp"

namespace fluxion {

/// Signed heat flow in the +x direction through a steady network. Read off
/// a held face when one exists (always true for a well-posed steady
/// problem), otherwise off the first interface or the imposed flux.
inline double steady_network_flux(const Mesh& mesh, const BoundaryPair& bc,
                                  const ThermalState& state) {
  const auto& T = state.temperatures;
  if (const auto* left = std::get_if<Dirichlet>(&bc.first)) {
    return flux(left->face_temperature, T.front(),
                mesh.boundary_resistances().first);
  }
  if (const auto* right = std::get_if<Dirichlet>(&bc.second)) {
    return flux(T.back(), right->face_temperature,
                mesh.boundary_resistances().second);
  }
  if (mesh.size() >= 2) {
    return flux(T[0], T[1], mesh.internal_resistances()[0]);
  }
  if (const auto* left = std::get_if<Flux>(&bc.first)) return left->q;
  if (const auto* right = std::get_if<Flux>(&bc.second)) return -right->q;
  return 0.0;
}

/// Solves the steady problem and writes `<prefix>_steady.csv` with one
/// x,T row per node and a trailing `# flux=` line. Returns the file path.
inline std::filesystem::path cmd_steady(
    const ProblemConfig& config, const std::filesystem::path& out_dir) {
  const Mesh mesh = config.mesh();
  const ThermalState state = steady_solve(mesh, config.bc);

  CsvTable table;
  table.header = {"x", "T"};
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    table.rows.push_back({format_number(mesh.elements()[i].x_node),
                          format_number(state.temperatures[i])});
  }
  table.trailing = {"flux=" +
                    format_number(steady_network_flux(mesh, config.bc,
                                                      state))};

  const auto path = out_dir / (config.output_prefix + "_steady.csv");
  write_csv(path, table);
  return path;
}

/// Files written by a transient run.
struct TransientArtifacts {
  std::vector<std::filesystem::path> profiles;
  std::filesystem::path series;
};

/// Runs the transient problem and writes one `<prefix>_t<time>.csv` profile
/// per record time plus `<prefix>_series.csv` with t,heat_content rows for
/// every recorded state (record times, then t_end).
inline TransientArtifacts cmd_transient(
    const ProblemConfig& config, const std::filesystem::path& out_dir) {
  if (!config.time) {
    throw ConfigError("time: required for a transient run");
  }
  const Mesh mesh = config.mesh();
  const ThermalState initial{0.0, config.initial_temperatures(mesh)};
  const SolverConfig solver{config.time->theta, config.time->dt};
  const TransientResult result =
      run_transient(mesh, initial, config.bc, solver, config.time->t_end,
                    config.time->record_times);

  TransientArtifacts artifacts;
  const std::size_t requested = config.time->record_times.size();
  for (std::size_t i = 0; i < requested; ++i) {
    const ThermalState& state = result.states[i];
    CsvTable profile;
    profile.header = {"x", "T"};
    for (std::size_t j = 0; j < mesh.size(); ++j) {
      profile.rows.push_back({format_number(mesh.elements()[j].x_node),
                              format_number(state.temperatures[j])});
    }
    profile.trailing = {"t=" + format_number(state.time)};
    const auto path =
        out_dir / (config.output_prefix + "_t" + format_number(state.time) +
                   ".csv");
    write_csv(path, profile);
    artifacts.profiles.push_back(path);
  }

  CsvTable series;
  series.header = {"t", "heat_content"};
  for (const ThermalState& state : result.states) {
    series.rows.push_back({format_number(state.time),
                           format_number(heat_content(mesh, state))});
  }
  artifacts.series = out_dir / (config.output_prefix + "_series.csv");
  write_csv(artifacts.series, series);
  return artifacts;
}

/// One line of a convergence study. Empty optionals become empty CSV cells.
struct ConvergenceRow {
  long long n_elements = 0;
  std::optional<double> error;
  std::optional<double> order;
};

struct ConvergenceReport {
  std::string mode;
  std::vector<ConvergenceRow> rows;
};

/// True when the config matches the closed-form decaying sine setup:
/// constant area, "sine" initial data, both faces held at zero.
inline bool oracle_comparable(const ProblemConfig& config) {
  const auto* left = std::get_if<Dirichlet>(&config.bc.first);
  const auto* right = std::get_if<Dirichlet>(&config.bc.second);
  return std::holds_alternative<Prism>(config.profile) &&
         std::holds_alternative<SineInitial>(config.initial) &&
         left != nullptr && right != nullptr &&
         left->face_temperature == 0.0 && right->face_temperature == 0.0;
}

namespace detail {

/// Piecewise-linear evaluation of nodal values at x. Under nested doubling
/// every coarse node lies between its element's two fine nodes, so interior
/// queries always interpolate; the clamp only handles exact end hits.
inline double interpolate_nodes(const Mesh& mesh,
                                const std::vector<double>& values, double x) {
  const auto& elements = mesh.elements();
  if (x <= elements.front().x_node) return values.front();
  if (x >= elements.back().x_node) return values.back();
  std::size_t hi = 1;
  while (elements[hi].x_node < x) ++hi;
  const double x0 = elements[hi - 1].x_node;
  const double x1 = elements[hi].x_node;
  const double w = (x - x0) / (x1 - x0);
  return (1.0 - w) * values[hi - 1] + w * values[hi];
}

}  // namespace detail

/// Runs `levels` transient solves, doubling the element count and shrinking
/// dt by 2^dt_power each level, and measures spatial accuracy at t_end.
/// mode "oracle" compares nodes against the decaying sine solution, "self"
/// uses Richardson differences between successive levels, "auto" picks
/// oracle when the config qualifies.
inline ConvergenceReport run_convergence_study(const ProblemConfig& config,
                                               int levels,
                                               const std::string& mode,
                                               int dt_power) {
  if (levels < 3) {
    throw std::domain_error(
        "converge: need at least 3 levels, the order column needs two "
        "successive ratios");
  }
  if (!config.time) {
    throw ConfigError("time: required for a convergence study");
  }
  if (!config.n_elements) {
    throw ConfigError(
        "mesh.n_elements: a convergence study doubles an element count, so "
        "the breakpoint form cannot be used");
  }
  if (!(dt_power >= 0 && dt_power <= 4)) {
    throw std::domain_error("converge: dt power must lie in [0, 4]");
  }

  std::string resolved = mode;
  if (resolved == "auto") {
    resolved = oracle_comparable(config) ? "oracle" : "self";
  }
  if (resolved == "oracle" && !oracle_comparable(config)) {
    throw ConfigError(
        "converge: oracle mode needs a prism, \"sine\" initial data, and "
        "both faces held at zero");
  }
  if (resolved != "oracle" && resolved != "self") {
    throw std::domain_error("converge: unknown mode '" + mode + "'");
  }

  const long long base = *config.n_elements;
  const long long finest = base << (levels - 1);
  if (finest > 10'000'000) {
    throw ConfigError(
        "converge: the finest level would exceed 10^7 elements");
  }

  // The levels are independent solves; run them concurrently and collect
  // in index order so the report is deterministic.
  struct Level {
    Mesh mesh;
    std::vector<double> temperatures;
  };
  std::vector<std::future<Level>> futures;
  for (int level = 0; level < levels; ++level) {
    futures.push_back(std::async(std::launch::async, [&config, dt_power,
                                                      base, level]() {
      ProblemConfig refined = config;
      refined.n_elements = base << level;
      refined.time->dt =
          config.time->dt * std::pow(0.5, dt_power * level);
      Mesh mesh = refined.mesh();
      const ThermalState initial{0.0, refined.initial_temperatures(mesh)};
      const SolverConfig solver{refined.time->theta, refined.time->dt};
      const TransientResult result = run_transient(
          mesh, initial, refined.bc, solver, refined.time->t_end, {});
      return Level{std::move(mesh),
                   std::move(result.states.back().temperatures)};
    }));
  }
  std::vector<Level> solved;
  solved.reserve(futures.size());
  for (auto& future : futures) solved.push_back(future.get());

  ConvergenceReport report;
  report.mode = resolved;
  for (int level = 0; level < levels; ++level) {
    report.rows.push_back({base << level, std::nullopt, std::nullopt});
  }

  // Differences at solver roundoff carry no order information; report them
  // as exact zeros so a study that has converged (or started converged,
  // like an equilibrium) shows 0 rather than machine noise.
  const auto snapped = [](double worst, const std::vector<double>& values) {
    double magnitude = 1.0;
    for (const double v : values) magnitude = std::max(magnitude, std::abs(v));
    return worst <= 1e-13 * magnitude ? 0.0 : worst;
  };

  if (resolved == "oracle") {
    const SlabSpec slab{config.x_end - config.x_start,
                        config.material.conductivity /
                            config.material.volumetric_heat_capacity(),
                        {0.0, 0.0}};
    for (int level = 0; level < levels; ++level) {
      const Level& solution = solved[level];
      double worst = 0.0;
      for (std::size_t j = 0; j < solution.mesh.size(); ++j) {
        const double x = solution.mesh.elements()[j].x_node - config.x_start;
        const double exact =
            slab_mode_temperature(x, config.time->t_end, slab);
        worst = std::max(worst,
                         std::abs(solution.temperatures[j] - exact));
      }
      report.rows[level].error = snapped(worst, solution.temperatures);
    }
  } else {
    // Richardson: the difference between level l and level l+1 estimates
    // the error of level l, sampled at the coarse nodes with the finer
    // solution interpolated onto them.
    for (int level = 0; level + 1 < levels; ++level) {
      const Level& coarse = solved[level];
      const Level& fine = solved[level + 1];
      double worst = 0.0;
      for (std::size_t j = 0; j < coarse.mesh.size(); ++j) {
        const double x = coarse.mesh.elements()[j].x_node;
        const double there =
            detail::interpolate_nodes(fine.mesh, fine.temperatures, x);
        worst = std::max(worst, std::abs(coarse.temperatures[j] - there));
      }
      report.rows[level].error = snapped(worst, coarse.temperatures);
    }
  }

  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto& previous = report.rows[i - 1].error;
    const auto& current = report.rows[i].error;
    if (!previous || !current) continue;
    if (*previous <= 0.0 || *current <= 0.0) continue;
    const double order = std::log2(*previous / *current);
    if (std::isfinite(order)) report.rows[i].order = order;
  }
  return report;
}

/// Writes the convergence report as `<prefix>_converge.csv` with columns
/// n_elements,error,order; cells without a defined value stay empty.
inline std::filesystem::path cmd_converge(
    const ProblemConfig& config, const std::filesystem::path& out_dir,
    int levels, const std::string& mode, int dt_power) {
  const ConvergenceReport report =
      run_convergence_study(config, levels, mode, dt_power);
  CsvTable table;
  table.header = {"n_elements", "error", "order"};
  for (const ConvergenceRow& row : report.rows) {
    table.rows.push_back(
        {format_number(row.n_elements),
         row.error ? format_number(*row.error) : std::string(),
         row.order ? format_number(*row.order) : std::string()});
  }
  table.trailing = {"mode=" + report.mode};
  const auto path = out_dir / (config.output_prefix + "_converge.csv");
  write_csv(path, table);
  return path;
}

/// Renders a field as "site:value" pairs in site order, e.g.
/// "-2:1 -1:-2 0:2".
inline std::string lattice_field_line(const LatticeField& field) {
  std::string out;
  for (const auto& [site, value] : field.values()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(site) + ":" + value.str();
  }
  return out;
}

/// `lattice binomial m n p`: the exact probability and its decimal value.
inline void cmd_lattice_binomial(long long m, long long n,
                                 const std::string& p_text,
                                 std::ostream& out) {
  const Rational p = parse_rational(p_text);
  const Rational exact = binomial_term(m, n, p);
  out << exact.str() << " = "
      << format_number(exact.convert_to<double>()) << "\n";
}

/// `lattice evolve steps`: the divergent second-difference recursion from a
/// unit spike, one line per step.
inline void cmd_lattice_evolve(long long steps, std::ostream& out) {
  LatticeField field = LatticeField::delta();
  for (long long step = 0; step < steps; ++step) {
    field = laplace_step(field);
    out << lattice_field_line(field) << "\n";
  }
}

/// `lattice walk steps lambda`: the mass-preserving walk from a unit spike,
/// one line per step.
inline void cmd_lattice_walk(long long steps, const std::string& lambda_text,
                             std::ostream& out) {
  const Rational lambda = parse_rational(lambda_text);
  LatticeField field = LatticeField::delta();
  for (long long step = 0; step < steps; ++step) {
    field = scaled_heat_step(field, lambda);
    out << lattice_field_line(field) << "\n";
  }
}

/// `lattice kernel x xprime`: the continuum density at one point.
inline void cmd_lattice_kernel(double x, double x_prime, std::ostream& out) {
  out << format_number(heat_kernel(x, x_prime)) << "\n";
}

/// `lattice compare mu p`: the largest binomial-vs-normal gap.
inline void cmd_lattice_compare(long long trials, const std::string& p_text,
                                std::ostream& out) {
  const double p = parse_rational(p_text).convert_to<double>();
  out << format_number(demoivre_compare(trials, p)) << "\n";
}

}  // namespace fluxion

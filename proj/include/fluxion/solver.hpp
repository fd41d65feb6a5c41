#pragma once

// Time stepping and steady solves on the discrete network.
//
// Every element balances C_i dT_i/dt against the fluxes through its interface
// resistances and its boundary condition. The theta-method treats that
// balance (1-theta) explicitly and theta implicitly; the implicit part is a
// symmetric positive-definite tridiagonal system solved directly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fluxion/discretize.hpp"
#include "fluxion/errors.hpp"

namespace fluxion {

/// Node temperatures at one instant, ordered like the mesh elements.
struct ThermalState {
  double time = 0.0;
  std::vector<double> temperatures;
};

/// Temperature held at the tube end face. Acts on the end node through the
/// face-to-node boundary resistance rather than pinning the node itself.
struct Dirichlet {
  double face_temperature = 0.0;
};

/// Prescribed heat flow through the end face, positive into the tube.
struct Flux {
  double q = 0.0;
};

/// No heat crosses the end face.
struct Insulated {};

using BoundaryCondition = std::variant<Dirichlet, Flux, Insulated>;
using BoundaryPair = std::pair<BoundaryCondition, BoundaryCondition>;

/// theta = 0 is fully explicit (conditionally stable), 1 fully implicit,
/// 0.5 the trapezoidal rule.
struct SolverConfig {
  double theta = 1.0;
  double dt = 0.0;
};

/// Heat flow from in to out through a resistance.
inline double flux(double t_in, double t_out, double resistance) {
  detail::require(resistance > 0.0, "flux: resistance must be positive");
  return (t_in - t_out) / resistance;
}

namespace detail {

// Conduction operator L and constant source s for the network, so the net
// inflow at element i is (s - L*T)_i. Boundary conductances appear only for
// Dirichlet ends; Flux ends contribute to s alone and Insulated ends to
// neither.
struct NetworkOperator {
  std::vector<double> diag;    // L diagonal, >= 0
  std::vector<double> off;     // L sub/superdiagonal, <= 0, size n-1
  std::vector<double> source;  // s
};

inline NetworkOperator assemble(const Mesh& mesh, const BoundaryPair& bc) {
  const std::size_t n = mesh.size();
  NetworkOperator op;
  op.diag.assign(n, 0.0);
  op.off.assign(n > 0 ? n - 1 : 0, 0.0);
  op.source.assign(n, 0.0);

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double g = 1.0 / mesh.internal_resistances()[i];
    op.diag[i] += g;
    op.diag[i + 1] += g;
    op.off[i] = -g;
  }

  auto apply_end = [&](const BoundaryCondition& end, std::size_t node,
                       double boundary_resistance) {
    if (const auto* d = std::get_if<Dirichlet>(&end)) {
      const double g = 1.0 / boundary_resistance;
      op.diag[node] += g;
      op.source[node] += g * d->face_temperature;
    } else if (const auto* f = std::get_if<Flux>(&end)) {
      op.source[node] += f->q;
    }
  };
  apply_end(bc.first, 0, mesh.boundary_resistances().first);
  apply_end(bc.second, n - 1, mesh.boundary_resistances().second);
  return op;
}

inline std::vector<double> apply_operator(const NetworkOperator& op,
                                          const std::vector<double>& t) {
  const std::size_t n = t.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = op.diag[i] * t[i];
    if (i > 0) v += op.off[i - 1] * t[i - 1];
    if (i + 1 < n) v += op.off[i] * t[i + 1];
    out[i] = v;
  }
  return out;
}

// Thomas algorithm for a symmetric tridiagonal system. The matrices built
// here are strictly diagonally dominant, so no pivoting is needed.
inline std::vector<double> solve_tridiagonal(std::vector<double> diag,
                                             const std::vector<double>& off,
                                             std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = off[i - 1] / diag[i - 1];
    diag[i] -= w * off[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] = (rhs[i] - off[i] * x[i + 1]) / diag[i];
  }
  return x;
}

inline void check_state(const Mesh& mesh, const ThermalState& state,
                        const char* who) {
  require(state.temperatures.size() == mesh.size(),
          std::string(who) + ": state length does not match the mesh");
}

inline void check_config(const SolverConfig& cfg, const char* who) {
  require(cfg.theta >= 0.0 && cfg.theta <= 1.0,
          std::string(who) + ": theta must lie in [0, 1]");
  require(std::isfinite(cfg.dt) && cfg.dt > 0.0,
          std::string(who) + ": dt must be positive");
}

}  // namespace detail

/// Advances the state by one step of the theta-method.
inline ThermalState theta_step(const Mesh& mesh, const ThermalState& state,
                               const BoundaryPair& bc,
                               const SolverConfig& cfg) {
  detail::check_state(mesh, state, "theta_step");
  detail::check_config(cfg, "theta_step");

  const std::size_t n = mesh.size();
  const auto op = detail::assemble(mesh, bc);
  const auto conduction = detail::apply_operator(op, state.temperatures);

  std::vector<double> diag(n);
  std::vector<double> off(n > 0 ? n - 1 : 0);
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c_over_dt = mesh.elements()[i].capacitance / cfg.dt;
    diag[i] = c_over_dt + cfg.theta * op.diag[i];
    rhs[i] = c_over_dt * state.temperatures[i] -
             (1.0 - cfg.theta) * conduction[i] + op.source[i];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) off[i] = cfg.theta * op.off[i];

  return ThermalState{state.time + cfg.dt,
                      detail::solve_tridiagonal(std::move(diag), off,
                                                std::move(rhs))};
}

/// Largest explicit (theta = 0) step for which the update keeps nonnegative
/// coefficients, min_i C_i / sum_j(1/R_ij) over the element's flux paths.
/// Boundary resistances count only at Dirichlet ends; an element with no
/// paths at all puts no bound on dt, so a fully isolated mesh returns
/// infinity.
inline double stable_dt(const Mesh& mesh, const BoundaryPair& bc) {
  const auto op = detail::assemble(mesh, bc);
  double bound = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    if (op.diag[i] > 0.0) {
      bound = std::min(bound, mesh.elements()[i].capacitance / op.diag[i]);
    }
  }
  return bound;
}

/// Stability bound with both end faces held at fixed temperatures, the most
/// restrictive boundary topology.
inline double stable_dt(const Mesh& mesh) {
  return stable_dt(mesh, BoundaryPair{Dirichlet{}, Dirichlet{}});
}

/// Temperatures with zero net flux at every node. Exact at the nodes for the
/// continuum steady problem, since both are affine in cumulative resistance.
inline ThermalState steady_solve(const Mesh& mesh, const BoundaryPair& bc) {
  const bool left_dirichlet = std::holds_alternative<Dirichlet>(bc.first);
  const bool right_dirichlet = std::holds_alternative<Dirichlet>(bc.second);
  if (!left_dirichlet && !right_dirichlet) {
    auto injected = [](const BoundaryCondition& end) {
      const auto* f = std::get_if<Flux>(&end);
      return f ? f->q : 0.0;
    };
    if (injected(bc.first) + injected(bc.second) != 0.0) {
      throw IllPosedError(
          "steady_solve: no steady state, net boundary flux is nonzero");
    }
    throw IllPosedError(
        "steady_solve: underdetermined, no boundary fixes the temperature "
        "level");
  }
  auto op = detail::assemble(mesh, bc);
  return ThermalState{0.0,
                      detail::solve_tridiagonal(std::move(op.diag), op.off,
                                                std::move(op.source))};
}

/// Total stored heat relative to zero temperature.
inline double heat_content(const Mesh& mesh, const ThermalState& state) {
  detail::check_state(mesh, state, "heat_content");
  double sum = 0.0;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    sum += mesh.elements()[i].capacitance * state.temperatures[i];
  }
  return sum;
}

struct TransientResult {
  std::vector<ThermalState> states;
  /// Nonempty when an unstable explicit run was forced through.
  std::string warning;
};

/// Runs theta_step from the initial state to t_end, snapshotting at each
/// record time and at t_end. Steps land exactly on snapshot times; the
/// nominal dt is shortened for the last partial step before each one.
inline TransientResult run_transient(const Mesh& mesh,
                                     const ThermalState& initial,
                                     const BoundaryPair& bc,
                                     const SolverConfig& cfg, double t_end,
                                     const std::vector<double>& record_times,
                                     bool allow_unstable = false) {
  detail::check_state(mesh, initial, "run_transient");
  detail::check_config(cfg, "run_transient");
  detail::require(std::isfinite(t_end) && t_end >= initial.time,
                  "run_transient: t_end must not precede the initial time");
  for (std::size_t i = 0; i < record_times.size(); ++i) {
    detail::require(record_times[i] >= initial.time &&
                        record_times[i] <= t_end,
                    "run_transient: record times must lie in [start, t_end]");
    detail::require(i == 0 || record_times[i - 1] < record_times[i],
                    "run_transient: record times must be strictly increasing");
  }

  TransientResult result;
  if (cfg.theta == 0.0) {
    const double limit = stable_dt(mesh, bc);
    if (cfg.dt > limit) {
      if (!allow_unstable) {
        throw StabilityError(
            "run_transient: explicit dt " + std::to_string(cfg.dt) +
            " exceeds the stable limit " + std::to_string(limit));
      }
      result.warning =
          "explicit dt exceeds the stable limit; solution may diverge";
    }
  }

  std::vector<double> targets = record_times;
  if (targets.empty() || targets.back() < t_end) targets.push_back(t_end);

  ThermalState state = initial;
  for (double target : targets) {
    while (state.time < target) {
      const double rem = target - state.time;
      // Absorb accumulated roundoff so a full step followed by a sliver
      // never happens.
      const bool landing = rem <= cfg.dt * (1.0 + 1e-9);
      state = theta_step(mesh, state, bc,
                         SolverConfig{cfg.theta, landing ? rem : cfg.dt});
      if (landing) state.time = target;
    }
    result.states.push_back(state);
  }
  return result;
}

}  // namespace fluxion
